//! On-disk table of computed distances.
//!
//! One CSV file per directory with header `n,genset,tree_a,tree_b,distance`;
//! an absent distance is written as `undefined`. Every save rewrites the
//! whole file through a temporary file renamed into place.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::distance::GenSet;
use crate::error::{Error, Result};
use crate::tree::Tree;

pub const CACHE_FILE: &str = "distances.csv";

#[derive(Serialize, Deserialize)]
struct Row {
    n: usize,
    genset: String,
    tree_a: String,
    tree_b: String,
    distance: String,
}

type Key = (usize, String, String, String);

pub struct DistanceCache {
    dir: PathBuf,
    rows: BTreeMap<Key, Option<usize>>,
    dirty: bool,
}

fn cache_err(e: impl std::fmt::Display) -> Error {
    Error::Cache(e.to_string())
}

impl DistanceCache {
    /// Opens the cache in `dir`, creating the directory if needed.
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(cache_err)?;
        let mut rows = BTreeMap::new();
        let path = dir.join(CACHE_FILE);
        if path.exists() {
            let mut reader = csv::Reader::from_path(&path).map_err(cache_err)?;
            for row in reader.deserialize::<Row>() {
                let row = row.map_err(cache_err)?;
                let distance = match row.distance.as_str() {
                    "undefined" => None,
                    d => Some(d.parse().map_err(|_| cache_err(format!("bad distance {d:?}")))?),
                };
                rows.insert((row.n, row.genset, row.tree_a, row.tree_b), distance);
            }
        }
        Ok(DistanceCache { dir: dir.to_path_buf(), rows, dirty: false })
    }

    fn key(genset: &GenSet, a: &Tree, b: &Tree) -> Key {
        (a.carets(), genset.to_string(), a.to_string(), b.to_string())
    }

    /// `Some(d)` when the pair is cached, with `d = None` for undefined.
    pub fn get(&self, genset: &GenSet, a: &Tree, b: &Tree) -> Option<Option<usize>> {
        self.rows.get(&Self::key(genset, a, b)).copied()
    }

    pub fn insert(&mut self, genset: &GenSet, a: &Tree, b: &Tree, distance: Option<usize>) {
        let prev = self.rows.insert(Self::key(genset, a, b), distance);
        self.dirty |= prev != Some(distance);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn save(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(cache_err)?;
        {
            let mut writer = csv::Writer::from_writer(tmp.as_file_mut());
            for ((n, genset, tree_a, tree_b), d) in &self.rows {
                writer
                    .serialize(Row {
                        n: *n,
                        genset: genset.clone(),
                        tree_a: tree_a.clone(),
                        tree_b: tree_b.clone(),
                        distance: d.map_or("undefined".to_string(), |d| d.to_string()),
                    })
                    .map_err(cache_err)?;
            }
            writer.flush().map_err(cache_err)?;
        }
        tmp.as_file_mut().flush().map_err(cache_err)?;
        tmp.persist(self.dir.join(CACHE_FILE)).map_err(cache_err)?;
        self.dirty = false;
        Ok(())
    }
}
