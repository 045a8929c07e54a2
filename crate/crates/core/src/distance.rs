//! Rotation distances under restricted sets of rotation locations.
//!
//! Right-arm distance has a closed form through normal forms. Restricted
//! right-arm distance is decided by partial reduction and certified by
//! explicit rotation scripts. Every other question is answered by breadth
//! first search over the rotation graph on all trees with `n` carets.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilyInstance;
use crate::group::{partially_reduce_pair, reduce_pair, word_of_pair, NormalForm, TreePair};
use crate::rotation::{
    apply_word, can_rotate, rotate, rotate_at, word_of_steps, Direction,
    RotationStep,
};
use crate::tree::{enumerate_trees_capped, CaretLocation, Tree, DEFAULT_ENUMERATION_CAP};
use crate::word::{Generator, Sign, SignedGenerator, Word};

/// Default upper bound on `n` for graph searches.
pub const DEFAULT_BFS_CAP: usize = 12;

/// Upper bound on `n` for the ordinary rotation graph diameter.
pub const DIAMETER_CAP: usize = 11;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum GenSetMode {
    Finite,
    AllRightArm,
    AllNodes,
}

/// The spine locations at which rotations are permitted.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GenSet {
    mode: GenSetMode,
    right_levels: BTreeSet<usize>,
    left_levels: BTreeSet<usize>,
}

impl GenSet {
    pub fn finite(
        right: impl IntoIterator<Item = usize>,
        left: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let right_levels: BTreeSet<usize> = right.into_iter().collect();
        let left_levels: BTreeSet<usize> = left.into_iter().collect();
        if !right_levels.contains(&0) {
            return Err(Error::InvalidGenSet("a finite generating set must contain x0".into()));
        }
        if left_levels.contains(&0) {
            return Err(Error::InvalidGenSet("left-arm levels start at 1".into()));
        }
        Ok(GenSet { mode: GenSetMode::Finite, right_levels, left_levels })
    }

    /// `{x0, x1}`, the restricted rotation set.
    pub fn rr() -> Self {
        Self::right_prefix(1)
    }

    /// `{x0, ..., x_m}`.
    pub fn right_prefix(m: usize) -> Self {
        Self::finite(0..=m, []).expect("contains x0")
    }

    /// `{x0, ..., x_I, y1, ..., y_I}`.
    pub fn spinal_prefix(level: usize) -> Self {
        Self::finite(0..=level, 1..=level).expect("contains x0")
    }

    pub fn all_right_arm() -> Self {
        GenSet { mode: GenSetMode::AllRightArm, right_levels: BTreeSet::new(), left_levels: BTreeSet::new() }
    }

    pub fn all_nodes() -> Self {
        GenSet { mode: GenSetMode::AllNodes, right_levels: BTreeSet::new(), left_levels: BTreeSet::new() }
    }

    pub fn mode(&self) -> GenSetMode {
        self.mode
    }

    pub fn right_levels(&self) -> &BTreeSet<usize> {
        &self.right_levels
    }

    pub fn left_levels(&self) -> &BTreeSet<usize> {
        &self.left_levels
    }

    /// True for sets that only rotate on the right arm.
    pub fn is_right_arm(&self) -> bool {
        match self.mode {
            GenSetMode::Finite => self.left_levels.is_empty(),
            GenSetMode::AllRightArm => true,
            GenSetMode::AllNodes => false,
        }
    }

    pub fn right_arm_subset(&self) -> GenSet {
        match self.mode {
            GenSetMode::Finite => GenSet {
                mode: GenSetMode::Finite,
                right_levels: self.right_levels.clone(),
                left_levels: BTreeSet::new(),
            },
            _ => GenSet::all_right_arm(),
        }
    }

    /// Smallest nonzero right level, `None` when only the root is allowed.
    pub fn smallest_nonzero_right(&self) -> Option<usize> {
        match self.mode {
            GenSetMode::Finite => self.right_levels.iter().copied().find(|&l| l > 0),
            _ => Some(1),
        }
    }

    /// Largest permitted right level that does not exceed `level`.
    fn floor_right(&self, level: usize) -> Option<usize> {
        match self.mode {
            GenSetMode::Finite => self.right_levels.range(..=level).next_back().copied(),
            _ => Some(level),
        }
    }

    pub fn allows(&self, step: RotationStep) -> bool {
        let level = step.location.level();
        match (self.mode, step.location.arm()) {
            (GenSetMode::AllNodes, _) | (GenSetMode::AllRightArm, crate::tree::Arm::RightArm) => true,
            (GenSetMode::AllRightArm, crate::tree::Arm::LeftArm) => false,
            (GenSetMode::Finite, crate::tree::Arm::RightArm) => self.right_levels.contains(&level),
            (GenSetMode::Finite, crate::tree::Arm::LeftArm) => self.left_levels.contains(&level),
        }
    }

    /// Whether every rotation permitted by `self` is permitted by `other`.
    pub fn is_subset_of(&self, other: &GenSet) -> bool {
        match (self.mode, other.mode) {
            (_, GenSetMode::AllNodes) => true,
            (GenSetMode::AllNodes, _) => false,
            (GenSetMode::AllRightArm, GenSetMode::AllRightArm) => true,
            (GenSetMode::AllRightArm, GenSetMode::Finite) => false,
            (GenSetMode::Finite, GenSetMode::AllRightArm) => self.left_levels.is_empty(),
            (GenSetMode::Finite, GenSetMode::Finite) => {
                self.right_levels.is_subset(&other.right_levels)
                    && self.left_levels.is_subset(&other.left_levels)
            }
        }
    }

    /// Permitted spine rotations applicable to `t`, in a fixed order.
    pub fn spine_steps(&self, t: &Tree) -> Vec<RotationStep> {
        let mut out = Vec::new();
        let dirs = [Direction::LeftRotation, Direction::RightRotation];
        let right_len = t.arm_len(crate::tree::Arm::RightArm);
        let left_len = t.arm_len(crate::tree::Arm::LeftArm);
        for level in 0..right_len {
            for dir in dirs {
                let step = RotationStep::new(CaretLocation::right(level), dir);
                if self.allows(step) && can_rotate(t, step) {
                    out.push(step);
                }
            }
        }
        for level in 1..=left_len {
            for dir in dirs {
                let step = RotationStep::new(CaretLocation::left(level), dir);
                if self.allows(step) && can_rotate(t, step) {
                    out.push(step);
                }
            }
        }
        out
    }

    /// Every tree one permitted rotation away from `t`.
    pub fn neighbors(&self, t: &Tree) -> Vec<Tree> {
        if self.mode == GenSetMode::AllNodes {
            let mut out = Vec::new();
            for path in t.caret_paths() {
                for dir in [Direction::LeftRotation, Direction::RightRotation] {
                    if let Ok(u) = rotate_at(t, &path, dir) {
                        out.push(u);
                    }
                }
            }
            out
        } else {
            self.spine_steps(t).into_iter().map(|s| rotate(t, s).expect("applicable")).collect()
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "right-all" => return Ok(GenSet::all_right_arm()),
            "all-nodes" => return Ok(GenSet::all_nodes()),
            _ => {}
        }
        let mut right = Vec::new();
        let mut left = Vec::new();
        for token in text.split(',') {
            let (family, digits) = token.split_at(token.len().min(1));
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::InvalidGenSet(format!("bad token {token:?}")));
            }
            let level: usize =
                digits.parse().map_err(|_| Error::InvalidGenSet(format!("bad token {token:?}")))?;
            match family {
                "x" => right.push(level),
                "y" if level >= 1 => left.push(level),
                _ => return Err(Error::InvalidGenSet(format!("bad token {token:?}"))),
            }
        }
        GenSet::finite(right, left)
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            GenSetMode::AllRightArm => f.write_str("right-all"),
            GenSetMode::AllNodes => f.write_str("all-nodes"),
            GenSetMode::Finite => {
                let tokens: Vec<String> = self
                    .right_levels
                    .iter()
                    .map(|l| format!("x{l}"))
                    .chain(self.left_levels.iter().map(|l| format!("y{l}")))
                    .collect();
                f.write_str(&tokens.join(","))
            }
        }
    }
}

impl FromStr for GenSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GenSet::parse(s)
    }
}

impl Serialize for GenSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How a distance was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Method {
    /// Closed form or constructive script.
    Formula,
    /// Breadth first search over the rotation graph.
    Search,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistanceResult {
    pub n: usize,
    pub genset: GenSet,
    pub defined: bool,
    /// Exact distance, when defined and computed exactly.
    pub distance: Option<usize>,
    pub lower_bound: Option<usize>,
    pub upper_bound: Option<usize>,
    pub witness: Option<Word>,
    pub method: Method,
}

/// Worst-case distance for `n` carets under `genset`, where one is known.
pub fn theoretical_upper_bound(n: usize, genset: &GenSet) -> Option<usize> {
    match genset.mode {
        GenSetMode::AllRightArm => Some((2 * n).saturating_sub(2)),
        GenSetMode::Finite if n >= 3 => Some(4 * n - 8),
        GenSetMode::AllNodes if n >= 11 => Some(2 * n - 6),
        _ => None,
    }
}

fn check_sizes(t1: &Tree, t2: &Tree) -> Result<usize> {
    let (a, b) = (t1.carets(), t2.carets());
    if a != b {
        return Err(Error::SizeMismatch(a, b));
    }
    if a == 0 {
        return Err(Error::EmptyTree);
    }
    Ok(a)
}

fn validated(t1: &Tree, t2: &Tree, script: Word, genset: &GenSet) -> Result<Word> {
    let reached = apply_word(t1, &script)
        .map_err(|e| Error::InternalInvariantViolation(format!("script {script} on {t1}: {e}")))?;
    if &reached != t2 {
        return Err(Error::InternalInvariantViolation(format!(
            "script {script} carries {t1} to {reached}, not {t2}"
        )));
    }
    for g in script.signed() {
        let step = crate::rotation::step_of_generator(g);
        if !genset.allows(step) {
            return Err(Error::InternalInvariantViolation(format!("script uses {g} outside {genset}")));
        }
    }
    Ok(script)
}

/// Right-arm rotation distance: the infinite-generating-set length of the pair.
pub fn d_ra(t1: &Tree, t2: &Tree) -> Result<DistanceResult> {
    let n = check_sizes(t1, t2)?;
    let script = right_arm_script(t1, t2)?;
    Ok(DistanceResult {
        n,
        genset: GenSet::all_right_arm(),
        defined: true,
        distance: Some(script.len()),
        lower_bound: None,
        upper_bound: theoretical_upper_bound(n, &GenSet::all_right_arm()),
        witness: Some(script),
        method: Method::Formula,
    })
}

fn right_arm_script(t1: &Tree, t2: &Tree) -> Result<Word> {
    let pair = TreePair::new(t1.clone(), t2.clone())?;
    let nf = word_of_pair(&reduce_pair(&pair))?;
    validated(t1, t2, nf.to_word(), &GenSet::all_right_arm())
}

/// Whether `t2` can be reached from `t1` using rotations at the right-arm
/// levels of `genset`.
///
/// The partially reduced normal form of the pair as given must avoid every
/// `x_t` with `1 <= t < i_1`, where `i_1` is the smallest nonzero level.
pub fn rra_defined(t1: &Tree, t2: &Tree, genset: &GenSet) -> Result<bool> {
    check_sizes(t1, t2)?;
    if !genset.is_right_arm() {
        return match genset.mode {
            GenSetMode::AllNodes => Ok(true),
            _ => Err(Error::NotRightArmSet),
        };
    }
    let pair = TreePair { t1: t1.clone(), t2: t2.clone() };
    let nf = word_of_pair(&partially_reduce_pair(&pair))?;
    Ok(first_blocked_letter(&nf, genset).is_none())
}

fn first_blocked_letter(nf: &NormalForm, genset: &GenSet) -> Option<usize> {
    let limit = genset.smallest_nonzero_right().unwrap_or(usize::MAX);
    nf.positive()
        .into_iter()
        .chain(nf.negative())
        .map(|(i, _)| i)
        .find(|&i| i >= 1 && i < limit)
}

/// A valid rotation script from `t1` to `t2` using only `genset`'s locations.
///
/// For right-arm sets the pair is partially reduced, then `t1` is flattened
/// to the all-right tree and rebuilt into `t2`, each letter `x_j` with `j`
/// outside the set realized as `x0^-d x_i x0^d` for the largest permitted
/// `i = j - d`. The script is not minimal in general.
pub fn witness_sequence(t1: &Tree, t2: &Tree, genset: &GenSet) -> Result<Word> {
    check_sizes(t1, t2)?;
    match genset.mode {
        GenSetMode::AllRightArm | GenSetMode::AllNodes => right_arm_script(t1, t2),
        GenSetMode::Finite if genset.left_levels.is_empty() => {
            if !rra_defined(t1, t2, genset)? {
                return Err(Error::NotDefined);
            }
            let pair = partially_reduce_pair(&TreePair { t1: t1.clone(), t2: t2.clone() });
            let nf = word_of_pair(&pair)?;
            let mut script = Word::identity();
            for g in nf.to_word().signed() {
                for h in conjugate_into(g, genset)? {
                    script.push(h);
                }
            }
            validated(t1, t2, script, genset)
        }
        GenSetMode::Finite => {
            let right = genset.right_arm_subset();
            if rra_defined(t1, t2, &right)? {
                return witness_sequence(t1, t2, &right);
            }
            let result = bfs_distance(t1, t2, genset)?;
            result.witness.ok_or(Error::NotDefined)
        }
    }
}

/// `x_j^{±1}` rewritten as `x0^-d x_i^{±1} x0^d` with `i` permitted.
fn conjugate_into(g: SignedGenerator, genset: &GenSet) -> Result<Vec<SignedGenerator>> {
    let j = g.generator.index();
    let i = genset.floor_right(j).ok_or(Error::NotDefined)?;
    if i == 0 && j > 0 {
        return Err(Error::InternalInvariantViolation(format!("letter {g} below the smallest level")));
    }
    let d = j - i;
    let x0 = Generator::x(0);
    let mut out = vec![SignedGenerator::new(x0, Sign::Neg); d];
    out.push(SignedGenerator::new(Generator::x(i), g.sign));
    out.extend(std::iter::repeat_n(SignedGenerator::new(x0, Sign::Pos), d));
    Ok(out)
}

/// Exact distance by breadth first search from `t1`.
pub fn bfs_distance(t1: &Tree, t2: &Tree, genset: &GenSet) -> Result<DistanceResult> {
    bfs_distance_capped(t1, t2, genset, DEFAULT_BFS_CAP)
}

pub fn bfs_distance_capped(t1: &Tree, t2: &Tree, genset: &GenSet, cap: usize) -> Result<DistanceResult> {
    let n = check_sizes(t1, t2)?;
    if n > cap {
        return Err(Error::ResourceCap { what: "breadth first search", n, cap });
    }
    let path = search_path(t1, t2, genset);
    let witness = match (&path, genset.mode) {
        (Some(p), GenSetMode::Finite | GenSetMode::AllRightArm) => Some(steps_along(p, genset)?),
        _ => None,
    };
    let distance = path.as_ref().map(|p| p.len() - 1);
    Ok(DistanceResult {
        n,
        genset: genset.clone(),
        defined: distance.is_some(),
        distance,
        lower_bound: None,
        upper_bound: theoretical_upper_bound(n, genset),
        witness,
        method: Method::Search,
    })
}

/// Shortest path of trees from `t1` to `t2`; ties go to the neighbor that
/// comes first in canonical tree order.
fn search_path(t1: &Tree, t2: &Tree, genset: &GenSet) -> Option<Vec<Tree>> {
    let target = t2.encode();
    let mut parent: HashMap<u64, u64> = HashMap::new();
    let mut queue = VecDeque::new();
    parent.insert(t1.encode(), u64::MAX);
    queue.push_back(t1.clone());
    while let Some(t) = queue.pop_front() {
        let code = t.encode();
        if code == target {
            let mut path = vec![t];
            let mut cur = code;
            while let Some(&p) = parent.get(&cur) {
                if p == u64::MAX {
                    break;
                }
                path.push(Tree::decode(p).expect("valid code"));
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        let mut next = genset.neighbors(&t);
        next.sort_by_cached_key(|u| u.to_string());
        for u in next {
            let c = u.encode();
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(c) {
                e.insert(code);
                queue.push_back(u);
            }
        }
    }
    None
}

/// The rotation script that walks a path of trees.
fn steps_along(path: &[Tree], genset: &GenSet) -> Result<Word> {
    let mut steps = Vec::with_capacity(path.len());
    for w in path.windows(2) {
        let step = genset
            .spine_steps(&w[0])
            .into_iter()
            .find(|&s| rotate(&w[0], s).as_ref() == Ok(&w[1]))
            .ok_or_else(|| Error::InternalInvariantViolation("path edge is not a rotation".into()))?;
        steps.push(step);
    }
    Ok(word_of_steps(&steps))
}

/// Definedness for any set: the closed criterion for right-arm sets, search otherwise.
pub fn is_defined(t1: &Tree, t2: &Tree, genset: &GenSet) -> Result<bool> {
    if genset.is_right_arm() || genset.mode == GenSetMode::AllNodes {
        rra_defined(t1, t2, genset)
    } else {
        Ok(bfs_distance(t1, t2, genset)?.defined)
    }
}

/// Single-source search result over a [`RotationGraph`].
#[derive(Clone, Debug)]
pub struct Bfs {
    pub dist: Vec<u32>,
    pub parent: Vec<u32>,
}

pub const UNREACHED: u32 = u32::MAX;

impl Bfs {
    pub fn reached(&self, v: usize) -> bool {
        self.dist[v] != UNREACHED
    }

    /// Path of vertex indices from the source to `v`.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        if !self.reached(v) {
            return None;
        }
        let mut path = vec![v];
        let mut cur = v;
        while self.parent[cur] != UNREACHED {
            cur = self.parent[cur] as usize;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// All trees with `n` carets in canonical order, joined by permitted rotations.
pub struct RotationGraph {
    n: usize,
    genset: GenSet,
    trees: Vec<Tree>,
    index: HashMap<u64, u32>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl RotationGraph {
    pub fn build(n: usize, genset: &GenSet) -> Result<Self> {
        Self::build_capped(n, genset, DEFAULT_BFS_CAP)
    }

    pub fn build_capped(n: usize, genset: &GenSet, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::ResourceCap { what: "rotation graph", n, cap });
        }
        if n == 0 {
            return Err(Error::EmptyTree);
        }
        let trees = enumerate_trees_capped(n, cap.max(DEFAULT_ENUMERATION_CAP))?;
        let index: HashMap<u64, u32> =
            trees.iter().enumerate().map(|(i, t)| (t.encode(), i as u32)).collect();
        let mut offsets = Vec::with_capacity(trees.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for t in &trees {
            let mut nb: Vec<u32> = genset.neighbors(t).iter().map(|u| index[&u.encode()]).collect();
            nb.sort_unstable();
            nb.dedup();
            targets.extend(nb);
            offsets.push(targets.len());
        }
        Ok(RotationGraph { n, genset: genset.clone(), trees, index, offsets, targets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn genset(&self) -> &GenSet {
        &self.genset
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn tree(&self, v: usize) -> &Tree {
        &self.trees[v]
    }

    pub fn index_of(&self, t: &Tree) -> Option<usize> {
        if t.carets() != self.n {
            return None;
        }
        self.index.get(&t.encode()).map(|&i| i as usize)
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn bfs(&self, src: usize) -> Bfs {
        self.bfs_limited(src, u32::MAX)
    }

    /// Search that stops expanding at depth `radius`.
    pub fn bfs_limited(&self, src: usize, radius: u32) -> Bfs {
        let mut dist = vec![UNREACHED; self.len()];
        let mut parent = vec![UNREACHED; self.len()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            if dist[v] >= radius {
                continue;
            }
            for &u in self.neighbors(v) {
                let u = u as usize;
                if dist[u] == UNREACHED {
                    dist[u] = dist[v] + 1;
                    parent[u] = v as u32;
                    queue.push_back(u);
                }
            }
        }
        Bfs { dist, parent }
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        let d = self.bfs(a).dist[b];
        (d != UNREACHED).then_some(d as usize)
    }

    /// A geodesic rotation script from vertex `a` to vertex `b`.
    pub fn witness(&self, a: usize, b: usize) -> Result<Option<Word>> {
        if self.genset.mode == GenSetMode::AllNodes {
            return Ok(None);
        }
        let Some(path) = self.bfs(a).path_to(b) else { return Ok(None) };
        let trees: Vec<Tree> = path.into_iter().map(|v| self.trees[v].clone()).collect();
        steps_along(&trees, &self.genset).map(Some)
    }

    /// Connected component label of every vertex.
    pub fn components(&self) -> Vec<u32> {
        let mut comp = vec![UNREACHED; self.len()];
        let mut next = 0;
        for s in 0..self.len() {
            if comp[s] != UNREACHED {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = next;
            while let Some(v) = stack.pop() {
                for &u in self.neighbors(v) {
                    if comp[u as usize] == UNREACHED {
                        comp[u as usize] = next;
                        stack.push(u as usize);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Largest finite distance over all ordered pairs, with the first pair
    /// attaining it and the number of connected ordered pairs.
    pub fn max_distance(&self) -> (usize, (usize, usize), usize) {
        let mut best = (0, (0, 0));
        let mut connected = 0;
        for a in 0..self.len() {
            let bfs = self.bfs(a);
            for (b, &d) in bfs.dist.iter().enumerate() {
                if d == UNREACHED {
                    continue;
                }
                connected += 1;
                if d as usize > best.0 {
                    best = (d as usize, (a, b));
                }
            }
        }
        (best.0, best.1, connected)
    }

    /// Largest eccentricity over `sources`, by bit-parallel search from
    /// many sources at once.
    pub fn max_eccentricity(&self, sources: &[usize]) -> usize {
        const LANES: usize = 4;
        const BATCH: usize = 64 * LANES;
        let nv = self.len();
        let mut best = 0;
        let mut visited = vec![[0u64; LANES]; nv];
        let mut frontier = vec![[0u64; LANES]; nv];
        let mut next = vec![[0u64; LANES]; nv];
        for batch in sources.chunks(BATCH) {
            for v in 0..nv {
                visited[v] = [0; LANES];
                frontier[v] = [0; LANES];
            }
            for (b, &s) in batch.iter().enumerate() {
                visited[s][b / 64] |= 1 << (b % 64);
                frontier[s][b / 64] |= 1 << (b % 64);
            }
            let mut depth = 0;
            loop {
                let mut any = false;
                for v in 0..nv {
                    let mut acc = [0u64; LANES];
                    for &u in self.neighbors(v) {
                        let f = &frontier[u as usize];
                        for l in 0..LANES {
                            acc[l] |= f[l];
                        }
                    }
                    for l in 0..LANES {
                        acc[l] &= !visited[v][l];
                        any |= acc[l] != 0;
                    }
                    next[v] = acc;
                }
                if !any {
                    break;
                }
                depth += 1;
                for v in 0..nv {
                    for l in 0..LANES {
                        visited[v][l] |= next[v][l];
                    }
                }
                std::mem::swap(&mut frontier, &mut next);
            }
            best = best.max(depth);
        }
        best
    }
}

/// Diameter of the ordinary rotation graph (rotations at every caret).
pub fn d_r_ordinary_diameter(n: usize) -> Result<usize> {
    if n > DIAMETER_CAP {
        return Err(Error::ResourceCap { what: "ordinary rotation diameter", n, cap: DIAMETER_CAP });
    }
    let g = RotationGraph::build_capped(n, &GenSet::all_nodes(), DIAMETER_CAP)?;
    // Mirroring is a graph automorphism, so one tree per mirror pair suffices.
    let sources: Vec<usize> = (0..g.len())
        .filter(|&v| g.index_of(&g.tree(v).mirror()).is_some_and(|m| v <= m))
        .collect();
    Ok(g.max_eccentricity(&sources))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpperBoundReport {
    pub n: usize,
    pub genset: GenSet,
    pub bound: Option<usize>,
    pub max_distance: usize,
    pub attained_by: (Tree, Tree),
    pub defined_pairs: usize,
    pub total_pairs: usize,
    pub holds: bool,
}

/// Largest distance over all defined pairs with `n` carets, against the bound.
pub fn check_upper_bounds(n: usize, genset: &GenSet) -> Result<UpperBoundReport> {
    let g = RotationGraph::build(n, genset)?;
    let (max_distance, (a, b), defined_pairs) = g.max_distance();
    let bound = theoretical_upper_bound(n, genset);
    Ok(UpperBoundReport {
        n,
        genset: genset.clone(),
        bound,
        max_distance,
        attained_by: (g.tree(a).clone(), g.tree(b).clone()),
        defined_pairs,
        total_pairs: g.len() * g.len(),
        holds: bound.is_none_or(|b| max_distance <= b),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinednessReport {
    pub n: usize,
    pub genset: GenSet,
    pub pairs: usize,
    pub defined: usize,
    pub exceptions: usize,
    /// First pair, in canonical order, where the criterion and search disagree.
    pub first_exception: Option<(Tree, Tree)>,
}

/// Compares [`rra_defined`] with connectivity of the rotation graph over all pairs.
pub fn check_definedness(n: usize, genset: &GenSet) -> Result<DefinednessReport> {
    if !genset.is_right_arm() {
        return Err(Error::NotRightArmSet);
    }
    let g = RotationGraph::build(n, genset)?;
    let comp = g.components();
    let mut report = DefinednessReport {
        n,
        genset: genset.clone(),
        pairs: 0,
        defined: 0,
        exceptions: 0,
        first_exception: None,
    };
    for a in 0..g.len() {
        for b in 0..g.len() {
            let defined = rra_defined(g.tree(a), g.tree(b), genset)?;
            report.pairs += 1;
            report.defined += defined as usize;
            if defined != (comp[a] == comp[b]) {
                report.exceptions += 1;
                report.first_exception.get_or_insert_with(|| (g.tree(a).clone(), g.tree(b).clone()));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub genset: GenSet,
    pub distance: usize,
    pub predicted_lower_bound: Option<usize>,
    pub predicted_upper_bound: Option<usize>,
    pub holds: bool,
}

/// Exact distance of a family pair under the family's set, against its bounds.
pub fn check_lower_bound_family(inst: &FamilyInstance) -> Result<LowerBoundReport> {
    check_lower_bound_with(inst, &inst.genset)
}

pub fn check_lower_bound_with(inst: &FamilyInstance, genset: &GenSet) -> Result<LowerBoundReport> {
    let r = bfs_distance(&inst.pair.t1, &inst.pair.t2, genset)?;
    let distance = r.distance.ok_or(Error::NotDefined)?;
    let lower = inst.predicted_lower_bound;
    let upper = inst.predicted_upper_bound;
    Ok(LowerBoundReport {
        n: inst.n,
        genset: genset.clone(),
        distance,
        predicted_lower_bound: lower,
        predicted_upper_bound: upper,
        holds: lower.is_none_or(|l| distance >= l) && upper.is_none_or(|u| distance <= u),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PersistenceReport {
    pub tree: Tree,
    pub pair: [usize; 2],
    pub radius: usize,
    /// Fewest permitted rotations after which the pair can be split.
    pub first_split_depth: Option<usize>,
    pub visited_within_radius: usize,
    pub holds: bool,
}

/// Searches from `t` and checks that every tree within `radius` keeps `pair`.
pub fn check_sibling_persistence(
    t: &Tree,
    pair: [usize; 2],
    genset: &GenSet,
    radius: usize,
) -> Result<PersistenceReport> {
    if !t.sibling_pairs().contains(&pair) {
        return Err(Error::NotASiblingPair(pair[0], pair[1]));
    }
    let g = RotationGraph::build(t.carets(), genset)?;
    let src = g.index_of(t).expect("tree is enumerated");
    let bfs = g.bfs(src);
    let mut first_split: Option<usize> = None;
    let mut visited = 0;
    for (v, &d) in bfs.dist.iter().enumerate() {
        if d == UNREACHED {
            continue;
        }
        if d as usize <= radius {
            visited += 1;
        }
        if !g.tree(v).has_sibling_pair(pair[0]) {
            first_split = Some(first_split.map_or(d as usize, |f| f.min(d as usize)));
        }
    }
    Ok(PersistenceReport {
        tree: t.clone(),
        pair,
        radius,
        first_split_depth: first_split,
        visited_within_radius: visited,
        holds: first_split.is_none_or(|f| f > radius),
    })
}

/// Persistence of a family's tracked pairs: the negative tree at radius
/// `2n - 2m - 3` and the positive tree at `2n - 2m - 2`.
pub fn family_sibling_persistence(inst: &FamilyInstance) -> Result<(PersistenceReport, PersistenceReport)> {
    let tracked = inst.tracked.ok_or_else(|| Error::ParameterViolation("family tracks no pairs".into()))?;
    let m = inst.m.ok_or_else(|| Error::ParameterViolation("family has no level m".into()))?;
    let n = inst.n;
    let r1 = (2 * n).checked_sub(2 * m + 3).ok_or_else(|| Error::ParameterViolation("n too small".into()))?;
    let neg = check_sibling_persistence(&inst.pair.t1, tracked.negative, &inst.genset, r1)?;
    let pos = check_sibling_persistence(&inst.pair.t2, tracked.positive, &inst.genset, r1 + 1)?;
    Ok((neg, pos))
}
