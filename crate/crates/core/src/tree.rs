//! Rooted binary trees measured in carets.
//!
//! A tree with `n` carets has `n + 1` leaves, numbered `0..=n` from left to
//! right. The *right side* of a tree is the root together with every caret
//! reachable from it by right edges; the *left arm* is every caret reachable
//! from the root by one or more left edges. Together they form the spine.
//!
//! Text form (exact, no other whitespace): `tree := "*" | "(" tree " " tree ")"`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on `n` accepted by [`enumerate_trees`].
pub const DEFAULT_ENUMERATION_CAP: usize = 14;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Tree {
    Leaf,
    Caret(Box<Tree>, Box<Tree>),
}

/// Which child a node is, or which way a path step goes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    fn letter(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arm {
    RightArm,
    LeftArm,
}

impl Arm {
    fn side(self) -> Side {
        match self {
            Arm::RightArm => Side::Right,
            Arm::LeftArm => Side::Left,
        }
    }
}

/// A caret on the spine: right-arm level 0 is the root, left-arm levels start at 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaretLocation {
    arm: Arm,
    level: usize,
}

impl CaretLocation {
    pub const ROOT: CaretLocation = CaretLocation { arm: Arm::RightArm, level: 0 };

    pub fn new(arm: Arm, level: usize) -> Result<Self> {
        if arm == Arm::LeftArm && level == 0 {
            return Err(Error::ParameterViolation(
                "left-arm locations start at level 1".into(),
            ));
        }
        Ok(CaretLocation { arm, level })
    }

    pub fn right(level: usize) -> Self {
        CaretLocation { arm: Arm::RightArm, level }
    }

    pub fn left(level: usize) -> Self {
        assert!(level >= 1, "left-arm locations start at level 1");
        CaretLocation { arm: Arm::LeftArm, level }
    }

    pub fn root() -> Self {
        Self::right(0)
    }

    pub fn arm(&self) -> Arm {
        self.arm
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_root(&self) -> bool {
        self.level == 0
    }

    /// Path of child steps from the root to this location.
    pub fn path(&self) -> Vec<Side> {
        vec![self.arm.side(); self.level]
    }
}

impl fmt::Display for CaretLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.arm {
            Arm::RightArm => write!(f, "right-arm level {}", self.level),
            Arm::LeftArm => write!(f, "left-arm level {}", self.level),
        }
    }
}

/// Position of an exposed caret relative to the spine.
///
/// `r` is the number of edges from the caret up to its spinal ancestor, `s`
/// the level of that ancestor on `arm`, and `labels` records, nearest the
/// spine first, whether each non-spinal node on the path is a left or a right
/// child. The caret itself is the last labelled node, so `labels.len() == r`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GTrace {
    pub r: usize,
    pub s: usize,
    pub arm: Arm,
    pub labels: Vec<Side>,
}

impl GTrace {
    pub fn label_string(&self) -> String {
        self.labels.iter().map(|s| s.letter()).collect()
    }
}

impl fmt::Display for GTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arm = match self.arm {
            Arm::RightArm => "right",
            Arm::LeftArm => "left",
        };
        write!(f, "({}, {}) {} arm [{}]", self.r, self.s, arm, self.label_string())
    }
}

impl Tree {
    pub fn leaf() -> Tree {
        Tree::Leaf
    }

    pub fn caret(left: Tree, right: Tree) -> Tree {
        Tree::Caret(Box::new(left), Box::new(right))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn is_caret(&self) -> bool {
        !self.is_leaf()
    }

    pub fn children(&self) -> Option<(&Tree, &Tree)> {
        match self {
            Tree::Leaf => None,
            Tree::Caret(l, r) => Some((l, r)),
        }
    }

    pub fn carets(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Caret(l, r) => 1 + l.carets() + r.carets(),
        }
    }

    pub fn leaves(&self) -> usize {
        self.carets() + 1
    }

    /// Root caret followed by `n - 1` right carets.
    pub fn all_right(n: usize) -> Tree {
        (0..n).fold(Tree::Leaf, |acc, _| Tree::caret(Tree::Leaf, acc))
    }

    /// Root caret followed by `n - 1` left carets.
    pub fn left_comb(n: usize) -> Tree {
        (0..n).fold(Tree::Leaf, |acc, _| Tree::caret(acc, Tree::Leaf))
    }

    pub fn mirror(&self) -> Tree {
        match self {
            Tree::Leaf => Tree::Leaf,
            Tree::Caret(l, r) => Tree::caret(r.mirror(), l.mirror()),
        }
    }

    pub fn subtree(&self, path: &[Side]) -> Option<&Tree> {
        let mut cur = self;
        for step in path {
            cur = match (cur, step) {
                (Tree::Leaf, _) => return None,
                (Tree::Caret(l, _), Side::Left) => l,
                (Tree::Caret(_, r), Side::Right) => r,
            };
        }
        Some(cur)
    }

    pub fn subtree_mut(&mut self, path: &[Side]) -> Option<&mut Tree> {
        let mut cur = self;
        for step in path {
            cur = match (cur, step) {
                (Tree::Leaf, _) => return None,
                (Tree::Caret(l, _), Side::Left) => l,
                (Tree::Caret(_, r), Side::Right) => r,
            };
        }
        Some(cur)
    }

    /// Number of carets on the given arm (the root counts for the right arm).
    pub fn arm_len(&self, arm: Arm) -> usize {
        let mut cur = self;
        let mut len = 0;
        if arm == Arm::LeftArm {
            cur = match cur {
                Tree::Leaf => return 0,
                Tree::Caret(l, _) => l,
            };
        }
        while let Tree::Caret(l, r) = cur {
            len += 1;
            cur = if arm == Arm::RightArm { r } else { l };
        }
        len
    }

    /// Paths to every caret in preorder.
    pub fn caret_paths(&self) -> Vec<Vec<Side>> {
        fn walk(t: &Tree, path: &mut Vec<Side>, out: &mut Vec<Vec<Side>>) {
            if let Tree::Caret(l, r) = t {
                out.push(path.clone());
                path.push(Side::Left);
                walk(l, path, out);
                path.pop();
                path.push(Side::Right);
                walk(r, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Leaf exponent of every leaf, in leaf order.
    ///
    /// The exponent of leaf `k` counts the left edges on the longest ascending
    /// all-left path from leaf `k` whose upper endpoints all lie off the right
    /// side of the tree. Left-arm carets do not stop the path.
    pub fn leaf_exponents(&self) -> Vec<usize> {
        fn walk(t: &Tree, right_side: bool, chain: usize, out: &mut Vec<usize>) {
            match t {
                Tree::Leaf => out.push(chain),
                Tree::Caret(l, r) => {
                    let left_chain = if right_side { 0 } else { chain + 1 };
                    walk(l, false, left_chain, out);
                    walk(r, right_side, 0, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.leaves());
        walk(self, true, 0, &mut out);
        out
    }

    /// Sibling pairs `[i, i + 1]`, one per exposed caret, in increasing order.
    pub fn sibling_pairs(&self) -> Vec<[usize; 2]> {
        fn walk(t: &Tree, next_leaf: &mut usize, out: &mut Vec<[usize; 2]>) {
            match t {
                Tree::Leaf => *next_leaf += 1,
                Tree::Caret(l, r) => {
                    if l.is_leaf() && r.is_leaf() {
                        out.push([*next_leaf, *next_leaf + 1]);
                    }
                    walk(l, next_leaf, out);
                    walk(r, next_leaf, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut 0, &mut out);
        out
    }

    pub fn has_sibling_pair(&self, left_leaf: usize) -> bool {
        self.exposed_caret_path(left_leaf).is_some()
    }

    /// Path to the exposed caret whose left leaf is `left_leaf`.
    pub fn exposed_caret_path(&self, left_leaf: usize) -> Option<Vec<Side>> {
        fn walk(t: &Tree, target: usize, first_leaf: usize, path: &mut Vec<Side>) -> bool {
            match t {
                Tree::Leaf => false,
                Tree::Caret(l, r) => {
                    if first_leaf == target && l.is_leaf() && r.is_leaf() {
                        return true;
                    }
                    let left_leaves = l.leaves();
                    if target < first_leaf + left_leaves {
                        path.push(Side::Left);
                        walk(l, target, first_leaf, path)
                    } else {
                        path.push(Side::Right);
                        walk(r, target, first_leaf + left_leaves, path)
                    }
                }
            }
        }
        let mut path = Vec::new();
        walk(self, left_leaf, 0, &mut path).then_some(path)
    }

    /// Replace leaf `k` with a caret, adding one leaf.
    pub fn split_leaf(&self, k: usize) -> Option<Tree> {
        fn walk(t: &Tree, k: usize) -> Option<Tree> {
            match t {
                Tree::Leaf if k == 0 => Some(Tree::caret(Tree::Leaf, Tree::Leaf)),
                Tree::Leaf => None,
                Tree::Caret(l, r) => {
                    let nl = l.leaves();
                    if k < nl {
                        Some(Tree::caret(walk(l, k)?, (**r).clone()))
                    } else {
                        Some(Tree::caret((**l).clone(), walk(r, k - nl)?))
                    }
                }
            }
        }
        walk(self, k)
    }

    /// Replace the exposed caret with leaves `[k, k + 1]` by a single leaf.
    pub fn collapse_pair(&self, k: usize) -> Option<Tree> {
        let path = self.exposed_caret_path(k)?;
        let mut out = self.clone();
        *out.subtree_mut(&path)? = Tree::Leaf;
        Some(out)
    }

    /// Position of the exposed caret `[i, i + 1]` relative to the spine.
    ///
    /// An exposed caret lying on the spine itself gets `r = 0`, `s` its own
    /// level and no labels.
    pub fn g_trace(&self, pair: [usize; 2]) -> Result<GTrace> {
        let [i, j] = pair;
        if j != i + 1 {
            return Err(Error::NotASiblingPair(i, j));
        }
        let path = self
            .exposed_caret_path(i)
            .ok_or(Error::NotASiblingPair(i, j))?;
        Ok(trace_of_path(&path))
    }

    /// Compact preorder bit encoding; valid for up to 31 carets.
    pub fn encode(&self) -> u64 {
        fn walk(t: &Tree, acc: &mut u64) {
            match t {
                Tree::Leaf => *acc <<= 1,
                Tree::Caret(l, r) => {
                    *acc = (*acc << 1) | 1;
                    walk(l, acc);
                    walk(r, acc);
                }
            }
        }
        debug_assert!(self.carets() <= 31);
        let mut acc = 1u64;
        walk(self, &mut acc);
        acc
    }

    pub fn decode(code: u64) -> Option<Tree> {
        fn walk(bits: &[bool], pos: &mut usize) -> Option<Tree> {
            let b = *bits.get(*pos)?;
            *pos += 1;
            if b {
                let l = walk(bits, pos)?;
                let r = walk(bits, pos)?;
                Some(Tree::caret(l, r))
            } else {
                Some(Tree::Leaf)
            }
        }
        if code == 0 {
            return None;
        }
        let width = 63 - code.leading_zeros() as usize;
        let bits: Vec<bool> = (0..width).rev().map(|b| code >> b & 1 == 1).collect();
        let mut pos = 0;
        let t = walk(&bits, &mut pos)?;
        (pos == bits.len()).then_some(t)
    }
}

pub(crate) fn trace_of_path(path: &[Side]) -> GTrace {
    let Some(&first) = path.first() else {
        return GTrace { r: 0, s: 0, arm: Arm::RightArm, labels: Vec::new() };
    };
    let spine_len = path.iter().take_while(|&&d| d == first).count();
    let arm = match first {
        Side::Right => Arm::RightArm,
        Side::Left => Arm::LeftArm,
    };
    let labels = path[spine_len..].to_vec();
    GTrace { r: labels.len(), s: spine_len, arm, labels }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => f.write_str("*"),
            Tree::Caret(l, r) => write!(f, "({} {})", l, r),
        }
    }
}

pub fn render_tree(t: &Tree) -> String {
    t.to_string()
}

pub fn parse_tree(text: &str) -> Result<Tree> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let tree = parse_node(bytes, &mut pos)?;
    if pos != bytes.len() {
        return Err(Error::Parse { pos, msg: "trailing input after tree".into() });
    }
    Ok(tree)
}

fn parse_node(bytes: &[u8], pos: &mut usize) -> Result<Tree> {
    match bytes.get(*pos) {
        Some(b'*') => {
            *pos += 1;
            Ok(Tree::Leaf)
        }
        Some(b'(') => {
            *pos += 1;
            let l = parse_node(bytes, pos)?;
            expect(bytes, pos, b' ')?;
            let r = parse_node(bytes, pos)?;
            expect(bytes, pos, b')')?;
            Ok(Tree::caret(l, r))
        }
        Some(&c) => Err(Error::Parse {
            pos: *pos,
            msg: format!("expected '*' or '(', found {:?}", c as char),
        }),
        None => Err(Error::Parse { pos: *pos, msg: "unexpected end of input".into() }),
    }
}

fn expect(bytes: &[u8], pos: &mut usize, want: u8) -> Result<()> {
    match bytes.get(*pos) {
        Some(&c) if c == want => {
            *pos += 1;
            Ok(())
        }
        Some(&c) => Err(Error::Parse {
            pos: *pos,
            msg: format!("expected {:?}, found {:?}", want as char, c as char),
        }),
        None => Err(Error::Parse {
            pos: *pos,
            msg: format!("expected {:?}, found end of input", want as char),
        }),
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tree> {
        parse_tree(s)
    }
}

impl Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Tree, D::Error> {
        let s = String::deserialize(d)?;
        parse_tree(&s).map_err(serde::de::Error::custom)
    }
}

pub fn catalan(n: usize) -> u64 {
    let mut c = vec![1u64; n + 1];
    for m in 1..=n {
        c[m] = (0..m).map(|k| c[k] * c[m - 1 - k]).sum();
    }
    c[n]
}

/// All trees with `n` carets, sorted by their text form.
pub fn enumerate_trees(n: usize) -> Result<Vec<Tree>> {
    enumerate_trees_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_trees_capped(n: usize, cap: usize) -> Result<Vec<Tree>> {
    if n > cap {
        return Err(Error::ResourceCap { what: "tree enumeration", n, cap });
    }
    let mut by_size: HashMap<usize, Vec<Tree>> = HashMap::new();
    by_size.insert(0, vec![Tree::Leaf]);
    for m in 1..=n {
        let mut level = Vec::with_capacity(catalan(m) as usize);
        for k in 0..m {
            for l in &by_size[&k] {
                for r in &by_size[&(m - 1 - k)] {
                    level.push(Tree::caret(l.clone(), r.clone()));
                }
            }
        }
        by_size.insert(m, level);
    }
    let mut trees = by_size.remove(&n).unwrap_or_default();
    trees.sort_by_cached_key(|t| t.to_string());
    Ok(trees)
}
