//! Thompson's group F: normal forms, tree pair diagrams and their reduction.
//!
//! A pair `(T1, T2)` stands for the element whose normal form has positive
//! exponents read from the leaf exponents of `T2` and negative exponents from
//! those of `T1`. As a rotation script that word carries `T1` to `T2`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::Tree;
use crate::word::{Family, Generator, Letter, Sign, SignedGenerator, Word};

/// `x_{i_1}^{r_1} ... x_{i_k}^{r_k} x_{j_l}^{-s_l} ... x_{j_1}^{-s_1}` with
/// increasing `i` and `j`. Both parts are kept as sorted index multisets.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct NormalForm {
    pos: Vec<usize>,
    neg: Vec<usize>,
}

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm::default()
    }

    /// Normal form with `f[i]` copies of `x_i` and `e[i]` copies of `x_i^-1`.
    pub fn from_exponents(f: &[usize], e: &[usize]) -> Self {
        let expand = |v: &[usize]| -> Vec<usize> {
            v.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c)).collect()
        };
        NormalForm { pos: expand(f), neg: expand(e) }
    }

    /// Positive part as `(index, exponent)` in increasing index order.
    pub fn positive(&self) -> Vec<(usize, usize)> {
        group_runs(&self.pos)
    }

    /// Negative part as `(index, exponent)` in increasing index order.
    pub fn negative(&self) -> Vec<(usize, usize)> {
        group_runs(&self.neg)
    }

    /// Exponent vectors `(f, e)` padded to a common length.
    pub fn exponents(&self) -> (Vec<usize>, Vec<usize>) {
        let len = self.max_index().map_or(0, |m| m + 1);
        let mut f = vec![0; len];
        let mut e = vec![0; len];
        for &i in &self.pos {
            f[i] += 1;
        }
        for &j in &self.neg {
            e[j] += 1;
        }
        (f, e)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.pos.iter().chain(&self.neg).copied().max()
    }

    pub fn len(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_identity(&self) -> bool {
        self.is_empty()
    }

    /// True when no index `i` has both `x_i` and `x_i^-1` without any `x_{i+1}^{±1}`.
    pub fn is_unique(&self) -> bool {
        self.reducible_index(0).is_none()
    }

    /// True when the only violations of uniqueness involve `x_0`.
    pub fn is_partially_reduced(&self) -> bool {
        self.reducible_index(1).is_none()
    }

    pub fn to_word(&self) -> Word {
        let mut letters: Vec<Letter> = self
            .positive()
            .into_iter()
            .map(|(i, r)| Letter::new(Generator::x(i), r as i64))
            .collect();
        letters.extend(
            self.negative()
                .into_iter()
                .rev()
                .map(|(j, s)| Letter::new(Generator::x(j), -(s as i64))),
        );
        Word::from_letters(letters)
    }

    fn contains(v: &[usize], i: usize) -> bool {
        v.binary_search(&i).is_ok()
    }

    fn reducible_index(&self, from: usize) -> Option<usize> {
        self.pos.iter().copied().filter(|&i| i >= from).find(|&i| {
            Self::contains(&self.neg, i)
                && !Self::contains(&self.pos, i + 1)
                && !Self::contains(&self.neg, i + 1)
        })
    }

    /// Removes one `x_i ... x_i^-1` pair and shifts the enclosed letters down.
    fn reduce_at(&mut self, i: usize) {
        for v in [&mut self.pos, &mut self.neg] {
            let at = v.binary_search(&i).expect("index present");
            v.remove(at);
            for x in v.iter_mut() {
                if *x >= i + 2 {
                    *x -= 1;
                }
            }
        }
    }

    fn reduce_from(mut self, from: usize) -> Self {
        while let Some(i) = self.reducible_index(from) {
            self.reduce_at(i);
        }
        self
    }

    /// Multiplies on the right by one letter, keeping normal form.
    fn push(&mut self, g: SignedGenerator) {
        debug_assert_eq!(g.generator.family(), Family::X);
        let mut k = g.generator.index();
        match g.sign {
            Sign::Neg => {
                for &a in &self.neg {
                    if a < k {
                        k += 1;
                    } else {
                        break;
                    }
                }
                let at = self.neg.partition_point(|&a| a <= k);
                self.neg.insert(at, k);
            }
            Sign::Pos => {
                let mut idx = 0;
                while idx < self.neg.len() {
                    let a = self.neg[idx];
                    if a < k {
                        k += 1;
                        idx += 1;
                    } else if a == k {
                        self.neg.remove(idx);
                        return;
                    } else {
                        break;
                    }
                }
                for a in &mut self.neg[idx..] {
                    *a += 1;
                }
                for p in &mut self.pos {
                    if *p > k {
                        *p += 1;
                    }
                }
                let at = self.pos.partition_point(|&p| p <= k);
                self.pos.insert(at, k);
            }
        }
    }

    /// Normal form of a word, without any of the uniqueness reductions.
    ///
    /// Letters already in normal-form order pass through unchanged.
    pub fn from_word(w: &Word) -> Self {
        let w = w.expand_y();
        let mut nf = NormalForm::identity();
        for g in w.signed() {
            nf.push(g);
        }
        nf
    }
}

fn group_runs(v: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &i in v {
        match out.last_mut() {
            Some((j, c)) if *j == i => *c += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

impl Serialize for NormalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn to_unique_normal_form(w: &Word) -> NormalForm {
    NormalForm::from_word(w).reduce_from(0)
}

/// Normal form with every reduction applied except those at index 0.
pub fn partial_reduce(w: &Word) -> NormalForm {
    NormalForm::from_word(w).reduce_from(1)
}

/// Word length with respect to the infinite generating set `{x_0, x_1, ...}`.
pub fn word_length_infinite(w: &Word) -> usize {
    to_unique_normal_form(w).len()
}

/// A tree pair diagram: negative tree `t1`, positive tree `t2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct TreePair {
    pub t1: Tree,
    pub t2: Tree,
}

impl TreePair {
    pub fn new(t1: Tree, t2: Tree) -> Result<Self> {
        let (a, b) = (t1.carets(), t2.carets());
        if a != b {
            return Err(Error::SizeMismatch(a, b));
        }
        if a == 0 {
            return Err(Error::EmptyTree);
        }
        Ok(TreePair { t1, t2 })
    }

    pub fn identity() -> Self {
        TreePair { t1: Tree::all_right(1), t2: Tree::all_right(1) }
    }

    pub fn carets(&self) -> usize {
        self.t1.carets()
    }

    pub fn inverse(&self) -> TreePair {
        TreePair { t1: self.t2.clone(), t2: self.t1.clone() }
    }

    /// Sibling pairs `[i, i + 1]` exposed in both trees.
    pub fn common_exposed(&self) -> Vec<usize> {
        let b = self.t2.sibling_pairs();
        self.t1.sibling_pairs().into_iter().filter(|p| b.contains(p)).map(|p| p[0]).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.carets() <= 1 || self.common_exposed().is_empty()
    }

    fn collapse(&self, i: usize) -> TreePair {
        TreePair {
            t1: self.t1.collapse_pair(i).expect("common caret"),
            t2: self.t2.collapse_pair(i).expect("common caret"),
        }
    }
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t1, self.t2)
    }
}

pub fn word_of_pair(p: &TreePair) -> Result<NormalForm> {
    let (a, b) = (p.t1.carets(), p.t2.carets());
    if a != b {
        return Err(Error::SizeMismatch(a, b));
    }
    if a == 0 {
        return Err(Error::EmptyTree);
    }
    Ok(NormalForm::from_exponents(&p.t2.leaf_exponents(), &p.t1.leaf_exponents()))
}

/// Deletes common exposed carets until none is left.
pub fn reduce_pair(p: &TreePair) -> TreePair {
    partially_reduce_from(p, 0)
}

/// Deletes common exposed carets `[i, i + 1]` with `i >= 1` until none is left.
pub fn partially_reduce_pair(p: &TreePair) -> TreePair {
    partially_reduce_from(p, 1)
}

fn partially_reduce_from(p: &TreePair, from: usize) -> TreePair {
    let mut cur = p.clone();
    while cur.carets() > 1 {
        match cur.common_exposed().into_iter().find(|&i| i >= from) {
            Some(i) => cur = cur.collapse(i),
            None => break,
        }
    }
    cur
}

/// Tree with `n` carets whose leaf exponents are `exps`, if one exists.
pub fn tree_of_exponents(exps: &[usize]) -> Option<Tree> {
    // A subtree hanging off the right side, or any right child, is a left
    // path of `e` carets ending at a leaf of exponent `e`, with the right
    // subtrees of those carets following in leaf order.
    fn sub(exps: &[usize], pos: &mut usize, limit: usize) -> Option<Tree> {
        if *pos >= limit {
            return None;
        }
        let e = exps[*pos];
        *pos += 1;
        let mut t = Tree::Leaf;
        for _ in 0..e {
            let right = sub(exps, pos, limit)?;
            t = Tree::caret(t, right);
        }
        Some(t)
    }
    let n = exps.len().checked_sub(1)?;
    if exps[n] != 0 {
        return None;
    }
    let mut pos = 0;
    let mut lefts = Vec::new();
    while pos < n {
        lefts.push(sub(exps, &mut pos, n)?);
    }
    let mut t = Tree::Leaf;
    for l in lefts.into_iter().rev() {
        t = Tree::caret(l, t);
    }
    Some(t)
}

/// Smallest pair whose leaf exponents spell `nf`, without reducing it.
pub fn pair_of_normal_form(nf: &NormalForm) -> TreePair {
    let (f, e) = nf.exponents();
    let mut n = f.len().max(1);
    loop {
        let pad = |v: &[usize]| {
            let mut v = v.to_vec();
            v.resize(n + 1, 0);
            v
        };
        if let (Some(t1), Some(t2)) = (tree_of_exponents(&pad(&e)), tree_of_exponents(&pad(&f))) {
            return TreePair { t1, t2 };
        }
        n += 1;
    }
}

/// Reduced pair of the element represented by `w`.
pub fn pair_of_word(w: &Word) -> TreePair {
    reduce_pair(&pair_of_normal_form(&to_unique_normal_form(w)))
}

/// Pair representing the product `word(a) * word(b)`.
pub fn multiply(a: &TreePair, b: &TreePair) -> TreePair {
    // The product is (b.t1, a.t2) once a.t1 and b.t2 are refined to agree.
    let mut a = a.clone();
    let mut b = b.clone();
    while let Some((in_a, leaf)) = first_difference(&a.t1, &b.t2) {
        if in_a {
            a.t1 = a.t1.split_leaf(leaf).expect("leaf exists");
            a.t2 = a.t2.split_leaf(leaf).expect("leaf exists");
        } else {
            b.t1 = b.t1.split_leaf(leaf).expect("leaf exists");
            b.t2 = b.t2.split_leaf(leaf).expect("leaf exists");
        }
    }
    TreePair { t1: b.t1, t2: a.t2 }
}

/// First place where one tree has a leaf and the other a caret: which tree
/// holds the leaf (`true` for `x`) and that leaf's number.
fn first_difference(x: &Tree, y: &Tree) -> Option<(bool, usize)> {
    fn walk(x: &Tree, y: &Tree, leaf: &mut usize) -> Option<(bool, usize)> {
        match (x, y) {
            (Tree::Leaf, Tree::Leaf) => {
                *leaf += 1;
                None
            }
            (Tree::Leaf, Tree::Caret(..)) => Some((true, *leaf)),
            (Tree::Caret(..), Tree::Leaf) => Some((false, *leaf)),
            (Tree::Caret(xl, xr), Tree::Caret(yl, yr)) => {
                walk(xl, yl, leaf).or_else(|| walk(xr, yr, leaf))
            }
        }
    }
    walk(x, y, &mut 0)
}

/// The reduced pair of a single generator.
pub fn generator_pair(g: Generator) -> TreePair {
    pair_of_word(&Word::from_signed([SignedGenerator::new(g, Sign::Pos)]))
}

/// Tree obtained from `all_right(n + 1)` by hanging a caret as the left child
/// at right-arm level `n + 1`; the positive tree of `x_n`.
pub fn x_positive_tree(n: usize) -> Tree {
    let mut t = Tree::caret(Tree::caret(Tree::Leaf, Tree::Leaf), Tree::Leaf);
    for _ in 0..n {
        t = Tree::caret(Tree::Leaf, t);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::apply_word;
    use crate::tree::{enumerate_trees, parse_tree};
    use proptest::prelude::*;

    fn t(s: &str) -> Tree {
        parse_tree(s).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn pair(a: &str, b: &str) -> TreePair {
        TreePair::new(t(a), t(b)).unwrap()
    }

    #[test]
    fn word_of_pair_examples() {
        for n in 1..6 {
            let p = TreePair::new(Tree::all_right(n), Tree::all_right(n)).unwrap();
            assert!(word_of_pair(&p).unwrap().is_identity());
        }
        let p = TreePair::new(Tree::left_comb(2), Tree::all_right(2)).unwrap();
        assert_eq!(word_of_pair(&p).unwrap().to_string(), "x0^-1");
        let p = TreePair::new(Tree::all_right(3), t("(* ((* *) *))")).unwrap();
        assert_eq!(word_of_pair(&p).unwrap().to_string(), "x1");
        let bad = TreePair { t1: Tree::all_right(2), t2: Tree::all_right(3) };
        assert_eq!(word_of_pair(&bad), Err(Error::SizeMismatch(2, 3)));
    }

    #[test]
    fn unique_normal_form_examples() {
        assert_eq!(to_unique_normal_form(&w("x0 x2 x0^-1")).to_string(), "x1");
        assert_eq!(to_unique_normal_form(&w("x1^-1 x3 x1")).to_string(), "x4");
        assert_eq!(to_unique_normal_form(&w("x0 x0^-1")).to_string(), "");
        assert_eq!(to_unique_normal_form(&w("x0^-1 x0")).to_string(), "");
        assert_eq!(to_unique_normal_form(&w("x1 x0")).to_string(), "x0 x2");
        assert_eq!(to_unique_normal_form(&w("x0^-1 x1^-1")).to_string(), "x2^-1 x0^-1");
        assert_eq!(to_unique_normal_form(&w("x3 x4 x3^-1 x2^-1")).to_string(), "x3 x4 x3^-1 x2^-1");
        let nf = "x0^2 x3 x5^-1 x1^-2";
        assert_eq!(to_unique_normal_form(&w(nf)).to_string(), nf);
    }

    #[test]
    fn partial_reduce_examples() {
        assert_eq!(partial_reduce(&w("x0 x2 x0^-1")).to_string(), "x0 x2 x0^-1");
        assert_eq!(partial_reduce(&w("x2 x4 x2^-1")).to_string(), "x3");
        assert_eq!(partial_reduce(&w("x0 x1 x3^-1")).to_string(), "x0 x1 x3^-1");
        assert_eq!(partial_reduce(&w("x0 x2 x3 x0^-1")).to_string(), "x0 x2 x3 x0^-1");
    }

    #[test]
    fn pair_of_word_examples() {
        assert_eq!(pair_of_word(&w("x0")), TreePair::new(Tree::all_right(2), Tree::left_comb(2)).unwrap());
        assert_eq!(pair_of_word(&Word::identity()), TreePair::identity());
        let p = pair_of_word(&w("x3 x4 x3^-1 x2^-1"));
        assert_eq!(p.carets(), 6);
        assert!(p.t1.has_sibling_pair(3));
        assert!(p.t2.has_sibling_pair(4));
    }

    #[test]
    fn fig4_pair_reduces_to_x1() {
        let primed = pair("((* *) (* (* *)))", "((* *) ((* *) *))");
        assert_eq!(word_of_pair(&primed).unwrap().to_string(), "x0 x2 x0^-1");
        assert_eq!(reduce_pair(&primed), generator_pair(Generator::x(1)));
        assert_eq!(pair_of_normal_form(&partial_reduce(&w("x0 x2 x0^-1"))), primed);
        assert_eq!(partially_reduce_pair(&primed), primed);
    }

    #[test]
    fn reduce_pair_examples() {
        for n in 1..=5 {
            for tr in enumerate_trees(n).unwrap() {
                let p = TreePair::new(tr.clone(), tr).unwrap();
                assert_eq!(reduce_pair(&p), TreePair::identity());
            }
        }
        let x1 = generator_pair(Generator::x(1));
        assert_eq!(reduce_pair(&x1), x1);
    }

    #[test]
    fn generator_pairs() {
        assert_eq!(generator_pair(Generator::x(0)), TreePair::new(Tree::all_right(2), Tree::left_comb(2)).unwrap());
        assert_eq!(generator_pair(Generator::x(1)), pair("(* (* (* *)))", "(* ((* *) *))"));
        for n in 0..6 {
            let p = generator_pair(Generator::x(n));
            assert_eq!(p.t1, Tree::all_right(n + 2));
            assert_eq!(p.t2, x_positive_tree(n));
        }
        let y1 = generator_pair(Generator::y(1));
        assert_eq!(y1, reduce_pair(&pair_of_normal_form(&to_unique_normal_form(&w("x0 x1 x0^-2")))));
        for g in [Generator::x(0), Generator::x(1), Generator::y(1), Generator::y(2)] {
            let p = generator_pair(g);
            let word = Word::from_signed([SignedGenerator::new(g, Sign::Pos)]);
            assert_eq!(apply_word(&p.t1, &word).unwrap(), p.t2, "{g}");
        }
    }

    #[test]
    fn multiply_examples() {
        let x0 = generator_pair(Generator::x(0));
        let x1 = generator_pair(Generator::x(1));
        assert_eq!(reduce_pair(&multiply(&x0, &TreePair::identity())), x0);
        assert_eq!(reduce_pair(&multiply(&x0, &x0.inverse())), TreePair::identity());
        assert_eq!(reduce_pair(&multiply(&x0, &x1)), pair_of_word(&w("x0 x1")));
    }

    #[test]
    fn tree_of_exponents_inverts_leaf_exponents() {
        for n in 1..=8 {
            for tr in enumerate_trees(n).unwrap() {
                assert_eq!(tree_of_exponents(&tr.leaf_exponents()), Some(tr));
            }
        }
        assert_eq!(tree_of_exponents(&[0, 1]), None);
        assert_eq!(tree_of_exponents(&[2, 0]), None);
    }

    /// Every pair with `n` carets, exhaustively.
    fn all_pairs(n: usize) -> Vec<TreePair> {
        let trees = enumerate_trees(n).unwrap();
        let mut out = Vec::new();
        for a in &trees {
            for b in &trees {
                out.push(TreePair { t1: a.clone(), t2: b.clone() });
            }
        }
        out
    }

    #[test]
    fn exhaustive_pair_properties() {
        for n in 1..=6 {
            for p in all_pairs(n) {
                let nf = word_of_pair(&p).unwrap();
                // action consistency
                assert_eq!(apply_word(&p.t1, &nf.to_word()).unwrap(), p.t2, "{p}");
                // reducedness matches the normal-form condition; a common last
                // right-arm caret carries no exponent and is invisible to the word
                let visible = p.common_exposed().into_iter().any(|i| i + 1 < n);
                assert_eq!(nf.is_unique(), !visible, "{p}");
                // round trip through the word
                let r = reduce_pair(&p);
                assert_eq!(reduce_pair(&pair_of_word(&nf.to_word())), r, "{p}");
                // reduced pairs have unique normal forms equal to the reduced word
                assert_eq!(word_of_pair(&r).unwrap(), to_unique_normal_form(&nf.to_word()));
                // partial reduction on trees matches partial reduction on words
                let pr = partially_reduce_pair(&p);
                assert_eq!(word_of_pair(&pr).unwrap(), partial_reduce(&nf.to_word()), "{p}");
            }
        }
    }

    #[test]
    fn round_trip_for_unique_forms() {
        for n in 1..=5 {
            for p in all_pairs(n) {
                let nf = word_of_pair(&reduce_pair(&p)).unwrap();
                assert_eq!(word_of_pair(&pair_of_word(&nf.to_word())).unwrap(), nf);
            }
        }
    }

    #[test]
    fn multiply_agrees_with_concatenation_exhaustively() {
        let mut pairs: Vec<TreePair> = Vec::new();
        for n in 1..=3 {
            pairs.extend(all_pairs(n).iter().map(reduce_pair));
        }
        pairs.sort_by_key(|p| p.to_string());
        pairs.dedup();
        for a in &pairs {
            for b in &pairs {
                let wa = word_of_pair(a).unwrap().to_word();
                let wb = word_of_pair(b).unwrap().to_word();
                let expected = to_unique_normal_form(&wa.concat(&wb));
                assert_eq!(word_of_pair(&reduce_pair(&multiply(a, b))).unwrap(), expected, "{a} * {b}");
            }
        }
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..5, prop::bool::ANY), 0..12).prop_map(|v| {
            Word::from_signed(v.into_iter().map(|(i, p)| {
                SignedGenerator::new(Generator::x(i), if p { Sign::Pos } else { Sign::Neg })
            }))
        })
    }

    proptest! {
        #[test]
        fn unique_form_is_idempotent(u in arb_word()) {
            let nf = to_unique_normal_form(&u);
            prop_assert!(nf.is_unique());
            prop_assert_eq!(to_unique_normal_form(&nf.to_word()), nf);
        }

        #[test]
        fn reduction_never_lengthens_normal_forms(u in arb_word()) {
            let nf = NormalForm::from_word(&u);
            prop_assert_eq!(NormalForm::from_word(&nf.to_word()), nf.clone());
            prop_assert!(to_unique_normal_form(&nf.to_word()).len() <= nf.len());
        }

        #[test]
        fn partial_is_between(u in arb_word()) {
            let full = to_unique_normal_form(&u);
            let part = partial_reduce(&u);
            prop_assert!(part.is_partially_reduced());
            prop_assert!(part.len() >= full.len());
            prop_assert_eq!(to_unique_normal_form(&part.to_word()), full.clone());
            let has_x0_pair = part.positive().first().is_some_and(|p| p.0 == 0)
                && part.negative().first().is_some_and(|p| p.0 == 0);
            if !has_x0_pair {
                prop_assert_eq!(part.len(), full.len());
            }
        }

        #[test]
        fn normal_form_acts_like_the_word(u in arb_word()) {
            let p = pair_of_word(&u);
            let nf = to_unique_normal_form(&u);
            prop_assert_eq!(word_of_pair(&p).unwrap(), nf.clone());
            prop_assert_eq!(apply_word(&p.t1, &nf.to_word()).unwrap(), p.t2);
        }

        #[test]
        fn word_length_matches_unique_form(u in arb_word()) {
            prop_assert_eq!(word_length_infinite(&u), to_unique_normal_form(&u).len());
            prop_assert_eq!(word_length_infinite(&u.inverse()), word_length_infinite(&u));
        }
    }
}
