//! Rotations at spine locations and their relation to generators.
//!
//! A right rotation turns `((A B) C)` into `(A (B C))` at a node; a left
//! rotation is the inverse. A word is read as a rotation script from right to
//! left: the rightmost letter is applied first.
//!
//! Generator convention: `x_k` is a left rotation at right-arm level `k`,
//! `x_k^-1` a right rotation there. `y_k` is a right rotation at left-arm
//! level `k` and `y_k^-1` a left rotation, which makes
//! `y_k = x0^k x1 x0^(-k-1)` hold as an identity of actions.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::{enumerate_trees, Arm, CaretLocation, GTrace, Side, Tree};
use crate::word::{Family, Generator, Sign, SignedGenerator, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum Direction {
    LeftRotation,
    RightRotation,
}

impl Direction {
    pub fn inverse(self) -> Direction {
        match self {
            Direction::LeftRotation => Direction::RightRotation,
            Direction::RightRotation => Direction::LeftRotation,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct RotationStep {
    pub location: CaretLocation,
    pub direction: Direction,
}

impl RotationStep {
    pub fn new(location: CaretLocation, direction: Direction) -> Self {
        RotationStep { location, direction }
    }

    pub fn inverse(self) -> Self {
        RotationStep { location: self.location, direction: self.direction.inverse() }
    }
}

impl fmt::Display for RotationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.direction {
            Direction::LeftRotation => "left",
            Direction::RightRotation => "right",
        };
        write!(f, "{} rotation at {}", d, self.location)
    }
}

/// Whether a rotation in `dir` can be applied at the caret reached by `path`.
pub fn can_rotate_at(t: &Tree, path: &[Side], dir: Direction) -> bool {
    match t.subtree(path) {
        Some(Tree::Caret(l, r)) => match dir {
            Direction::RightRotation => l.is_caret(),
            Direction::LeftRotation => r.is_caret(),
        },
        _ => false,
    }
}

/// Rotation at an arbitrary caret given by its path from the root.
pub fn rotate_at(t: &Tree, path: &[Side], dir: Direction) -> Result<Tree> {
    let mut out = t.clone();
    let node = out
        .subtree_mut(path)
        .ok_or_else(|| Error::NotApplicable("path leaves the tree".into()))?;
    rotate_node(node, dir)?;
    Ok(out)
}

fn rotate_node(node: &mut Tree, dir: Direction) -> Result<()> {
    let taken = std::mem::replace(node, Tree::Leaf);
    let rotated = match (taken, dir) {
        (Tree::Caret(l, c), Direction::RightRotation) => match *l {
            Tree::Caret(a, b) => Ok(Tree::Caret(a, Box::new(Tree::Caret(b, c)))),
            leaf => Err(Tree::Caret(Box::new(leaf), c)),
        },
        (Tree::Caret(a, r), Direction::LeftRotation) => match *r {
            Tree::Caret(b, c) => Ok(Tree::Caret(Box::new(Tree::Caret(a, b)), c)),
            leaf => Err(Tree::Caret(a, Box::new(leaf))),
        },
        (leaf, _) => Err(leaf),
    };
    match rotated {
        Ok(t) => {
            *node = t;
            Ok(())
        }
        Err(original) => {
            *node = original;
            Err(Error::NotApplicable(format!("{:?} needs a caret child", dir)))
        }
    }
}

pub fn can_rotate(t: &Tree, step: RotationStep) -> bool {
    can_rotate_at(t, &step.location.path(), step.direction)
}

pub fn rotate(t: &Tree, step: RotationStep) -> Result<Tree> {
    rotate_at(t, &step.location.path(), step.direction)
        .map_err(|_| Error::NotApplicable(format!("{} on {}", step, t)))
}

pub fn step_of_generator(g: SignedGenerator) -> RotationStep {
    let idx = g.generator.index();
    match (g.generator.family(), g.sign) {
        (Family::X, Sign::Pos) => RotationStep::new(CaretLocation::right(idx), Direction::LeftRotation),
        (Family::X, Sign::Neg) => RotationStep::new(CaretLocation::right(idx), Direction::RightRotation),
        (Family::Y, Sign::Pos) => RotationStep::new(CaretLocation::left(idx), Direction::RightRotation),
        (Family::Y, Sign::Neg) => RotationStep::new(CaretLocation::left(idx), Direction::LeftRotation),
    }
}

pub fn generator_of_step(step: RotationStep) -> SignedGenerator {
    let level = step.location.level();
    match (step.location.arm(), step.direction) {
        (Arm::RightArm, Direction::LeftRotation) => SignedGenerator::new(Generator::x(level), Sign::Pos),
        (Arm::RightArm, Direction::RightRotation) => SignedGenerator::new(Generator::x(level), Sign::Neg),
        (Arm::LeftArm, Direction::RightRotation) => SignedGenerator::new(Generator::y(level), Sign::Pos),
        (Arm::LeftArm, Direction::LeftRotation) => SignedGenerator::new(Generator::y(level), Sign::Neg),
    }
}

/// Rotation script for a sequence of steps given in application order.
pub fn word_of_steps(steps: &[RotationStep]) -> Word {
    Word::from_signed(steps.iter().rev().map(|&s| generator_of_step(s)))
}

/// Steps of a word in application order (rightmost letter first).
pub fn steps_of_word(w: &Word) -> Vec<RotationStep> {
    w.signed().into_iter().rev().map(step_of_generator).collect()
}

/// Applies `w` to `t`, rightmost letter first, without ever adding carets.
///
/// On failure the error carries the position of the offending letter counted
/// from the right, starting at 0.
pub fn apply_word(t: &Tree, w: &Word) -> Result<Tree> {
    let mut cur = t.clone();
    for (i, step) in steps_of_word(w).into_iter().enumerate() {
        let node = cur
            .subtree_mut(&step.location.path())
            .ok_or(Error::NotApplicableAtStep(i))?;
        rotate_node(node, step.direction).map_err(|_| Error::NotApplicableAtStep(i))?;
    }
    Ok(cur)
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SiblingEffect {
    pub created: Vec<[usize; 2]>,
    pub destroyed: Vec<[usize; 2]>,
}

pub fn sibling_effect(t: &Tree, step: RotationStep) -> Result<SiblingEffect> {
    let after = rotate(t, step)?;
    let before_pairs = t.sibling_pairs();
    let after_pairs = after.sibling_pairs();
    Ok(SiblingEffect {
        created: after_pairs.iter().filter(|p| !before_pairs.contains(p)).copied().collect(),
        destroyed: before_pairs.iter().filter(|p| !after_pairs.contains(p)).copied().collect(),
    })
}

/// Predicts how `G(c)` of an exposed caret changes under one spine rotation.
///
/// Rotations at level `k >= 1` on the ancestor's own arm follow the transition
/// tables; the left-arm table is the mirror image of the right-arm one.
/// Rotations on the other arm leave the trace alone. Root rotations move `s`
/// by one when `s >= 2`, and flip the arm when `s = 1` and the rotation pulls
/// the ancestor across the root. Anything else is reported as
/// [`Error::UnspecifiedCase`].
pub fn predict_g_transition(g: &GTrace, step: RotationStep) -> Result<GTrace> {
    if g.r == 0 {
        return Err(Error::UnspecifiedCase("exposed caret lies on the spine (r = 0)".into()));
    }
    let first = g.labels[0];
    let expected_first = match g.arm {
        Arm::RightArm => Side::Left,
        Arm::LeftArm => Side::Right,
    };
    if first != expected_first || g.labels.len() != g.r {
        return Err(Error::InternalInvariantViolation(format!("malformed trace {g}")));
    }

    let k = step.location.level();
    if k == 0 {
        return predict_root(g, step.direction);
    }
    if step.location.arm() != g.arm {
        return Ok(g.clone());
    }

    // Work in the right-arm frame; mirror in and out for the left arm.
    let mirrored = g.arm == Arm::LeftArm;
    let dir = if mirrored { step.direction.inverse() } else { step.direction };
    let labels: Vec<Side> = if mirrored {
        g.labels.iter().map(|s| s.flip()).collect()
    } else {
        g.labels.clone()
    };
    let (r, s) = (g.r, g.s);
    let rest = &labels[1..];

    let (nr, ns, nlabels) = if k + 1 < s {
        match dir {
            Direction::LeftRotation => (r, s - 1, labels.clone()),
            Direction::RightRotation => (r, s + 1, labels.clone()),
        }
    } else if k + 1 == s {
        match dir {
            Direction::LeftRotation => {
                let mut l = vec![Side::Left, Side::Right];
                l.extend_from_slice(rest);
                (r + 1, s - 1, l)
            }
            Direction::RightRotation => (r, s + 1, labels.clone()),
        }
    } else if k == s {
        match dir {
            Direction::LeftRotation => {
                let mut l = vec![Side::Left, Side::Left];
                l.extend_from_slice(rest);
                (r + 1, s, l)
            }
            Direction::RightRotation => match rest.first() {
                None => {
                    return Err(Error::UnspecifiedCase(
                        "r = 1 and the rotation at the ancestor splits the caret".into(),
                    ))
                }
                Some(Side::Left) => (r - 1, s, rest.to_vec()),
                Some(Side::Right) => {
                    let mut l = vec![Side::Left];
                    l.extend_from_slice(&rest[1..]);
                    (r - 1, s + 1, l)
                }
            },
        }
    } else {
        (r, s, labels.clone())
    };

    let nlabels = if mirrored { nlabels.into_iter().map(|s| s.flip()).collect() } else { nlabels };
    Ok(GTrace { r: nr, s: ns, arm: g.arm, labels: nlabels })
}

fn predict_root(g: &GTrace, dir: Direction) -> Result<GTrace> {
    // Direction that pulls the arm toward the root: left rotation for the
    // right arm, right rotation for the left arm.
    let shortens = matches!(
        (g.arm, dir),
        (Arm::RightArm, Direction::LeftRotation) | (Arm::LeftArm, Direction::RightRotation)
    );
    if g.s == 1 {
        if !shortens {
            return Err(Error::UnspecifiedCase(
                "root rotation with s = 1 that keeps the ancestor's arm".into(),
            ));
        }
        let mut labels = g.labels.clone();
        labels[0] = labels[0].flip();
        let arm = match g.arm {
            Arm::RightArm => Arm::LeftArm,
            Arm::LeftArm => Arm::RightArm,
        };
        return Ok(GTrace { r: g.r, s: 1, arm, labels });
    }
    let s = if shortens { g.s - 1 } else { g.s + 1 };
    Ok(GTrace { r: g.r, s, arm: g.arm, labels: g.labels.clone() })
}

/// Every spine rotation step that can be applied to `t`.
pub fn applicable_spine_steps(t: &Tree) -> Vec<RotationStep> {
    let mut out = Vec::new();
    for level in 0..t.arm_len(Arm::RightArm) {
        for dir in [Direction::LeftRotation, Direction::RightRotation] {
            let step = RotationStep::new(CaretLocation::right(level), dir);
            if can_rotate(t, step) {
                out.push(step);
            }
        }
    }
    for level in 1..=t.arm_len(Arm::LeftArm) {
        for dir in [Direction::LeftRotation, Direction::RightRotation] {
            let step = RotationStep::new(CaretLocation::left(level), dir);
            if can_rotate(t, step) {
                out.push(step);
            }
        }
    }
    out
}

/// Agreement between [`predict_g_transition`] and recomputed traces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GTableReport {
    pub max_n: usize,
    /// Every (tree, exposed caret, applicable spine rotation) triple.
    pub cases: usize,
    /// Triples for which the rules give a prediction.
    pub covered: usize,
    pub matched: usize,
    /// Uncovered triples grouped by reason.
    pub uncovered: BTreeMap<String, usize>,
    /// Covered triples whose prediction was wrong, as readable lines.
    pub mismatches: Vec<String>,
}

impl GTableReport {
    pub fn conforms(&self) -> bool {
        self.mismatches.is_empty() && self.matched == self.covered
    }
}

/// Checks every prediction against the trace of the rotated tree, for all
/// trees with `1..=max_n` carets.
pub fn gtable_conformance(max_n: usize) -> Result<GTableReport> {
    let mut report = GTableReport { max_n, ..Default::default() };
    for n in 1..=max_n {
        for t in enumerate_trees(n)? {
            let steps = applicable_spine_steps(&t);
            for pair in t.sibling_pairs() {
                let g = t.g_trace(pair)?;
                for &step in &steps {
                    report.cases += 1;
                    let after = rotate(&t, step)?;
                    let actual = if after.has_sibling_pair(pair[0]) {
                        Some(after.g_trace(pair)?)
                    } else {
                        None
                    };
                    match predict_g_transition(&g, step) {
                        Ok(p) => {
                            report.covered += 1;
                            if actual.as_ref() == Some(&p) {
                                report.matched += 1;
                            } else {
                                report.mismatches.push(format!(
                                    "{t} caret {pair:?} {g} under {step}: predicted {p}, got {}",
                                    actual.map_or("split".to_string(), |a| a.to_string())
                                ));
                            }
                        }
                        Err(Error::UnspecifiedCase(reason)) => {
                            *report.uncovered.entry(reason).or_insert(0) += 1;
                        }
                        Err(e) => report.mismatches.push(format!("{t} caret {pair:?} {g}: {e}")),
                    }
                }
            }
        }
    }
    Ok(report)
}
