//! Parameterized tree pairs that realize or approach the distance bounds.

use std::fmt;
use std::str::FromStr;

use crate::distance::{GenSet, RotationGraph};
use crate::error::{Error, Result};
use crate::group::{pair_of_word, reduce_pair, word_of_pair, TreePair};
use crate::word::{Generator, Letter, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FamilyName {
    Badword,
    LongRa,
    Spinal,
    SpinalParity,
    /// Diametral pairs of the `{x0, x1}` rotation graph found by search.
    Discovered,
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyName::Badword => "badword",
            FamilyName::LongRa => "longra",
            FamilyName::Spinal => "spinal",
            FamilyName::SpinalParity => "spinal-parity",
            FamilyName::Discovered => "discovered-rr",
        })
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "badword" => Ok(FamilyName::Badword),
            "longra" => Ok(FamilyName::LongRa),
            "spinal" | "spinalword" => Ok(FamilyName::Spinal),
            "spinal-parity" => Ok(FamilyName::SpinalParity),
            "discovered-rr" | "discovered" => Ok(FamilyName::Discovered),
            other => Err(Error::ParameterViolation(format!("unknown family {other:?}"))),
        }
    }
}

/// Leaf pairs tracked through a family: one exposed in each tree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TrackedPairs {
    pub negative: [usize; 2],
    pub positive: [usize; 2],
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilyInstance {
    pub name: FamilyName,
    pub m: Option<usize>,
    pub level: Option<usize>,
    pub n: usize,
    pub word: Word,
    pub pair: TreePair,
    pub genset: GenSet,
    pub predicted_lower_bound: Option<usize>,
    pub predicted_upper_bound: Option<usize>,
    pub tracked: Option<TrackedPairs>,
}

fn x(i: usize, p: i64) -> Letter {
    Letter::new(Generator::x(i), p)
}

fn build(name: FamilyName, letters: Vec<Letter>, expected_n: usize) -> Result<(Word, TreePair)> {
    let word = Word::from_letters(letters);
    let pair = pair_of_word(&word);
    if pair.carets() != expected_n {
        return Err(Error::InternalInvariantViolation(format!(
            "{name} pair has {} carets, expected {expected_n}",
            pair.carets()
        )));
    }
    Ok((word, pair))
}

/// `x_{m+2} ... x_{n-2} x_{n-3}^-1 ... x_{m+1}^-1`, hard for `{x0, ..., x_m}`.
pub fn badword(m: usize, n: usize) -> Result<FamilyInstance> {
    if m < 1 || n <= m + 4 {
        return Err(Error::ParameterViolation(format!(
            "badword needs m >= 1 and n > m + 4 (got m = {m}, n = {n})"
        )));
    }
    let mut letters: Vec<Letter> = (m + 2..=n - 2).map(|i| x(i, 1)).collect();
    letters.extend((m + 1..=n - 3).rev().map(|i| x(i, -1)));
    let (word, pair) = build(FamilyName::Badword, letters, n)?;
    Ok(FamilyInstance {
        name: FamilyName::Badword,
        m: Some(m),
        level: None,
        n,
        word,
        pair,
        genset: GenSet::right_prefix(m),
        predicted_lower_bound: Some(4 * n - 4 * m - 4),
        predicted_upper_bound: Some(4 * n - 8),
        tracked: Some(TrackedPairs { negative: [n - 3, n - 2], positive: [n - 2, n - 1] }),
    })
}

/// `x0 x1 ... x_{n-2} x_{n-3}^-1 ... x1^-1 x0^-2`, of right-arm length `2n - 2`.
pub fn longra(n: usize) -> Result<FamilyInstance> {
    if n < 3 {
        return Err(Error::ParameterViolation(format!("longra needs n >= 3 (got {n})")));
    }
    let mut letters: Vec<Letter> = (0..=n - 2).map(|i| x(i, 1)).collect();
    letters.extend((1..=n - 3).rev().map(|i| x(i, -1)));
    letters.push(x(0, -2));
    let (word, pair) = build(FamilyName::LongRa, letters, n)?;
    Ok(FamilyInstance {
        name: FamilyName::LongRa,
        m: None,
        level: None,
        n,
        word,
        pair,
        genset: GenSet::all_right_arm(),
        predicted_lower_bound: Some(2 * n - 2),
        predicted_upper_bound: Some(2 * n - 2),
        tracked: None,
    })
}

fn spinal_letters(level: usize, m: usize, parity: bool) -> Vec<Letter> {
    let mut letters = vec![x(level + 2, 1)];
    letters.extend((level + 3..=m).map(|i| x(i, 2)));
    if parity {
        letters.push(x(m + 1, 1));
        letters.push(x(m, -1));
    }
    letters.extend((level + 2..m).rev().map(|i| x(i, -2)));
    letters.push(x(level + 1, -1));
    letters
}

fn check_spinal(level: usize, m: usize) -> Result<()> {
    if m < level + 2 {
        return Err(Error::ParameterViolation(format!(
            "spinal words need m >= I + 2 (got I = {level}, m = {m})"
        )));
    }
    Ok(())
}

/// Spinal hard word for the set `{x0..x_I, y1..y_I}`; `n = 2m - I`.
pub fn spinalword(level: usize, m: usize) -> Result<FamilyInstance> {
    check_spinal(level, m)?;
    let n = 2 * m - level;
    let (word, pair) = build(FamilyName::Spinal, spinal_letters(level, m, false), n)?;
    Ok(FamilyInstance {
        name: FamilyName::Spinal,
        m: Some(m),
        level: Some(level),
        n,
        word,
        pair,
        genset: GenSet::spinal_prefix(level),
        predicted_lower_bound: (4 * n).checked_sub(4 * level + 12),
        predicted_upper_bound: Some(4 * n - 8),
        tracked: Some(TrackedPairs { negative: [m - 1, m], positive: [m, m + 1] }),
    })
}

/// The spinal word with one extra caret, covering the other parity of `n`.
pub fn spinal_parity(level: usize, m: usize) -> Result<FamilyInstance> {
    check_spinal(level, m)?;
    let n = 2 * m - level + 1;
    let (word, pair) = build(FamilyName::SpinalParity, spinal_letters(level, m, true), n)?;
    Ok(FamilyInstance {
        name: FamilyName::SpinalParity,
        m: Some(m),
        level: Some(level),
        n,
        word,
        pair,
        genset: GenSet::spinal_prefix(level),
        predicted_lower_bound: (4 * n).checked_sub(4 * level + 10),
        predicted_upper_bound: Some(4 * n - 8),
        tracked: None,
    })
}

/// Largest n searched for diametral `{x0, x1}` pairs.
pub const DISCOVERED_CAP: usize = 8;

/// First reduced pair, in canonical tree order, at `{x0, x1}` distance `4n - 8`.
pub fn discovered_rr(n: usize) -> Result<FamilyInstance> {
    if !(3..=DISCOVERED_CAP).contains(&n) {
        return Err(Error::ParameterViolation(format!(
            "discovered-rr searches 3 <= n <= {DISCOVERED_CAP} (got {n})"
        )));
    }
    let target = 4 * n - 8;
    let g = RotationGraph::build(n, &GenSet::rr())?;
    for a in 0..g.len() {
        let bfs = g.bfs(a);
        for (b, &d) in bfs.dist.iter().enumerate() {
            if d as usize != target {
                continue;
            }
            let pair = TreePair::new(g.tree(a).clone(), g.tree(b).clone())?;
            if reduce_pair(&pair) != pair {
                continue;
            }
            let word = word_of_pair(&pair)?.to_word();
            return Ok(FamilyInstance {
                name: FamilyName::Discovered,
                m: None,
                level: None,
                n,
                word,
                pair,
                genset: GenSet::rr(),
                predicted_lower_bound: Some(target),
                predicted_upper_bound: Some(target),
                tracked: None,
            });
        }
    }
    Err(Error::NotDefined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::rra_defined;
    use crate::group::word_length_infinite;
    use crate::tree::{Arm, Side};

    #[test]
    fn badword_examples() {
        let b = badword(1, 6).unwrap();
        assert_eq!(b.word.to_string(), "x3 x4 x3^-1 x2^-1");
        assert_eq!(b.predicted_lower_bound, Some(16));
        assert_eq!(b.genset.to_string(), "x0,x1");
        assert!(badword(1, 5).is_err());
        assert!(badword(0, 9).is_err());
        for m in 1..=3 {
            for n in m + 5..=m + 9 {
                let b = badword(m, n).unwrap();
                assert_eq!(b.pair.carets(), n);
                assert!(b.pair.t1.has_sibling_pair(n - 3));
                assert!(b.pair.t2.has_sibling_pair(n - 2));
                let g = b.pair.t1.g_trace([n - 3, n - 2]).unwrap();
                assert_eq!((g.r, g.s, g.arm), (n - m - 3, m + 1, Arm::RightArm));
                assert!(rra_defined(&b.pair.t1, &b.pair.t2, &b.genset).unwrap());
                assert_eq!(pair_of_word(&b.word), b.pair);
            }
        }
    }

    #[test]
    fn longra_examples() {
        assert_eq!(longra(3).unwrap().word.to_string(), "x0 x1 x0^-2");
        assert_eq!(longra(5).unwrap().word.len(), 8);
        assert!(longra(2).is_err());
        for n in 3..=10 {
            let l = longra(n).unwrap();
            assert_eq!(word_length_infinite(&l.word), 2 * n - 2);
            assert_eq!(l.pair.carets(), n);
        }
    }

    #[test]
    fn spinal_examples() {
        let s = spinalword(1, 5).unwrap();
        assert_eq!(s.n, 9);
        assert_eq!(s.predicted_lower_bound, Some(20));
        assert_eq!(s.genset.to_string(), "x0,x1,y1");
        assert_eq!(s.word.to_string(), "x3 x4^2 x5^2 x4^-2 x3^-2 x2^-1");
        assert!(spinalword(1, 2).is_err());
        let p = spinal_parity(1, 5).unwrap();
        assert_eq!((p.n, p.predicted_lower_bound), (10, Some(26)));
        for level in 1..=3 {
            for m in level + 2..=level + 6 {
                let s = spinalword(level, m).unwrap();
                assert_eq!(s.pair.carets(), 2 * m - level);
                let c = s.pair.t1.g_trace([m - 1, m]).unwrap();
                let d = s.pair.t2.g_trace([m, m + 1]).unwrap();
                assert_eq!((c.r, c.s), (2 * m - 2 * level - 3, level + 1), "{m} {level}");
                assert_eq!((d.r, d.s), (2 * m - 2 * level - 3, level + 2), "{m} {level}");
                // labels alternate starting from the left child of the ancestor
                for (k, side) in c.labels.iter().enumerate() {
                    assert_eq!(*side, if k % 2 == 0 { Side::Left } else { Side::Right });
                }
                let p = spinal_parity(level, m).unwrap();
                assert_eq!(p.pair.carets() % 2, (s.pair.carets() + 1) % 2);
            }
        }
    }

    #[test]
    fn discovered_pairs_reach_the_bound() {
        for n in 3..=6 {
            let d = discovered_rr(n).unwrap();
            assert_eq!(d.pair.carets(), n);
        }
        assert!(discovered_rr(2).is_err());
    }

    #[test]
    fn names_round_trip() {
        for name in [
            FamilyName::Badword,
            FamilyName::LongRa,
            FamilyName::Spinal,
            FamilyName::SpinalParity,
            FamilyName::Discovered,
        ] {
            assert_eq!(name.to_string().parse::<FamilyName>().unwrap(), name);
        }
        assert!("nope".parse::<FamilyName>().is_err());
    }
}
