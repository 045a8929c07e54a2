//! Thompson's group F as piecewise-linear homeomorphisms of the unit interval.
//!
//! Independent of the crate's tree and rewriting code: elements are exact
//! breakpoint lists, so equality of elements is equality of functions.

#![allow(dead_code)]

use std::collections::HashMap;

use num_rational::Rational64 as Q;
use rotdist::word::{Generator, Sign, SignedGenerator};

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Breakpoints `(t, f(t))` from `(0, 0)` to `(1, 1)`, with no redundant points.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pl(Vec<(Q, Q)>);

impl Pl {
    pub fn identity() -> Pl {
        Pl(vec![(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1))])
    }

    /// `x_n`: the identity on `[0, 1 - 2^-n]`, a scaled copy of `x_0` after.
    pub fn x(n: usize) -> Pl {
        let len = q(1, 1 << n);
        let a = q(1, 1) - len;
        let shape = [(q(0, 1), q(0, 1)), (q(1, 2), q(1, 4)), (q(3, 4), q(1, 2)), (q(1, 1), q(1, 1))];
        let mut pts = vec![(q(0, 1), q(0, 1))];
        pts.extend(shape.iter().map(|&(s, t)| (a + len * s, a + len * t)));
        Pl::from_points(pts)
    }

    pub fn of(g: SignedGenerator) -> Pl {
        let base = Pl::x(g.generator.index());
        match g.sign {
            Sign::Pos => base,
            Sign::Neg => base.inverse(),
        }
    }

    fn from_points(mut pts: Vec<(Q, Q)>) -> Pl {
        pts.sort();
        pts.dedup();
        let mut out: Vec<(Q, Q)> = Vec::with_capacity(pts.len());
        for p in pts {
            while out.len() >= 2 {
                let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
                if (b.1 - a.1) * (p.0 - b.0) == (p.1 - b.1) * (b.0 - a.0) {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        Pl(out)
    }

    pub fn eval(&self, t: Q) -> Q {
        let i = self.0.partition_point(|p| p.0 < t);
        if self.0[i].0 == t {
            return self.0[i].1;
        }
        let (a, b) = (self.0[i - 1], self.0[i]);
        a.1 + (t - a.0) * (b.1 - a.1) / (b.0 - a.0)
    }

    pub fn inverse(&self) -> Pl {
        Pl(self.0.iter().map(|&(x, y)| (y, x)).collect())
    }

    /// `t -> g(self(t))`: apply `self`, then `g`.
    pub fn then(&self, g: &Pl) -> Pl {
        let inv = self.inverse();
        let mut xs: Vec<Q> = self.0.iter().map(|p| p.0).collect();
        xs.extend(g.0.iter().map(|p| inv.eval(p.0)));
        Pl::from_points(xs.into_iter().map(|t| (t, g.eval(self.eval(t)))).collect())
    }

    /// Element of a word read as a composition: the rightmost letter acts first.
    pub fn of_word(letters: &[SignedGenerator]) -> Pl {
        letters.iter().fold(Pl::identity(), |acc, &g| Pl::of(g).then(&acc))
    }
}

pub fn signed(i: usize, pos: bool) -> SignedGenerator {
    SignedGenerator::new(Generator::x(i), if pos { Sign::Pos } else { Sign::Neg })
}

/// Distances from the identity in the Cayley graph on `x_0..=x_top`, out to `depth`.
pub fn cayley_ball(top: usize, depth: usize) -> HashMap<Pl, usize> {
    let gens: Vec<Pl> = (0..=top).flat_map(|i| [Pl::x(i), Pl::x(i).inverse()]).collect();
    let mut dist = HashMap::new();
    dist.insert(Pl::identity(), 0);
    let mut frontier = vec![Pl::identity()];
    for d in 1..=depth {
        let mut next = Vec::new();
        for e in &frontier {
            for g in &gens {
                let h = e.then(g);
                if !dist.contains_key(&h) {
                    dist.insert(h.clone(), d);
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Every word of length at most `len` over `x_0..=x_top` and their inverses.
pub fn all_words(top: usize, len: usize) -> Vec<Vec<SignedGenerator>> {
    let letters: Vec<SignedGenerator> =
        (0..=top).flat_map(|i| [signed(i, true), signed(i, false)]).collect();
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for &g in &letters {
                let mut v: Vec<SignedGenerator> = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
