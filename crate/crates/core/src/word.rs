//! Words over the generators `x_i` (right arm) and `y_j` (left arm).
//!
//! Text form: letters separated by single spaces, each letter
//! `("x" | "y") index ("^" signed-exponent)?`, for example `x0 x2^-1 y1^3`.
//! The empty string is the identity.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Family {
    X,
    Y,
}

/// `x_i` (i >= 0) or `y_j` (j >= 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Generator {
    family: Family,
    index: usize,
}

impl Generator {
    pub fn new(family: Family, index: usize) -> Result<Self> {
        if family == Family::Y && index == 0 {
            return Err(Error::ParameterViolation("y generators start at index 1".into()));
        }
        Ok(Generator { family, index })
    }

    pub fn x(index: usize) -> Self {
        Generator { family: Family::X, index }
    }

    pub fn y(index: usize) -> Self {
        assert!(index >= 1, "y generators start at index 1");
        Generator { family: Family::Y, index }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::X => write!(f, "x{}", self.index),
            Family::Y => write!(f, "y{}", self.index),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn inverse(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// A generator or its inverse: a single letter of a word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SignedGenerator {
    pub generator: Generator,
    pub sign: Sign,
}

impl SignedGenerator {
    pub fn new(generator: Generator, sign: Sign) -> Self {
        SignedGenerator { generator, sign }
    }

    pub fn inverse(self) -> Self {
        SignedGenerator { generator: self.generator, sign: self.sign.inverse() }
    }
}

impl fmt::Display for SignedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "{}", self.generator),
            Sign::Neg => write!(f, "{}^-1", self.generator),
        }
    }
}

/// A generator raised to a nonzero power.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub generator: Generator,
    pub power: i64,
}

impl Letter {
    pub fn new(generator: Generator, power: i64) -> Self {
        assert!(power != 0, "letters carry a nonzero power");
        Letter { generator, power }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power == 1 {
            write!(f, "{}", self.generator)
        } else {
            write!(f, "{}^{}", self.generator, self.power)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// Builds a word from single signed letters, merging adjacent repeats.
    pub fn from_signed(seq: impl IntoIterator<Item = SignedGenerator>) -> Self {
        let mut w = Word::identity();
        for g in seq {
            w.push(g);
        }
        w
    }

    /// Appends a letter on the right, merging with a trailing letter of the same sign.
    pub fn push(&mut self, g: SignedGenerator) {
        let delta = match g.sign {
            Sign::Pos => 1,
            Sign::Neg => -1,
        };
        if let Some(last) = self.letters.last_mut() {
            if last.generator == g.generator && last.power.signum() == delta {
                last.power += delta;
                return;
            }
        }
        self.letters.push(Letter::new(g.generator, delta));
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of generators counted with multiplicity.
    pub fn len(&self) -> usize {
        self.letters.iter().map(|l| l.power.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Letters expanded to single signed generators, left to right.
    pub fn signed(&self) -> Vec<SignedGenerator> {
        let mut out = Vec::with_capacity(self.len());
        for l in &self.letters {
            let sign = if l.power > 0 { Sign::Pos } else { Sign::Neg };
            for _ in 0..l.power.unsigned_abs() {
                out.push(SignedGenerator::new(l.generator, sign));
            }
        }
        out
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter::new(l.generator, -l.power))
                .collect(),
        }
    }

    pub fn has_y(&self) -> bool {
        self.letters.iter().any(|l| l.generator.family == Family::Y)
    }

    /// Rewrites every `y_n` as `x0^n x1 x0^(-n-1)`.
    pub fn expand_y(&self) -> Word {
        let mut out = Word::identity();
        for g in self.signed() {
            match (g.generator.family, g.sign) {
                (Family::X, _) => out.push(g),
                (Family::Y, sign) => {
                    let n = g.generator.index;
                    let mut conj = Word::identity();
                    for _ in 0..n {
                        conj.push(SignedGenerator::new(Generator::x(0), Sign::Pos));
                    }
                    conj.push(SignedGenerator::new(Generator::x(1), Sign::Pos));
                    for _ in 0..=n {
                        conj.push(SignedGenerator::new(Generator::x(0), Sign::Neg));
                    }
                    let conj = if sign == Sign::Pos { conj } else { conj.inverse() };
                    for h in conj.signed() {
                        out.push(h);
                    }
                }
            }
        }
        out
    }

    /// The shift homomorphism `x_i -> x_(i+1)`; only defined on x-words.
    pub fn shift(&self) -> Result<Word> {
        if self.has_y() {
            return Err(Error::ParameterViolation("shift is defined on x-generators only".into()));
        }
        Ok(Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter::new(Generator::x(l.generator.index + 1), l.power))
                .collect(),
        })
    }
}

/// The shift homomorphism on words.
pub fn shift(w: &Word) -> Result<Word> {
    w.shift()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(text: &str) -> Result<Word> {
        parse_word(text)
    }
}

pub fn parse_word(text: &str) -> Result<Word> {
    let mut letters = Vec::new();
    if text.is_empty() {
        return Ok(Word { letters });
    }
    let mut offset = 0;
    for token in text.split(' ') {
        letters.push(parse_letter(token, offset)?);
        offset += token.len() + 1;
    }
    Ok(Word { letters })
}

fn parse_letter(token: &str, offset: usize) -> Result<Letter> {
    let err = |at: usize, msg: &str| Error::Parse { pos: offset + at, msg: msg.to_string() };
    let family = match token.as_bytes().first() {
        Some(b'x') => Family::X,
        Some(b'y') => Family::Y,
        Some(_) => return Err(err(0, "letter must start with 'x' or 'y'")),
        None => return Err(err(0, "empty letter (letters are separated by single spaces)")),
    };
    let rest = &token[1..];
    let (idx_text, exp_text) = match rest.split_once('^') {
        Some((i, e)) => (i, Some(e)),
        None => (rest, None),
    };
    if idx_text.is_empty() || !idx_text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(1, "expected a decimal generator index"));
    }
    let index: usize = idx_text.parse().map_err(|_| err(1, "generator index out of range"))?;
    let generator =
        Generator::new(family, index).map_err(|_| err(1, "y generators start at index 1"))?;
    let power = match exp_text {
        None => 1,
        Some(e) => {
            let at = 2 + idx_text.len();
            let digits = e.strip_prefix('-').unwrap_or(e);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(at, "expected a signed decimal exponent"));
            }
            let p: i64 = e.parse().map_err(|_| err(at, "exponent out of range"))?;
            if p == 0 {
                return Err(err(at, "exponent must be nonzero"));
            }
            p
        }
    };
    Ok(Letter::new(generator, power))
}
