//! Points of the binary shift space restricted to eventually-constant sequences.
//!
//! A [`Point`] is a finite prefix followed by a constant tail (`0^∞` or `1^∞`),
//! stored canonically so that each sequence has exactly one representation:
//! the prefix never ends with the tail symbol. Left points of a bilateral pair
//! use the same type with coordinates indexed outward from the bar, so
//! `y_1` is the symbol adjacent to the bar.
//!
//! Textual notation, used by the CLI and tests:
//!
//! * power form: `0^3 1 0^inf` (tokens `s`, `s^n`, digit strings such as
//!   `0110`, and a final `s^inf`); an exponent applies to the last symbol of
//!   its token;
//! * explicit form: `w=0110 tail=1`.
//!
//! [`Point`]'s `Display` prints the power form and parses back to the same
//! point.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A letter of the alphabet `{0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
}

impl Symbol {
    pub fn flip(self) -> Symbol {
        match self {
            Symbol::Zero => Symbol::One,
            Symbol::One => Symbol::Zero,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Symbol::Zero => 0,
            Symbol::One => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Result<Symbol> {
        match bit {
            0 => Ok(Symbol::Zero),
            1 => Ok(Symbol::One),
            other => Err(Error::Parse(format!("symbol must be 0 or 1, got {other}"))),
        }
    }

    fn from_char(c: char) -> Result<Symbol> {
        match c {
            '0' => Ok(Symbol::Zero),
            '1' => Ok(Symbol::One),
            other => Err(Error::Parse(format!("symbol must be 0 or 1, got {other:?}"))),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// A finite word over `{0, 1}`, possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter().map(|&b| Symbol::from_bit(b)).collect::<Result<Vec<_>>>().map(Word)
    }

    /// The word of length `len` whose lexicographic index is `index`
    /// (first symbol most significant).
    pub fn from_index(index: usize, len: usize) -> Self {
        Word((0..len).map(|j| if (index >> (len - 1 - j)) & 1 == 1 { Symbol::One } else { Symbol::Zero }).collect())
    }

    /// Lexicographic index among words of the same length.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, s| (acc << 1) | s.bit() as usize)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn flipped(&self) -> Word {
        Word(self.0.iter().map(|s| s.flip()).collect())
    }
}

/// Reverses a word: `[x_1, ..., x_n] -> [x_n, ..., x_1]`.
pub fn reverse_word(w: &Word) -> Word {
    w.reversed()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim().chars().map(Symbol::from_char).collect::<Result<Vec<_>>>().map(Word)
    }
}

/// An eventually-constant point `prefix · tail^∞` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    prefix: Vec<Symbol>,
    tail: Symbol,
}

impl Point {
    /// Builds a point and restores canonical form.
    pub fn new(prefix: Word, tail: Symbol) -> Self {
        let mut prefix = prefix.0;
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Point { prefix, tail }
    }

    pub fn constant(tail: Symbol) -> Self {
        Point { prefix: Vec::new(), tail }
    }

    pub fn zeros() -> Self {
        Self::constant(Symbol::Zero)
    }

    pub fn ones() -> Self {
        Self::constant(Symbol::One)
    }

    pub fn from_bits(prefix: &[u8], tail: u8) -> Result<Self> {
        Ok(Self::new(Word::from_bits(prefix)?, Symbol::from_bit(tail)?))
    }

    /// `s^run · other · tail^∞`, the usual class representative.
    pub fn run_then(s: Symbol, run: usize, tail: Symbol) -> Self {
        let mut prefix = vec![s; run];
        prefix.push(s.flip());
        Self::new(Word(prefix), tail)
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn tail(&self) -> Symbol {
        self.tail
    }

    /// Coordinate `x_i`, 1-indexed.
    pub fn coord(&self, i: usize) -> Symbol {
        assert!(i >= 1, "coordinates are 1-indexed");
        self.prefix.get(i - 1).copied().unwrap_or(self.tail)
    }

    /// The first `n` coordinates.
    pub fn head(&self, n: usize) -> Word {
        Word((1..=n).map(|i| self.coord(i)).collect())
    }

    /// The unilateral shift σ, dropping the first coordinate.
    pub fn shift(&self) -> Point {
        if self.prefix.is_empty() {
            self.clone()
        } else {
            Point { prefix: self.prefix[1..].to_vec(), tail: self.tail }
        }
    }

    /// The inverse branch τ_s: prepends `s`.
    pub fn prepend(&self, s: Symbol) -> Point {
        if self.prefix.is_empty() && s == self.tail {
            return self.clone();
        }
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(s);
        prefix.extend_from_slice(&self.prefix);
        Point { prefix, tail: self.tail }
    }

    /// Prepends a whole word, so `w = [w_1, .., w_n]` gives `w_1 .. w_n x`.
    pub fn prepend_word(&self, w: &Word) -> Point {
        let mut prefix = w.0.clone();
        prefix.extend_from_slice(&self.prefix);
        Point::new(Word(prefix), self.tail)
    }

    /// Exchanges the symbols 0 and 1 in every coordinate.
    pub fn flip_symbols(&self) -> Point {
        Point { prefix: self.prefix.iter().map(|s| s.flip()).collect(), tail: self.tail.flip() }
    }

    pub fn is_constant(&self) -> bool {
        self.prefix.is_empty()
    }

    /// Run-length view of the point.
    pub fn runs(&self) -> Runs {
        let mut runs: Vec<(Symbol, usize)> = Vec::new();
        for &s in &self.prefix {
            match runs.last_mut() {
                Some((sym, len)) if *sym == s => *len += 1,
                _ => runs.push((s, 1)),
            }
        }
        Runs { runs, tail: self.tail }
    }

    /// Lexicographic comparison: the first differing coordinate decides.
    pub fn lex_compare(&self, other: &Point) -> Ordering {
        let n = self.prefix.len().max(other.prefix.len()) + 1;
        for i in 1..=n {
            match self.coord(i).cmp(&other.coord(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// σ on a point.
pub fn shift_right(p: &Point) -> Point {
    p.shift()
}

/// τ_{y1} on a point.
pub fn inverse_branch(y1: Symbol, p: &Point) -> Point {
    p.prepend(y1)
}

pub fn lex_compare(p: &Point, q: &Point) -> Ordering {
    p.lex_compare(q)
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_compare(other)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(s, len) in &self.runs().runs {
            if len == 1 {
                write!(f, "{s} ")?;
            } else {
                write!(f, "{s}^{len} ")?;
            }
        }
        write!(f, "{}^inf", self.tail)
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('=') {
            return parse_explicit(s);
        }
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let Some((last, body)) = tokens.split_last() else {
            return Err(Error::Parse("empty point".into()));
        };
        let mut prefix = Vec::new();
        for tok in body {
            let (syms, exp) = parse_token(tok)?;
            match exp {
                Exponent::Infinite => return Err(Error::Parse(format!("infinite run {tok:?} must be the last token"))),
                Exponent::Finite(n) => {
                    let (&lastsym, rest) = syms.split_last().expect("nonempty token");
                    prefix.extend_from_slice(rest);
                    prefix.extend(std::iter::repeat_n(lastsym, n));
                }
            }
        }
        let (syms, exp) = parse_token(last)?;
        let (&tail, rest) = syms.split_last().expect("nonempty token");
        prefix.extend_from_slice(rest);
        match exp {
            Exponent::Infinite => Ok(Point::new(Word(prefix), tail)),
            Exponent::Finite(_) => Err(Error::Parse(format!("point {s:?} must end with s^inf"))),
        }
    }
}

enum Exponent {
    Finite(usize),
    Infinite,
}

fn parse_token(tok: &str) -> Result<(Vec<Symbol>, Exponent)> {
    let (digits, exp) = match tok.split_once('^') {
        None => (tok, Exponent::Finite(1)),
        Some((d, e)) => {
            let exp = match e {
                "inf" | "∞" => Exponent::Infinite,
                n => Exponent::Finite(n.parse().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?),
            };
            (d, exp)
        }
    };
    if digits.is_empty() {
        return Err(Error::Parse(format!("token {tok:?} has no symbols")));
    }
    let syms = digits.chars().map(Symbol::from_char).collect::<Result<Vec<_>>>()?;
    Ok((syms, exp))
}

fn parse_explicit(s: &str) -> Result<Point> {
    let mut word = None;
    let mut tail = None;
    for tok in s.split_whitespace() {
        match tok.split_once('=') {
            Some(("w", w)) => word = Some(w.parse::<Word>()?),
            Some(("tail", t)) => {
                let mut chars = t.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => tail = Some(Symbol::from_char(c)?),
                    _ => return Err(Error::Parse(format!("bad tail {t:?}"))),
                }
            }
            _ => return Err(Error::Parse(format!("unexpected token {tok:?}"))),
        }
    }
    match (word, tail) {
        (Some(w), Some(t)) => Ok(Point::new(w, t)),
        _ => Err(Error::Parse(format!("expected `w=<word> tail=<0|1>`, got {s:?}"))),
    }
}

/// Canonical run-length encoding of a point: runs of alternating symbols
/// followed by an infinite tail whose symbol differs from the last run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Runs {
    runs: Vec<(Symbol, usize)>,
    tail: Symbol,
}

impl Runs {
    pub fn constant(tail: Symbol) -> Self {
        Runs { runs: Vec::new(), tail }
    }

    pub fn runs(&self) -> &[(Symbol, usize)] {
        &self.runs
    }

    pub fn tail(&self) -> Symbol {
        self.tail
    }

    /// Prepends `count` copies of `s`.
    pub fn prepend(&mut self, s: Symbol, count: usize) {
        if count == 0 {
            return;
        }
        match self.runs.first_mut() {
            Some((sym, len)) if *sym == s => *len += count,
            Some(_) => self.runs.insert(0, (s, count)),
            None if s == self.tail => {}
            None => self.runs.push((s, count)),
        }
    }

    /// The first run: its symbol and length (`None` when infinite).
    pub fn first(&self) -> (Symbol, Option<usize>) {
        match self.runs.first() {
            Some(&(s, len)) => (s, Some(len)),
            None => (self.tail, None),
        }
    }

    /// The second run length (`None` when infinite); only meaningful when the
    /// first run is finite.
    pub fn second_len(&self) -> Option<usize> {
        self.runs.get(1).map(|&(_, len)| len)
    }

    pub fn to_point(&self) -> Point {
        let mut prefix = Vec::new();
        for &(s, len) in &self.runs {
            prefix.extend(std::iter::repeat_n(s, len));
        }
        Point { prefix, tail: self.tail }
    }
}

/// A bilateral point `(y | x)`: `left` holds `y_1, y_2, ...` read outward from
/// the bar, `right` holds `x_1, x_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilateralPoint {
    pub left: Point,
    pub right: Point,
}

impl BilateralPoint {
    pub fn new(left: Point, right: Point) -> Self {
        BilateralPoint { left, right }
    }

    /// θ: swaps the two sides.
    pub fn flip_theta(&self) -> BilateralPoint {
        BilateralPoint { left: self.right.clone(), right: self.left.clone() }
    }

    /// The bilateral shift σ̂: `x_1` crosses the bar to the left.
    pub fn shift(&self) -> BilateralPoint {
        BilateralPoint { left: self.left.prepend(self.right.coord(1)), right: self.right.shift() }
    }

    /// σ̂^{-steps}: moves `y_steps, ..., y_1` to the right of the bar.
    pub fn shift_inverse(&self, steps: usize) -> BilateralPoint {
        let mut b = self.clone();
        for _ in 0..steps {
            let y1 = b.left.coord(1);
            b = BilateralPoint { left: b.left.shift(), right: b.right.prepend(y1) };
        }
        b
    }
}

pub fn flip_theta(b: &BilateralPoint) -> BilateralPoint {
    b.flip_theta()
}

pub fn bilateral_shift_inverse(b: &BilateralPoint, steps: usize) -> BilateralPoint {
    b.shift_inverse(steps)
}

impl fmt::Display for BilateralPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.left, self.right)
    }
}

impl FromStr for BilateralPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (l, r) = s.split_once('|').ok_or_else(|| Error::Parse(format!("bilateral point needs `|`: {s:?}")))?;
        Ok(BilateralPoint::new(l.parse()?, r.parse()?))
    }
}
