//! Walters-family potentials and point classification.
//!
//! A potential is given by four sequences:
//!
//! | point class        | value   |
//! |--------------------|---------|
//! | `0^∞`              | `a`     |
//! | `0^k 1 ...`, k ≥ 2 | `a_k`   |
//! | `0 1^m 0 ...`      | `b_m`   |
//! | `0 1^∞`            | `b`     |
//! | `1^∞`              | `c`     |
//! | `1^k 0 ...`, k ≥ 2 | `c_k`   |
//! | `1 0^m 1 ...`      | `d_m`   |
//! | `1 0^∞`            | `d`     |
//!
//! `a_1` and `c_1` are never read.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{zeta, SequenceSpec, TailSum};
use crate::symbolic::{Point, Runs, Symbol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaltersPotential {
    pub a: SequenceSpec,
    pub b: SequenceSpec,
    pub c: SequenceSpec,
    pub d: SequenceSpec,
}

/// The combinatorial class of a point, which alone determines `A(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    ZerosForever,
    ZerosThenOne(usize),
    ZeroOnesZero(usize),
    ZeroOnesForever,
    OnesForever,
    OnesThenZero(usize),
    OneZerosOne(usize),
    OneZerosForever,
}

impl PointClass {
    /// Class from the run-length view of a point.
    pub fn from_runs(runs: &Runs) -> PointClass {
        let (s, first) = runs.first();
        let zero = s == Symbol::Zero;
        match first {
            None if zero => PointClass::ZerosForever,
            None => PointClass::OnesForever,
            Some(k) if k >= 2 && zero => PointClass::ZerosThenOne(k),
            Some(k) if k >= 2 => PointClass::OnesThenZero(k),
            Some(_) => match (runs.second_len(), zero) {
                (Some(m), true) => PointClass::ZeroOnesZero(m),
                (None, true) => PointClass::ZeroOnesForever,
                (Some(m), false) => PointClass::OneZerosOne(m),
                (None, false) => PointClass::OneZerosForever,
            },
        }
    }

    /// The image class under the symbol exchange 0 ↔ 1.
    pub fn flip(self) -> PointClass {
        use PointClass::*;
        match self {
            ZerosForever => OnesForever,
            ZerosThenOne(k) => OnesThenZero(k),
            ZeroOnesZero(m) => OneZerosOne(m),
            ZeroOnesForever => OneZerosForever,
            OnesForever => ZerosForever,
            OnesThenZero(k) => ZerosThenOne(k),
            OneZerosOne(m) => ZeroOnesZero(m),
            OneZerosForever => ZeroOnesForever,
        }
    }

    /// A representative point of the class ending in `tail^∞` where possible.
    pub fn representative(self, tail: Symbol) -> Point {
        use Symbol::{One, Zero};
        let mk = |bits: Vec<Symbol>, t: Symbol| Point::new(crate::symbolic::Word::new(bits), t);
        match self {
            PointClass::ZerosForever => Point::zeros(),
            PointClass::OnesForever => Point::ones(),
            PointClass::ZeroOnesForever => mk(vec![Zero], One),
            PointClass::OneZerosForever => mk(vec![One], Zero),
            PointClass::ZerosThenOne(k) => {
                let mut v = vec![Zero; k];
                v.push(One);
                mk(v, tail)
            }
            PointClass::OnesThenZero(k) => {
                let mut v = vec![One; k];
                v.push(Zero);
                mk(v, tail)
            }
            PointClass::ZeroOnesZero(m) => {
                let mut v = vec![Zero];
                v.extend(std::iter::repeat_n(One, m));
                v.push(Zero);
                mk(v, tail)
            }
            PointClass::OneZerosOne(m) => {
                let mut v = vec![One];
                v.extend(std::iter::repeat_n(Zero, m));
                v.push(One);
                mk(v, tail)
            }
        }
    }

    /// All classes whose index is at most `depth`.
    pub fn enumerate(depth: usize) -> Vec<PointClass> {
        let mut out = vec![
            PointClass::ZerosForever,
            PointClass::ZeroOnesForever,
            PointClass::OnesForever,
            PointClass::OneZerosForever,
        ];
        for k in 2..=depth {
            out.push(PointClass::ZerosThenOne(k));
            out.push(PointClass::OnesThenZero(k));
        }
        for m in 1..=depth {
            out.push(PointClass::ZeroOnesZero(m));
            out.push(PointClass::OneZerosOne(m));
        }
        out
    }
}

/// Representatives of every class with index ≤ `depth`, with both tails
/// where the class admits them, sorted lexicographically.
pub fn class_representatives(depth: usize) -> Vec<Point> {
    let mut pts: Vec<Point> = PointClass::enumerate(depth)
        .into_iter()
        .flat_map(|c| [c.representative(Symbol::Zero), c.representative(Symbol::One)])
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

pub fn classify(p: &Point) -> PointClass {
    PointClass::from_runs(&p.runs())
}

pub fn eval_potential(pot: &WaltersPotential, p: &Point) -> f64 {
    pot.eval(p)
}

/// Certified sums of `Σ_{n≥2}(a_n − a)` and `Σ_{n≥2}(c_n − c)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub sum_a_minus_a: Option<TailSum>,
    pub sum_c_minus_c: Option<TailSum>,
    pub is_regular: bool,
    pub abs_summable: bool,
    pub reasons: Vec<String>,
}

impl WaltersPotential {
    pub fn new(a: SequenceSpec, b: SequenceSpec, c: SequenceSpec, d: SequenceSpec) -> Self {
        WaltersPotential { a, b, c, d }
    }

    /// Every sequence constant `kappa`.
    pub fn constant(kappa: f64) -> Self {
        let s = SequenceSpec::constant(kappa);
        WaltersPotential::new(s.clone(), s.clone(), s.clone(), s)
    }

    pub fn eval_class(&self, class: PointClass) -> f64 {
        match class {
            PointClass::ZerosForever => self.a.limit(),
            PointClass::ZerosThenOne(k) => self.a.value(k),
            PointClass::ZeroOnesZero(m) => self.b.value(m),
            PointClass::ZeroOnesForever => self.b.limit(),
            PointClass::OnesForever => self.c.limit(),
            PointClass::OnesThenZero(k) => self.c.value(k),
            PointClass::OneZerosOne(m) => self.d.value(m),
            PointClass::OneZerosForever => self.d.limit(),
        }
    }

    pub fn eval(&self, p: &Point) -> f64 {
        self.eval_class(classify(p))
    }

    pub fn eval_runs(&self, runs: &Runs) -> f64 {
        self.eval_class(PointClass::from_runs(runs))
    }

    /// The potential `A ∘ flip`, i.e. `a ↔ c` and `b ↔ d`.
    pub fn swapped(&self) -> WaltersPotential {
        WaltersPotential::new(self.c.clone(), self.d.clone(), self.a.clone(), self.b.clone())
    }

    /// Adds a constant to every value.
    pub fn shifted_by(&self, kappa: f64) -> WaltersPotential {
        let add = |s: &SequenceSpec| -> SequenceSpec {
            match s {
                SequenceSpec::Constant { value } => SequenceSpec::constant(value + kappa),
                SequenceSpec::FinitePlusConstant { leading, tail } => {
                    SequenceSpec::finite_plus_constant(leading.iter().map(|v| v + kappa).collect(), tail + kappa)
                }
                SequenceSpec::Geometric { limit, amplitude, ratio } => {
                    SequenceSpec::geometric(limit + kappa, *amplitude, *ratio)
                }
                other => {
                    let inner = other.clone();
                    let bound = other.clone();
                    let sum = other.clone();
                    let mut c = crate::sequence::CustomSequence::new(
                        "shifted",
                        move |n| inner.value(n) + kappa,
                        other.limit() + kappa,
                        move |n| bound.sup_tail_bound(n),
                    );
                    if other.is_abs_summable() {
                        c = c.with_sum_bound(move |n| sum.abs_sum_tail(n).unwrap_or(f64::INFINITY));
                    }
                    SequenceSpec::Custom(c)
                }
            }
        };
        WaltersPotential::new(add(&self.a), add(&self.b), add(&self.c), add(&self.d))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, s) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            s.validate().map_err(|e| Error::InvalidParameter(format!("sequence {name}: {e}")))?;
        }
        Ok(())
    }

    /// Summability of `Σ(a_n − a)` and `Σ(c_n − c)`; failures are reported,
    /// not returned as errors.
    pub fn check_regularity(&self, tol: f64) -> RegularityReport {
        let mut reasons = Vec::new();
        let mut sum = |name: &str, s: &SequenceSpec| match s.tail_sum(1, tol) {
            Ok(t) => Some(t),
            Err(e) => {
                reasons.push(format!("{name}: {e}"));
                None
            }
        };
        let sa = sum("a", &self.a);
        let sc = sum("c", &self.c);
        RegularityReport {
            is_regular: sa.is_some() && sc.is_some(),
            abs_summable: self.a.is_abs_summable() && self.c.is_abs_summable(),
            sum_a_minus_a: sa,
            sum_c_minus_c: sc,
            reasons,
        }
    }

    /// Fails with [`Error::NotRegular`] unless both tail sums are certified.
    pub fn require_regular(&self, tol: f64) -> Result<RegularityReport> {
        let r = self.check_regularity(tol);
        if r.is_regular {
            Ok(r)
        } else {
            Err(Error::NotRegular(r.reasons.join("; ")))
        }
    }
}

pub fn check_regularity(pot: &WaltersPotential, tol: f64) -> RegularityReport {
    pot.check_regularity(tol)
}

/// The two-coordinate potential `A(x) = log P[x_1][x_2]`.
pub fn make_markov(p: [[f64; 2]; 2]) -> Result<WaltersPotential> {
    for (i, row) in p.iter().enumerate() {
        if row.iter().any(|&v| !(v > 0.0 && v < 1.0)) {
            return Err(Error::InvalidStochastic(format!("row {i} has an entry outside (0,1): {row:?}")));
        }
        if (row[0] + row[1] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidStochastic(format!("row {i} sums to {}", row[0] + row[1])));
        }
    }
    Ok(WaltersPotential::new(
        SequenceSpec::constant(p[0][0].ln()),
        SequenceSpec::constant(p[0][1].ln()),
        SequenceSpec::constant(p[1][1].ln()),
        SequenceSpec::constant(p[1][0].ln()),
    ))
}

/// Parameters of the Hofbauer specimen. Only `c_n = −γ log((n+1)/n)` is
/// fixed; the other three sequences are constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HofbauerParams {
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl HofbauerParams {
    /// Defaults `a = log ζ(γ)`, `b = d = −γ log 2`.
    pub fn with_defaults(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("Hofbauer gamma must exceed 1, got {gamma}")));
        }
        let d = -gamma * std::f64::consts::LN_2;
        Ok(HofbauerParams { gamma, a: zeta(gamma).ln(), b: d, d })
    }
}

pub fn make_hofbauer(gamma: f64) -> Result<WaltersPotential> {
    make_hofbauer_with(HofbauerParams::with_defaults(gamma)?)
}

pub fn make_hofbauer_with(p: HofbauerParams) -> Result<WaltersPotential> {
    if !(p.gamma > 1.0) {
        return Err(Error::InvalidParameter(format!("Hofbauer gamma must exceed 1, got {}", p.gamma)));
    }
    Ok(WaltersPotential::new(
        SequenceSpec::constant(p.a),
        SequenceSpec::constant(p.b),
        SequenceSpec::log_ratio(p.gamma),
        SequenceSpec::constant(p.d),
    ))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::symbolic::Word;
    use proptest::prelude::*;

    pub fn distinct() -> WaltersPotential {
        WaltersPotential::new(
            SequenceSpec::geometric(0.0, 0.05, 0.5),
            SequenceSpec::geometric(0.1, -0.04, 0.5),
            SequenceSpec::geometric(-0.1, 0.06, 0.5),
            SequenceSpec::geometric(0.05, -0.03, 0.5),
        )
    }

    fn p(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&Point::zeros()), PointClass::ZerosForever);
        assert_eq!(classify(&p("0^3 1 0^inf")), PointClass::ZerosThenOne(3));
        assert_eq!(classify(&p("1 0^2 1 1^inf")), PointClass::OneZerosOne(2));
        assert_eq!(classify(&p("0 1^inf")), PointClass::ZeroOnesForever);
        assert_eq!(classify(&p("0 1^4 0^inf")), PointClass::ZeroOnesZero(4));
        assert_eq!(classify(&p("0^2 1^inf")), PointClass::ZerosThenOne(2));
        assert_eq!(classify(&p("1 0^inf")), PointClass::OneZerosForever);
        assert_eq!(classify(&p("1^5 0 1^inf")), PointClass::OnesThenZero(5));
    }

    #[test]
    fn representatives_classify_back() {
        for c in PointClass::enumerate(7) {
            for t in [Symbol::Zero, Symbol::One] {
                assert_eq!(classify(&c.representative(t)), c);
            }
            assert_eq!(c.flip().flip(), c);
        }
        assert_eq!(class_representatives(5).len(), 40);
    }

    #[test]
    fn markov_eval_matches_two_coordinates() {
        let m = [[2.0 / 3.0, 1.0 / 3.0], [0.25, 0.75]];
        let pot = make_markov(m).unwrap();
        for w in 0..4 {
            let word = Word::from_index(w, 2);
            for tail in [Symbol::Zero, Symbol::One] {
                for extra in 0..4 {
                    let mut bits = word.symbols().to_vec();
                    bits.extend(Word::from_index(extra, 2).symbols());
                    let x = Point::new(Word::new(bits), tail);
                    let expect = m[x.coord(1).bit() as usize][x.coord(2).bit() as usize].ln();
                    assert!((pot.eval(&x) - expect).abs() < 1e-15, "{x}");
                }
            }
        }
        assert!((pot.eval(&Point::zeros()) - (2.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!(matches!(make_markov([[0.5, 0.4], [0.5, 0.5]]), Err(Error::InvalidStochastic(_))));
        assert!(matches!(make_markov([[1.0, 0.0], [0.5, 0.5]]), Err(Error::InvalidStochastic(_))));
        let fair = make_markov([[0.5, 0.5], [0.5, 0.5]]).unwrap();
        assert_eq!(fair, WaltersPotential::constant(0.5f64.ln()));
    }

    #[test]
    fn hofbauer() {
        let h = make_hofbauer(2.0).unwrap();
        assert!((h.eval(&p("1^3 0 1^inf")) + 2.0 * (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert_eq!(h.c.limit(), 0.0);
        let r = h.check_regularity(1e-9);
        assert!(!r.is_regular);
        assert!(r.sum_c_minus_c.is_none());
        // telescoping partial sums grow like -2 log n
        let partial: f64 = (2..=1000).map(|n| h.c.value(n)).sum();
        assert!((partial + 2.0 * (1001.0f64 / 2.0).ln()).abs() < 1e-9);
        assert!(make_hofbauer(1.0).is_err());
    }

    #[test]
    fn regularity() {
        let r = WaltersPotential::constant(0.3).check_regularity(1e-10);
        assert!(r.is_regular && r.abs_summable);
        assert_eq!(r.sum_a_minus_a.unwrap().value, 0.0);
        let g = distinct().check_regularity(1e-10);
        assert!(g.is_regular);
        assert!((g.sum_a_minus_a.unwrap().value - 0.05 * 0.25 / 0.5).abs() < 1e-15);
    }

    #[test]
    fn harmonic_custom_not_regular() {
        let harmonic = SequenceSpec::Custom(crate::sequence::CustomSequence::new(
            "harmonic",
            |n| 1.0 / n as f64,
            0.0,
            |big_n| 1.0 / ((big_n + 2) as f64).ln(),
        ));
        let pot = WaltersPotential::new(
            harmonic,
            SequenceSpec::constant(0.0),
            SequenceSpec::constant(0.0),
            SequenceSpec::constant(0.0),
        );
        let r = pot.check_regularity(1e-9);
        assert!(!r.is_regular && !r.abs_summable);
        // comparison oracle: partial sums keep growing like log n
        let s1: f64 = (2..=1000).map(|n| 1.0 / n as f64).sum();
        let s2: f64 = (2..=100_000).map(|n| 1.0 / n as f64).sum();
        assert!(s2 - s1 > 4.0);
    }

    #[test]
    fn swap_is_flip() {
        let pot = distinct();
        let sw = pot.swapped();
        for x in class_representatives(6) {
            assert_eq!(pot.eval(&x), sw.eval(&x.flip_symbols()));
        }
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (proptest::collection::vec(0u8..2, 0..12), 0u8..2).prop_map(|(bits, t)| Point::from_bits(&bits, t).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(5000))]
        #[test]
        fn classification_is_a_partition(x in arb_point()) {
            let c = classify(&x);
            let hits = PointClass::enumerate(14).into_iter().filter(|&k| k == c).count();
            prop_assert_eq!(hits, 1);
            prop_assert_eq!(classify(&c.representative(x.tail())), c);
        }
    }

    proptest! {
        #[test]
        fn value_depends_only_on_class(x in arb_point(), y in arb_point()) {
            let pot = distinct();
            if classify(&x) == classify(&y) {
                prop_assert_eq!(pot.eval(&x), pot.eval(&y));
            }
            prop_assert_eq!(pot.eval(&x), pot.eval(&classify(&x).representative(Symbol::Zero)));
        }

        #[test]
        fn markov_always_regular(p0 in 0.01..0.99f64, p1 in 0.01..0.99f64) {
            let pot = make_markov([[p0, 1.0 - p0], [1.0 - p1, p1]]).unwrap();
            prop_assert!(pot.check_regularity(1e-10).is_regular);
        }
    }
}
