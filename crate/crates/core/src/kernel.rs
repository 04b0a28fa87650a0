//! Involution kernels `W(y|x)` based at a reference point `x'`.
//!
//! The kernel is the series
//!
//! ```text
//! W(y|x) = Σ_{n≥1} [ A(y_n … y_1 x) − A(y_n … y_1 x') ]
//! ```
//!
//! [`kernel_series`] sums it directly and certifies the truncation error;
//! [`kernel_closed_form`] evaluates the closed forms, which depend on `y` and
//! `x` only through their leading runs. Bases in the `1` family are reduced
//! to the `0` family by exchanging symbols and swapping `a ↔ c`, `b ↔ d`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::WaltersPotential;
use crate::sequence::{rounding, TailSum};
use crate::symbolic::{Point, Symbol, Word};

pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Class of the base point `x'` of a kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseSpec {
    ZerosForever,
    ZerosThenOne(usize),
    OnesThenZero(usize),
    OnesForever,
}

impl BaseSpec {
    /// The four base classes with `α` used for the middle two.
    pub fn all(alpha: usize) -> [BaseSpec; 4] {
        [BaseSpec::ZerosForever, BaseSpec::ZerosThenOne(alpha), BaseSpec::OnesThenZero(alpha), BaseSpec::OnesForever]
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BaseSpec::ZerosThenOne(0) | BaseSpec::OnesThenZero(0) => {
                Err(Error::InvalidParameter("base exponent α must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn alpha(&self) -> Option<usize> {
        match self {
            BaseSpec::ZerosThenOne(a) | BaseSpec::OnesThenZero(a) => Some(*a),
            _ => None,
        }
    }

    pub fn is_ones_family(&self) -> bool {
        matches!(self, BaseSpec::OnesThenZero(_) | BaseSpec::OnesForever)
    }

    pub fn flip(&self) -> BaseSpec {
        match *self {
            BaseSpec::ZerosForever => BaseSpec::OnesForever,
            BaseSpec::ZerosThenOne(a) => BaseSpec::OnesThenZero(a),
            BaseSpec::OnesThenZero(a) => BaseSpec::ZerosThenOne(a),
            BaseSpec::OnesForever => BaseSpec::ZerosForever,
        }
    }

    /// A concrete base point: `0^∞`, `0^α 1 0^∞`, `1^α 0 1^∞` or `1^∞`.
    pub fn point(&self) -> Point {
        match *self {
            BaseSpec::ZerosForever => Point::zeros(),
            BaseSpec::OnesForever => Point::ones(),
            BaseSpec::ZerosThenOne(a) => Point::run_then(Symbol::Zero, a, Symbol::Zero),
            BaseSpec::OnesThenZero(a) => Point::run_then(Symbol::One, a, Symbol::One),
        }
    }

    /// Parses `0^inf`, `1^inf`, `0^a1`, `1^a0` (with `alpha` supplied), or any
    /// point or word such as `0^3 1` whose leading run fixes the class.
    pub fn parse(s: &str, alpha: Option<usize>) -> Result<BaseSpec> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let need_alpha = || alpha.ok_or_else(|| Error::Parse(format!("base {s:?} needs an explicit alpha")));
        let base = match compact.as_str() {
            "0^inf" | "0^∞" => BaseSpec::ZerosForever,
            "1^inf" | "1^∞" => BaseSpec::OnesForever,
            "0^a1" | "0^α1" | "0^alpha1" => BaseSpec::ZerosThenOne(need_alpha()?),
            "1^a0" | "1^α0" | "1^alpha0" => BaseSpec::OnesThenZero(need_alpha()?),
            _ => {
                let p: Point = s
                    .parse()
                    .or_else(|_| format!("{s} 0^inf").parse())
                    .map_err(|_| Error::Parse(format!("unrecognised base {s:?}")))?;
                match LeadingRun::of(&p) {
                    LeadingRun::ZerosForever => BaseSpec::ZerosForever,
                    LeadingRun::OnesForever => BaseSpec::OnesForever,
                    LeadingRun::Zeros(l) => BaseSpec::ZerosThenOne(l),
                    LeadingRun::Ones(l) => BaseSpec::OnesThenZero(l),
                }
            }
        };
        base.validate()?;
        Ok(base)
    }
}

impl fmt::Display for BaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSpec::ZerosForever => write!(f, "0^inf"),
            BaseSpec::ZerosThenOne(a) => write!(f, "0^{a} 1"),
            BaseSpec::OnesThenZero(a) => write!(f, "1^{a} 0"),
            BaseSpec::OnesForever => write!(f, "1^inf"),
        }
    }
}

/// The leading run of a point: `0^∞`, `[0^l 1]`, `1^∞` or `[1^l 0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LeadingRun {
    ZerosForever,
    Zeros(usize),
    Ones(usize),
    OnesForever,
}

impl LeadingRun {
    pub fn of(p: &Point) -> LeadingRun {
        match p.runs().first() {
            (Symbol::Zero, None) => LeadingRun::ZerosForever,
            (Symbol::One, None) => LeadingRun::OnesForever,
            (Symbol::Zero, Some(l)) => LeadingRun::Zeros(l),
            (Symbol::One, Some(l)) => LeadingRun::Ones(l),
        }
    }

    pub fn flip(self) -> LeadingRun {
        match self {
            LeadingRun::ZerosForever => LeadingRun::OnesForever,
            LeadingRun::OnesForever => LeadingRun::ZerosForever,
            LeadingRun::Zeros(l) => LeadingRun::Ones(l),
            LeadingRun::Ones(l) => LeadingRun::Zeros(l),
        }
    }

    pub fn representative(self) -> Point {
        match self {
            LeadingRun::ZerosForever => Point::zeros(),
            LeadingRun::OnesForever => Point::ones(),
            LeadingRun::Zeros(l) => Point::run_then(Symbol::Zero, l, Symbol::Zero),
            LeadingRun::Ones(l) => Point::run_then(Symbol::One, l, Symbol::Zero),
        }
    }

    /// All leading runs with length at most `depth`.
    pub fn enumerate(depth: usize) -> Vec<LeadingRun> {
        let mut v = vec![LeadingRun::ZerosForever, LeadingRun::OnesForever];
        for l in 1..=depth {
            v.push(LeadingRun::Zeros(l));
            v.push(LeadingRun::Ones(l));
        }
        v
    }

    fn label(self, var: &str) -> String {
        match self {
            LeadingRun::ZerosForever => "0^inf".into(),
            LeadingRun::OnesForever => "1^inf".into(),
            LeadingRun::Zeros(_) => format!("[0^{var} 1]"),
            LeadingRun::Ones(_) => format!("[1^{var} 0]"),
        }
    }
}

impl fmt::Display for LeadingRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeadingRun::ZerosForever => write!(f, "0^inf"),
            LeadingRun::OnesForever => write!(f, "1^inf"),
            LeadingRun::Zeros(l) => write!(f, "[0^{l} 1]"),
            LeadingRun::Ones(l) => write!(f, "[1^{l} 0]"),
        }
    }
}

/// A kernel (or series) value with its certified error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: f64,
    pub error_bound: f64,
    pub converged: bool,
}

/// Closed-form kernel evaluator for a fixed potential and base.
///
/// Regularity is checked once on construction and tail sums are cached.
pub struct KernelEvaluator {
    pot: WaltersPotential,
    base: BaseSpec,
    flip: bool,
    tol: f64,
    cache: RefCell<HashMap<(bool, usize), TailSum>>,
}

#[derive(Default)]
struct Acc {
    value: f64,
    abs: f64,
    ops: usize,
    err: f64,
}

impl Acc {
    fn add(&mut self, v: f64) {
        self.value += v;
        self.abs += v.abs();
        self.ops += 1;
    }

    fn sub(&mut self, v: f64) {
        self.add(-v);
    }

    fn add_sum(&mut self, t: TailSum, sign: f64) {
        self.add(sign * t.value);
        self.err += t.error_bound;
    }

    fn finish(self) -> KernelValue {
        KernelValue { value: self.value, error_bound: self.err + rounding(self.ops, self.abs), converged: true }
    }
}

impl KernelEvaluator {
    pub fn new(pot: &WaltersPotential, base: BaseSpec, tol: f64) -> Result<Self> {
        base.validate()?;
        pot.require_regular(tol)?;
        let flip = base.is_ones_family();
        Ok(KernelEvaluator {
            pot: if flip { pot.swapped() } else { pot.clone() },
            base: if flip { base.flip() } else { base },
            flip,
            tol,
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn eval(&self, y: &Point, x: &Point) -> Result<KernelValue> {
        self.eval_runs(LeadingRun::of(y), LeadingRun::of(x))
    }

    /// Kernel value from the leading runs of `y` and `x`.
    pub fn eval_runs(&self, y: LeadingRun, x: LeadingRun) -> Result<KernelValue> {
        let (y, x) = if self.flip { (y.flip(), x.flip()) } else { (y, x) };
        self.zero_family(y, x)
    }

    /// Identifier of the closed-form cell used for `(y|x)`.
    pub fn cell(&self, y: &Point, x: &Point) -> String {
        kernel_cell(if self.flip { self.base.flip() } else { self.base }, y, x)
    }

    fn tail(&self, c_seq: bool, offset: usize) -> Result<TailSum> {
        if let Some(t) = self.cache.borrow().get(&(c_seq, offset)) {
            return Ok(*t);
        }
        let seq = if c_seq { &self.pot.c } else { &self.pot.a };
        let t = seq.tail_sum(offset, self.tol)?;
        self.cache.borrow_mut().insert((c_seq, offset), t);
        Ok(t)
    }

    fn zero_family(&self, y: LeadingRun, x: LeadingRun) -> Result<KernelValue> {
        use LeadingRun::*;
        let p = &self.pot;
        let (a, b, c, d) = (&p.a, &p.b, &p.c, &p.d);
        let (la, lb, lc, ld) = (a.limit(), b.limit(), c.limit(), d.limit());
        let alpha = self.base.alpha();
        let a_b = |j: usize| alpha.map_or(la, |al| a.value(al + j));
        let d_b = |j: usize| alpha.map_or(ld, |al| d.value(al + j));
        let d0 = alpha.map_or(ld, |al| d.value(al));
        let sa = |k: usize| self.tail(false, k);
        let sc = |k: usize| self.tail(true, k);
        let sa_b = |acc: &mut Acc, j: usize, sign: f64| -> Result<()> {
            if let Some(al) = alpha {
                acc.add_sum(sa(al + j)?, sign);
            }
            Ok(())
        };
        let mut acc = Acc::default();
        match (y, x) {
            (ZerosForever, ZerosForever) => sa_b(&mut acc, 0, -1.0)?,
            (ZerosForever, Zeros(k)) => {
                acc.add_sum(sa(k)?, 1.0);
                sa_b(&mut acc, 0, -1.0)?;
            }
            (ZerosForever, OnesForever | Ones(_)) => {
                acc.add(match x {
                    Ones(k) => b.value(k),
                    _ => lb,
                });
                acc.sub(a_b(1));
                acc.add_sum(sa(1)?, 1.0);
                sa_b(&mut acc, 1, -1.0)?;
            }
            (Zeros(l), ZerosForever) => {
                for n in 1..=l {
                    acc.add(la - a_b(n));
                }
                acc.add(ld - d_b(l));
            }
            (Zeros(l), Zeros(k)) => {
                for n in 1..=l {
                    acc.add(a.value(n + k) - a_b(n));
                }
                acc.add(d.value(l + k) - d_b(l));
            }
            (Zeros(l), OnesForever | Ones(_)) => {
                acc.add(match x {
                    Ones(k) => b.value(k),
                    _ => lb,
                });
                acc.sub(a_b(1));
                for n in 2..=l {
                    acc.add(a.value(n) - a_b(n));
                }
                acc.add(d.value(l) - d_b(l));
            }
            (OnesForever | Ones(_), ZerosForever) => acc.add(ld - d0),
            (OnesForever | Ones(_), Zeros(k)) => acc.add(d.value(k) - d0),
            (OnesForever, OnesForever) => {
                acc.add(lc - d0);
                acc.add_sum(sc(1)?, -1.0);
            }
            (OnesForever, Ones(k)) => {
                acc.add(c.value(k + 1) - d0);
                acc.add_sum(sc(k + 1)?, 1.0);
                acc.add_sum(sc(1)?, -1.0);
            }
            (Ones(l), OnesForever) => {
                acc.add(lc - d0);
                for n in 2..=l {
                    acc.add(lc - c.value(n));
                }
                acc.add(lb - b.value(l));
            }
            (Ones(l), Ones(k)) => {
                acc.add(c.value(k + 1) - d0);
                for n in 2..=l {
                    acc.add(c.value(n + k) - c.value(n));
                }
                acc.add(b.value(l + k) - b.value(l));
            }
        }
        Ok(acc.finish())
    }
}

/// Closed-form cell identifier, e.g. `base=0^a1 y=[0^l 1] x=1^inf`.
pub fn kernel_cell(base: BaseSpec, y: &Point, x: &Point) -> String {
    let b = match base {
        BaseSpec::ZerosForever => "0^inf",
        BaseSpec::ZerosThenOne(_) => "0^a1",
        BaseSpec::OnesThenZero(_) => "1^a0",
        BaseSpec::OnesForever => "1^inf",
    };
    format!("base={b} y={} x={}", LeadingRun::of(y).label("l"), LeadingRun::of(x).label("k"))
}

/// `W(y|x)` from the closed forms.
pub fn kernel_closed_form(
    pot: &WaltersPotential,
    base: BaseSpec,
    y: &Point,
    x: &Point,
    tol: f64,
) -> Result<KernelValue> {
    KernelEvaluator::new(pot, base, tol)?.eval(y, x)
}

/// `W(y|x)` by direct summation of the defining series with base point
/// `base`.
///
/// When `y` has a nonempty prefix of length `p`, terms vanish for `n ≥ p+2`
/// and the sum is exact. For `y = t^∞` the tail is bounded through the
/// declared absolute-sum bound of `a` (`t = 0`) or `c` (`t = 1`); without
/// one the result is reported as not converged.
pub fn kernel_series(
    pot: &WaltersPotential,
    base: &Point,
    y: &Point,
    x: &Point,
    tol: f64,
    max_terms: usize,
) -> KernelValue {
    let mut px = x.runs();
    let mut pb = base.runs();
    let mut value = 0.0;
    let mut abs = 0.0;
    let mut step = |n: usize, px: &mut crate::symbolic::Runs, pb: &mut crate::symbolic::Runs| {
        let s = y.coord(n);
        px.prepend(s, 1);
        pb.prepend(s, 1);
        let t = pot.eval_runs(px) - pot.eval_runs(pb);
        value += t;
        abs += t.abs();
    };
    let p = y.prefix().len();
    if p > 0 {
        for n in 1..=p + 1 {
            step(n, &mut px, &mut pb);
        }
        return KernelValue { value, error_bound: rounding(p + 1, abs), converged: true };
    }
    let t = y.tail();
    let seq = if t == Symbol::Zero { &pot.a } else { &pot.c };
    let lead = |q: &Point| match q.runs().first() {
        (s, None) if s == t => None,
        (s, Some(l)) if s == t => Some(l),
        _ => Some(0),
    };
    let (rx, rb) = (lead(x), lead(base));
    let bound = |n: usize| -> Option<f64> {
        let part = |r: Option<usize>| match r {
            None => Some(0.0),
            Some(r) => seq.abs_sum_tail(n + r),
        };
        Some(part(rx)? + part(rb)?)
    };
    let mut n = 0;
    let mut checkpoint = 2;
    loop {
        while n < checkpoint.min(max_terms) {
            n += 1;
            step(n, &mut px, &mut pb);
        }
        let b = bound(n);
        if let Some(b) = b {
            if b <= tol / 2.0 {
                return KernelValue { value, error_bound: b + rounding(n, abs), converged: true };
            }
        }
        if n >= max_terms {
            return KernelValue { value, error_bound: b.unwrap_or(f64::INFINITY), converged: false };
        }
        checkpoint *= 2;
    }
}

/// `|W_α(y|x) − W_∞(y|x)|` for each α, comparing bases `0^α 1` and `0^∞`.
pub fn kernel_base_limit_check(
    pot: &WaltersPotential,
    y: &Point,
    x: &Point,
    alphas: &[usize],
    tol: f64,
) -> Result<Vec<f64>> {
    let w_inf = kernel_closed_form(pot, BaseSpec::ZerosForever, y, x, tol)?.value;
    alphas
        .iter()
        .map(|&al| Ok((kernel_closed_form(pot, BaseSpec::ZerosThenOne(al), y, x, tol)?.value - w_inf).abs()))
        .collect()
}

/// One row of a kernel grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelRow {
    pub y: LeadingRun,
    pub x: LeadingRun,
    pub value: f64,
    pub error_bound: f64,
    pub cell: String,
}

/// Closed-form values over all leading-run pairs with length ≤ `depth`.
pub fn kernel_table(pot: &WaltersPotential, base: BaseSpec, depth: usize, tol: f64) -> Result<Vec<KernelRow>> {
    let ev = KernelEvaluator::new(pot, base, tol)?;
    let runs = LeadingRun::enumerate(depth);
    let mut rows = Vec::with_capacity(runs.len() * runs.len());
    for &y in &runs {
        for &x in &runs {
            let v = ev.eval_runs(y, x)?;
            rows.push(KernelRow {
                y,
                x,
                value: v.value,
                error_bound: v.error_bound,
                cell: kernel_cell(base, &y.representative(), &x.representative()),
            });
        }
    }
    Ok(rows)
}

/// Prepends `y_n … y_1` (the first `n` coordinates of `y`, reversed) to `x`.
pub fn past_prefix(y: &Point, n: usize, x: &Point) -> Point {
    x.prepend_word(&Word::new((1..=n).rev().map(|i| y.coord(i)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::tests::distinct;
    use crate::potential::{class_representatives, make_markov};
    use crate::sequence::SequenceSpec;

    fn p(s: &str) -> Point {
        s.parse().unwrap()
    }

    fn unsummable(seq_limit: f64) -> SequenceSpec {
        SequenceSpec::Custom(crate::sequence::CustomSequence::new(
            "harmonic",
            move |n| seq_limit + 1.0 / n as f64,
            seq_limit,
            |big_n| 1.0 / (big_n + 1) as f64,
        ))
    }

    fn family() -> Vec<WaltersPotential> {
        vec![
            WaltersPotential::constant(-0.4),
            make_markov([[2.0 / 3.0, 1.0 / 3.0], [0.25, 0.75]]).unwrap(),
            distinct(),
            WaltersPotential::new(
                SequenceSpec::finite_plus_constant(vec![9.0, 0.3, -0.2, 0.5], 0.1),
                SequenceSpec::finite_plus_constant(vec![0.7, -0.1], 0.2),
                SequenceSpec::finite_plus_constant(vec![9.0, 0.1, 0.4, -0.3, 0.2], -0.5),
                SequenceSpec::finite_plus_constant(vec![-0.6, 0.2, 0.1], 0.0),
            ),
        ]
    }

    #[test]
    fn every_cell_matches_series() {
        for pot in family() {
            for base in BaseSpec::all(2).into_iter().chain([BaseSpec::ZerosThenOne(1), BaseSpec::OnesThenZero(3)]) {
                let ev = KernelEvaluator::new(&pot, base, 1e-12).unwrap();
                for yp in class_representatives(5) {
                    for x in class_representatives(5) {
                        let cf = ev.eval(&yp, &x).unwrap();
                        let se = kernel_series(&pot, &base.point(), &yp, &x, 1e-12, DEFAULT_MAX_TERMS);
                        assert!(se.converged);
                        assert!(
                            (cf.value - se.value).abs() <= cf.error_bound + se.error_bound + 1e-12,
                            "{base} y={yp} x={x}: {} vs {}",
                            cf.value,
                            se.value
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn geometric_zero_row() {
        let pot = WaltersPotential::new(
            SequenceSpec::geometric(0.0, 0.3, 0.5),
            SequenceSpec::constant(0.0),
            SequenceSpec::constant(0.0),
            SequenceSpec::constant(0.0),
        );
        for k in 1..6 {
            let x = Point::run_then(Symbol::Zero, k, Symbol::Zero);
            let w = kernel_closed_form(&pot, BaseSpec::ZerosForever, &Point::zeros(), &x, 1e-12).unwrap();
            assert!((w.value - 0.3 * 0.5f64.powi(k as i32 + 1) / 0.5).abs() < 1e-15);
        }
        let x = p("0^2 1 0^inf");
        let cf = kernel_closed_form(&pot, BaseSpec::ZerosForever, &Point::zeros(), &x, 1e-12).unwrap();
        let se = kernel_series(&pot, &Point::zeros(), &Point::zeros(), &x, 1e-12, DEFAULT_MAX_TERMS);
        assert!((cf.value - se.value).abs() < 1e-10);
    }

    #[test]
    fn constant_potential_kernel_vanishes() {
        let pot = WaltersPotential::constant(1.7);
        for y in class_representatives(4) {
            for x in class_representatives(4) {
                let w = kernel_closed_form(&pot, BaseSpec::ZerosForever, &y, &x, 1e-12).unwrap();
                assert_eq!(w.value, 0.0);
            }
        }
    }

    #[test]
    fn markov_series_is_two_terms() {
        let m = [[2.0 / 3.0, 1.0 / 3.0], [0.25, 0.75]];
        let pot = make_markov(m).unwrap();
        let base = p("0^2 1 0^inf");
        for y in class_representatives(3) {
            for x in class_representatives(3) {
                let w = kernel_series(&pot, &base, &y, &x, 1e-12, DEFAULT_MAX_TERMS);
                let lp = |u: usize, v: usize| m[u][v].ln();
                let y1 = y.coord(1).bit() as usize;
                let expect = lp(y1, x.coord(1).bit() as usize) - lp(y1, base.coord(1).bit() as usize);
                assert!((w.value - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn kernel_vanishes_at_its_base() {
        for pot in family() {
            for base in BaseSpec::all(3) {
                for y in class_representatives(4) {
                    let w = kernel_closed_form(&pot, base, &y, &base.point(), 1e-12).unwrap();
                    assert!(w.value.abs() < 1e-14, "{base} {y}");
                }
            }
        }
    }

    #[test]
    fn base_limit_geometric() {
        let pot = distinct();
        for (y, x) in [(p("1 0^inf"), p("1^3 0^inf")), (p("0^2 1^inf"), p("1 0^inf")), (Point::ones(), Point::ones())] {
            let diffs = kernel_base_limit_check(&pot, &y, &x, &[1, 2, 4, 8, 16], 1e-12).unwrap();
            for w in diffs.windows(2) {
                assert!(w[1] <= w[0] + 1e-15, "{diffs:?}");
            }
            assert!(diffs[4] < 1e-5);
        }
        let c = WaltersPotential::constant(0.2);
        assert!(kernel_base_limit_check(&c, &Point::ones(), &Point::zeros(), &[1, 2, 4], 1e-12)
            .unwrap()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn base_independence_of_convergence() {
        let regular = distinct();
        let irregular = WaltersPotential::new(
            unsummable(0.0),
            SequenceSpec::constant(0.0),
            SequenceSpec::constant(0.0),
            SequenceSpec::constant(0.0),
        );
        let x = p("0^2 1 0^inf");
        for base in [Point::zeros(), p("0 1 0^inf"), p("0^3 1 0^inf")] {
            assert!(kernel_series(&regular, &base, &Point::zeros(), &x, 1e-10, 10_000).converged);
            assert!(!kernel_series(&irregular, &base, &Point::zeros(), &x, 1e-10, 10_000).converged);
        }
        assert!(matches!(
            kernel_closed_form(&irregular, BaseSpec::ZerosForever, &Point::zeros(), &x, 1e-10),
            Err(Error::NotRegular(_))
        ));
    }

    #[test]
    fn base_parsing() {
        assert_eq!(BaseSpec::parse("0^inf", None).unwrap(), BaseSpec::ZerosForever);
        assert_eq!(BaseSpec::parse("0^a1", Some(3)).unwrap(), BaseSpec::ZerosThenOne(3));
        assert_eq!(BaseSpec::parse("1^a0", Some(2)).unwrap(), BaseSpec::OnesThenZero(2));
        assert_eq!(BaseSpec::parse("0^3 1", None).unwrap(), BaseSpec::ZerosThenOne(3));
        assert_eq!(BaseSpec::parse("1^2 0 1^inf", None).unwrap(), BaseSpec::OnesThenZero(2));
        assert!(BaseSpec::parse("0^a1", None).is_err());
        assert!(BaseSpec::parse("0^a1", Some(0)).is_err());
        for b in BaseSpec::all(4) {
            assert_eq!(BaseSpec::parse(&b.to_string(), None).unwrap(), b);
        }
    }

    #[test]
    fn past_prefix_matches_inverse_shift() {
        let y = p("0 1^2 0^inf");
        let x = p("1 0^inf");
        let b = crate::symbolic::BilateralPoint::new(y.clone(), x.clone());
        assert_eq!(past_prefix(&y, 3, &x), b.shift_inverse(3).right);
    }
}
