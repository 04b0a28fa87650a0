//! Normalized potentials (`g`-functions) and the obstructions to a
//! normalized dual.
//!
//! A Walters potential is normalized when `e^{A(0x)} + e^{A(1x)} = 1` for
//! every `x`. On sequences this reads
//!
//! ```text
//! d_n = log(1 − e^{a_{n+1}}),   b_n = log(1 − e^{c_{n+1}})
//! ```
//!
//! together with the limits, plus a uniform range condition: some
//! `r ∈ (0,1)` has `e^{a_{n+1}} ∈ (r,1)` and `e^{c_{n+1}} ∈ (0,1−r)`.

use serde::{Deserialize, Serialize};

use crate::dual::dual_sequences;
use crate::error::{Error, Result};
use crate::kernel::BaseSpec;
use crate::potential::{class_representatives, WaltersPotential};
use crate::ruelle::{solve, DEFAULT_MAX_ITERS, DEFAULT_SOLVER_TOL};
use crate::sequence::{CustomSequence, SequenceSpec};
use crate::symbolic::{Point, Symbol, Word};

pub const DEFAULT_NORMALIZATION_TOL: f64 = 1e-10;
/// Range constraints must hold with this much room.
pub const RANGE_MARGIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub label: String,
    pub value: f64,
}

fn res(label: impl Into<String>, value: f64) -> Residual {
    Residual { label: label.into(), value }
}

fn max_of(rs: &[Residual]) -> f64 {
    rs.iter().map(|r| r.value).fold(0.0, f64::max)
}

/// Certified extremes of `e^{a_{n+1}}` and `e^{c_{n+1}}` over all `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeCheck {
    pub inf_exp_a: f64,
    pub sup_exp_a: f64,
    pub sup_exp_c: f64,
    /// Supremum of admissible `r`; the condition holds iff it is positive.
    pub r_sup: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualNormalizationCheck {
    pub alpha: usize,
    /// `|e^{c_{n+2}} − [1 − (1 − e^{a_{α+1}+d_{α+1}−d_α})(e^{−c_{n+1}} − 1)]|`.
    pub recurrence_residuals: Vec<Residual>,
    pub recurrence_max: f64,
    /// The ratio that has to be constant in `n` when the dual is normalized.
    pub ratio_values: Vec<Residual>,
    pub ratio_spread: f64,
    /// `1 − e^{c_2}`, the value the constant ratio should take.
    pub ratio_target: f64,
    /// Normalization residual of the dual itself.
    pub dual_max_residual: f64,
    pub dual_is_normalized: bool,
    pub obstructed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationReport {
    pub is_normalized: bool,
    pub max_residual: f64,
    /// Residuals of the two sequence identities, per `n` and at the limits.
    pub equation_residuals: Vec<Residual>,
    /// `|e^{A(0x)} + e^{A(1x)} − 1|` over point classes.
    pub g_sum_residuals: Vec<Residual>,
    /// Whether the sequence and pointwise formulations give the same verdict.
    pub formulations_agree: bool,
    pub range: RangeCheck,
    pub dual: Option<DualNormalizationCheck>,
}

fn range_check(pot: &WaltersPotential, n_max: usize) -> RangeCheck {
    let extremes = |s: &SequenceSpec| {
        let b = s.sup_tail_bound(n_max);
        let mut lo = s.limit() - b;
        let mut hi = s.limit() + b;
        for n in 2..=n_max + 1 {
            lo = lo.min(s.value(n));
            hi = hi.max(s.value(n));
        }
        (lo, hi)
    };
    let (alo, ahi) = extremes(&pot.a);
    let (_, chi) = extremes(&pot.c);
    let (inf_exp_a, sup_exp_a, sup_exp_c) = (alo.exp(), ahi.exp(), chi.exp());
    let r_sup = inf_exp_a.min(1.0 - sup_exp_c);
    let holds = r_sup > RANGE_MARGIN && sup_exp_a < 1.0 - RANGE_MARGIN && sup_exp_c < 1.0 - RANGE_MARGIN;
    RangeCheck { inf_exp_a, sup_exp_a, sup_exp_c, r_sup, holds }
}

/// Checks the sequence identities for `n ≤ n_max` and at the limits, and the
/// pointwise `g`-sum over classes of index `≤ n_max`.
pub fn check_normalized(pot: &WaltersPotential, n_max: usize, tol: f64) -> NormalizationReport {
    let n_max = n_max.max(1);
    let (a, b, c, d) = (&pot.a, &pot.b, &pot.c, &pot.d);
    let mut eq = Vec::with_capacity(2 * n_max + 2);
    for n in 1..=n_max {
        eq.push(res(format!("d[{n}]"), (d.value(n).exp() + a.value(n + 1).exp() - 1.0).abs()));
        eq.push(res(format!("b[{n}]"), (b.value(n).exp() + c.value(n + 1).exp() - 1.0).abs()));
    }
    eq.push(res("d[inf]", (d.limit().exp() + a.limit().exp() - 1.0).abs()));
    eq.push(res("b[inf]", (b.limit().exp() + c.limit().exp() - 1.0).abs()));

    let g_sum: Vec<Residual> = class_representatives(n_max)
        .into_iter()
        .map(|x| {
            let s = pot.eval(&x.prepend(Symbol::Zero)).exp() + pot.eval(&x.prepend(Symbol::One)).exp();
            res(x.to_string(), (s - 1.0).abs())
        })
        .collect();

    let range = range_check(pot, n_max);
    let eq_max = max_of(&eq);
    let g_max = max_of(&g_sum);
    let is_normalized = eq_max <= tol && range.holds;
    NormalizationReport {
        is_normalized,
        max_residual: eq_max.max(g_max),
        formulations_agree: (eq_max <= tol) == (g_max <= tol),
        equation_residuals: eq,
        g_sum_residuals: g_sum,
        range,
        dual: None,
    }
}

/// Necessary conditions for the dual at base `0^α 1` to be normalized.
///
/// Requires `A` to be normalized. The verdict is `obstructed` when either
/// the recurrence or the constancy of the ratio fails by more than `tol`.
pub fn dual_normalizable_check(
    pot: &WaltersPotential,
    alpha: usize,
    n_max: usize,
    tol: f64,
) -> Result<NormalizationReport> {
    if alpha == 0 {
        return Err(Error::InvalidParameter("alpha must be at least 1".into()));
    }
    let mut report = check_normalized(pot, n_max, tol);
    if !report.is_normalized {
        return Err(Error::NotNormalized(format!("max residual {:e}", report.max_residual)));
    }
    let n_max = n_max.max(1);
    let (a, c, d) = (&pot.a, &pot.c, &pot.d);
    let k = (a.value(alpha + 1) + d.value(alpha + 1) - d.value(alpha)).exp();
    let recurrence: Vec<Residual> = (1..=n_max)
        .map(|n| {
            let rhs = 1.0 - (1.0 - k) * ((-c.value(n + 1)).exp() - 1.0);
            res(format!("n={n}"), (c.value(n + 2).exp() - rhs).abs())
        })
        .collect();

    let mut partial = 0.0;
    let mut ratios = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n >= 2 {
            partial += a.value(n) - a.value(alpha + n);
        }
        let num = 1.0 - (a.value(alpha + n + 1) + a.value(alpha + n + 2)).exp();
        let den = ((-a.value(alpha + 1)).exp() - 1.0) * (1.0 - a.value(n + 1).exp()) * partial.exp();
        ratios.push(res(format!("n={n}"), num / den));
    }
    let hi = ratios.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);

    let dual = dual_sequences(pot, BaseSpec::ZerosThenOne(alpha), tol)?;
    let dual_report = check_normalized(&dual.dual, n_max, tol);
    let recurrence_max = max_of(&recurrence);
    let ratio_spread = hi - lo;
    report.dual = Some(DualNormalizationCheck {
        alpha,
        recurrence_residuals: recurrence,
        recurrence_max,
        ratio_values: ratios,
        ratio_spread,
        ratio_target: 1.0 - c.value(2).exp(),
        dual_max_residual: dual_report.max_residual,
        dual_is_normalized: dual_report.is_normalized,
        obstructed: recurrence_max > tol || ratio_spread > tol,
    });
    Ok(report)
}

/// `J = e^A` of a normalized potential.
#[derive(Clone, Debug)]
pub struct Jacobian {
    pot: WaltersPotential,
}

impl Jacobian {
    pub fn eval(&self, x: &Point) -> f64 {
        self.pot.eval(x).exp()
    }
}

pub fn jacobian(pot: &WaltersPotential) -> Result<Jacobian> {
    let r = check_normalized(pot, 32, DEFAULT_NORMALIZATION_TOL);
    if !r.is_normalized {
        return Err(Error::NotNormalized(format!("max residual {:e}", r.max_residual)));
    }
    Ok(Jacobian { pot: pot.clone() })
}

/// Compares the Jacobians `e^{Ā}` of `A` and of its dual at base `base`,
/// both normalized numerically (`Ā = A + log φ − log φ∘σ − log λ`) at
/// `depth`. Evaluated on representatives `w 0^∞` with `|w| ≤ word_depth`.
pub fn jacobian_duality_residual(
    pot: &WaltersPotential,
    base: BaseSpec,
    depth: usize,
    word_depth: usize,
) -> Result<f64> {
    if word_depth < 1 || word_depth > depth {
        return Err(Error::InvalidParameter(format!("word depth must be in 1..={depth}, got {word_depth}")));
    }
    let dual = dual_sequences(pot, base, 1e-12)?;
    let jac = |p: &WaltersPotential| -> Result<Vec<f64>> {
        let sol = solve(p, depth, DEFAULT_SOLVER_TOL, DEFAULT_MAX_ITERS)?;
        let mask = (1usize << (depth - 1)) - 1;
        let phi = &sol.phi.values;
        Ok(sol
            .discretization
            .function
            .values
            .iter()
            .enumerate()
            .map(|(w, a)| (a + phi[w >> 1].ln() - phi[w & mask].ln() - sol.lambda.ln()).exp())
            .collect())
    };
    let (j, js) = (jac(pot)?, jac(&dual.dual)?);
    let mut worst: f64 = 0.0;
    for len in 1..=word_depth {
        for i in 0..1usize << len {
            let w = Word::from_index(i, len).index() << (depth - len);
            worst = worst.max((j[w] - js[w]).abs());
        }
    }
    Ok(worst)
}

fn log_one_minus_exp(x: f64) -> f64 {
    (-x.exp()).ln_1p()
}

/// The sequence `n ↦ log(1 − e^{s_{n+1}})` with derived tail bounds.
fn complement(s: &SequenceSpec, name: &str) -> Result<SequenceSpec> {
    if !(s.limit() < 0.0) {
        return Err(Error::InvalidParameter(format!("{name}: limit must be negative, got {}", s.limit())));
    }
    if let SequenceSpec::Constant { value } = s {
        return Ok(SequenceSpec::constant(log_one_minus_exp(*value)));
    }
    let lim = s.limit();
    // Lipschitz constant of log(1 − e^x) on [.., lim + B]
    let lip = {
        let s = s.clone();
        move |n: usize| {
            let top = lim + s.sup_tail_bound(n);
            if top < 0.0 {
                top.exp() / (1.0 - top.exp())
            } else {
                f64::INFINITY
            }
        }
    };
    let (e, b, l2) = (s.clone(), s.clone(), lip.clone());
    let mut seq = CustomSequence::new(
        name,
        move |n| log_one_minus_exp(e.value(n + 1)),
        log_one_minus_exp(lim),
        move |n| lip(n) * b.sup_tail_bound(n) + 4.0 * f64::EPSILON,
    );
    if s.is_abs_summable() {
        let t = s.clone();
        seq = seq.with_sum_bound(move |n| l2(n) * t.abs_sum_tail(n).unwrap_or(f64::INFINITY));
    }
    Ok(SequenceSpec::Custom(seq))
}

/// The normalized potential determined by `(a_n)` and `(c_n)`.
pub fn g_function(a: SequenceSpec, c: SequenceSpec) -> Result<WaltersPotential> {
    let d = complement(&a, "d = log(1 - e^a)")?;
    let b = complement(&c, "b = log(1 - e^c)")?;
    Ok(WaltersPotential::new(a, b, c, d))
}

/// `A(x) = log P[x_2][x_1]`, normalized for every row-stochastic `P`.
pub fn markov_g_function(p: [[f64; 2]; 2]) -> Result<WaltersPotential> {
    let m = crate::potential::make_markov(p)?;
    Ok(WaltersPotential::new(m.a, m.d, m.c, m.b))
}
