//! Symmetry of a potential relative to a kernel base, and twist conditions.

use serde::{Deserialize, Serialize};

use crate::dual::dual_series;
use crate::error::{Error, Result};
use crate::kernel::{BaseSpec, KernelEvaluator};
use crate::potential::{class_representatives, WaltersPotential};
use crate::symbolic::{BilateralPoint, Point, Symbol};

pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub id: String,
    pub residual: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub base: BaseSpec,
    pub conditions: Vec<Condition>,
    pub symmetric: bool,
    pub max_residual: f64,
}

/// Evaluates the sufficient-and-necessary system for `A* ∘ θ = A` at the
/// given base, for `n ≤ n_max`, plus the limit equations.
///
/// * base `0^∞`: `b_n = a`, `a_{n+1} = a`, `b = a`;
/// * base `0^α 1`:
///   - E1 `a_{α+n+1} − a_{n+1} = d_{α+n} − d_{α+n+1}`
///   - E2 `b_n = a_{α+1} + d_{α+1} − d_α` (and the same for `b`)
///   - E3 `d_{α+n} = d_α + b_1 − a_{α+1} + Σ_{j=2}^n (a_j − a_{α+j})`
///   - E4 `d = d_α + b − a_{α+1} + Σ_{j≥2} (a_j − a_{α+j})`
///
/// The `1` family uses the same systems with `a ↔ c`, `b ↔ d`.
pub fn symmetry_conditions(pot: &WaltersPotential, base: BaseSpec, n_max: usize, tol: f64) -> Result<SymmetryReport> {
    base.validate()?;
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    pot.require_regular(tol.min(1e-12))?;
    let ones = base.is_ones_family();
    let p = if ones { pot.swapped() } else { pot.clone() };
    // sequence names as printed for this family
    let (na, nb, nd) = if ones { ("c", "d", "b") } else { ("a", "b", "d") };
    let (a, b, d) = (&p.a, &p.b, &p.d);
    let (la, lb, ld) = (a.limit(), b.limit(), d.limit());
    let mut conds = Vec::new();
    let mut push = |id: String, residual: f64, slack: f64| {
        conds.push(Condition { id, residual, satisfied: residual <= tol + slack });
    };
    match base.alpha() {
        None => {
            for n in 1..=n_max {
                push(format!("{nb}_{n} = {na}"), (b.value(n) - la).abs(), 0.0);
                push(format!("{na}_{} = {na}", n + 1), (a.value(n + 1) - la).abs(), 0.0);
            }
            push(format!("{nb} = {na}"), (lb - la).abs(), 0.0);
        }
        Some(al) => {
            let target_b = a.value(al + 1) + d.value(al + 1) - d.value(al);
            let mut running = d.value(al) + b.value(1) - a.value(al + 1);
            for n in 1..=n_max {
                let e1 = a.value(al + n + 1) - a.value(n + 1) - (d.value(al + n) - d.value(al + n + 1));
                push(format!("E1[n={n}]"), e1.abs(), 0.0);
                push(format!("E2[n={n}]"), (b.value(n) - target_b).abs(), 0.0);
                if n >= 2 {
                    running += a.value(n) - a.value(al + n);
                }
                push(format!("E3[n={n}]"), (d.value(al + n) - running).abs(), 0.0);
            }
            push(format!("E2[{nb}]"), (lb - target_b).abs(), 0.0);
            let s1 = a.tail_sum(1, tol.min(1e-12))?;
            let s2 = a.tail_sum(al + 1, tol.min(1e-12))?;
            let e4 = ld - (d.value(al) + lb - a.value(al + 1) + s1.value - s2.value);
            push(format!("E4[{nd}]"), e4.abs(), s1.error_bound + s2.error_bound);
        }
    }
    let max_residual = conds.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(SymmetryReport { base, symmetric: conds.iter().all(|c| c.satisfied), conditions: conds, max_residual })
}

/// `max |A*(x) − A(x)|` over the right-hand sides of `samples`, with `A*`
/// summed from its defining series.
pub fn symmetry_numeric(pot: &WaltersPotential, base: BaseSpec, samples: &[BilateralPoint], tol: f64) -> Result<f64> {
    base.validate()?;
    pot.require_regular(tol.min(1e-12))?;
    let mut worst: f64 = 0.0;
    for s in samples {
        let x = &s.right;
        let dual = dual_series(pot, base, x, tol.min(1e-12))?;
        worst = worst.max((dual.value - pot.eval(x)).abs());
    }
    Ok(worst)
}

/// Bilateral samples whose right sides cover every class with index ≤ `depth`.
pub fn default_symmetry_samples(depth: usize) -> Vec<BilateralPoint> {
    class_representatives(depth).into_iter().map(|x| BilateralPoint::new(Point::zeros(), x)).collect()
}

/// Flags for the sufficient conditions of the relaxed twist theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistHypotheses {
    pub a_nonincreasing: bool,
    pub c_nonincreasing: bool,
    pub delta_nonincreasing: bool,
    pub gamma_nonincreasing: bool,
    pub d_subadditive: bool,
    pub b_subadditive: bool,
}

impl TwistHypotheses {
    pub fn all(&self) -> bool {
        self.a_nonincreasing
            && self.c_nonincreasing
            && self.delta_nonincreasing
            && self.gamma_nonincreasing
            && self.d_subadditive
            && self.b_subadditive
    }
}

/// A violating quadruple `y < y'`, `x < x'` with `lhs > rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistViolation {
    pub y: String,
    pub y_prime: String,
    pub x: String,
    pub x_prime: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistReport {
    pub hypotheses: TwistHypotheses,
    /// `None` when only the hypotheses were evaluated.
    pub relaxed_twist_exhaustive_pass: Option<bool>,
    pub quadruples_checked: u64,
    pub violations: u64,
    pub counterexample: Option<TwistViolation>,
}

fn le(x: f64, y: f64) -> bool {
    x <= y + 1e-12 * (1.0 + x.abs().max(y.abs()))
}

/// Checks monotonicity of `a`, `c`, of `Δ^m_i = d_{m+i} − d_i` and
/// `Γ^m_i = b_{m+i} − b_i` in `i`, and sub-additivity of `d` and `b`.
/// "Decreasing" is non-strict.
pub fn twist_hypotheses(pot: &WaltersPotential, m_max: usize, n_max: usize) -> TwistReport {
    let nonincreasing = |f: &dyn Fn(usize) -> f64, from: usize, to: usize| (from..to).all(|i| le(f(i + 1), f(i)));
    let diffs_nonincreasing = |s: &crate::sequence::SequenceSpec| {
        (1..=m_max).all(|m| nonincreasing(&|i| s.value(m + i) - s.value(i), 1, n_max))
    };
    let subadditive = |s: &crate::sequence::SequenceSpec| {
        (1..=n_max).all(|m| (1..=n_max).all(|n| le(s.value(m + n), s.value(m) + s.value(n))))
    };
    let hypotheses = TwistHypotheses {
        a_nonincreasing: nonincreasing(&|n| pot.a.value(n), 2, n_max + 1),
        c_nonincreasing: nonincreasing(&|n| pot.c.value(n), 2, n_max + 1),
        delta_nonincreasing: diffs_nonincreasing(&pot.d),
        gamma_nonincreasing: diffs_nonincreasing(&pot.b),
        d_subadditive: subadditive(&pot.d),
        b_subadditive: subadditive(&pot.b),
    };
    TwistReport {
        hypotheses,
        relaxed_twist_exhaustive_pass: None,
        quadruples_checked: 0,
        violations: 0,
        counterexample: None,
    }
}

/// Exhaustive relaxed-twist check `W(y|x) + W(y'|x') ≤ W(y|x') + W(y'|x)`
/// for `y < y'`, `x < x'` over class representatives with index ≤ `depth`.
pub fn relaxed_twist_check(pot: &WaltersPotential, base: BaseSpec, depth: usize) -> Result<TwistReport> {
    if !(1..=8).contains(&depth) {
        return Err(Error::InvalidParameter(format!("twist depth must be in 1..=8, got {depth}")));
    }
    let ev = KernelEvaluator::new(pot, base, 1e-12)?;
    let pts = class_representatives(depth);
    let n = pts.len();
    let mut w = vec![0.0; n * n];
    for (i, y) in pts.iter().enumerate() {
        for (j, x) in pts.iter().enumerate() {
            w[i * n + j] = ev.eval(y, x)?.value;
        }
    }
    let mut report = twist_hypotheses(pot, 2 * depth + 2, 2 * depth + 2);
    let mut checked = 0u64;
    let mut violations = 0u64;
    for i in 0..n {
        for i2 in i + 1..n {
            for j in 0..n {
                for j2 in j + 1..n {
                    checked += 1;
                    let lhs = w[i * n + j] + w[i2 * n + j2];
                    let rhs = w[i * n + j2] + w[i2 * n + j];
                    if !le(lhs, rhs) {
                        violations += 1;
                        if report.counterexample.is_none() {
                            report.counterexample = Some(TwistViolation {
                                y: pts[i].to_string(),
                                y_prime: pts[i2].to_string(),
                                x: pts[j].to_string(),
                                x_prime: pts[j2].to_string(),
                                lhs,
                                rhs,
                            });
                        }
                    }
                }
            }
        }
    }
    report.quadruples_checked = checked;
    report.violations = violations;
    report.relaxed_twist_exhaustive_pass = Some(violations == 0);
    Ok(report)
}

/// The two sides of the strict-twist configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrictTwist {
    pub y: String,
    pub y_prime: String,
    pub x: String,
    pub x_prime: String,
    pub lhs: f64,
    pub rhs: f64,
}

/// Evaluates `W(y|x) + W(y'|x')` and `W(y|x') + W(y'|x)` for
/// `y ∈ [1^s 0]`, `y' ∈ [1^{s+p} 0]`, `x ∈ [0^{k+q} 1]`, `x' ∈ [0^k 1]`
/// (symbols exchanged for `1`-family bases). Both sides equal
/// `(d_{k+q} − d_α) + (d_k − d_α)`, so a strict inequality is impossible.
pub fn strict_twist_configuration(
    pot: &WaltersPotential,
    base: BaseSpec,
    s: usize,
    p: usize,
    k: usize,
    q: usize,
) -> Result<StrictTwist> {
    if s == 0 || p == 0 || k == 0 || q == 0 {
        return Err(Error::InvalidParameter("s, p, k, q must be positive".into()));
    }
    let ev = KernelEvaluator::new(pot, base, 1e-12)?;
    let (one, zero) = if base.is_ones_family() { (Symbol::Zero, Symbol::One) } else { (Symbol::One, Symbol::Zero) };
    let y = Point::run_then(one, s, zero);
    let y2 = Point::run_then(one, s + p, zero);
    let x = Point::run_then(zero, k + q, zero);
    let x2 = Point::run_then(zero, k, zero);
    let lhs = ev.eval(&y, &x)?.value + ev.eval(&y2, &x2)?.value;
    let rhs = ev.eval(&y, &x2)?.value + ev.eval(&y2, &x)?.value;
    Ok(StrictTwist { y: y.to_string(), y_prime: y2.to_string(), x: x.to_string(), x_prime: x2.to_string(), lhs, rhs })
}
