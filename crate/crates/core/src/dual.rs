//! Dual potentials.
//!
//! For a kernel based at `x'` the dual potential is
//!
//! ```text
//! A*(y) = A(y_1 x') + Σ_{m≥2} [ A(y_m … y_1 x') − A(y_m … y_2 x') ]
//! ```
//!
//! and is again a Walters potential. [`dual_sequences`] returns its four
//! sequences in closed form; [`dual_series`] sums the series as an oracle.
//! Base-`0^∞` tabulation:
//!
//! | class of `y`  | dual value                                 |
//! |---------------|--------------------------------------------|
//! | `0^{n+1} 1`   | `a`                                        |
//! | `0 1^n 0`     | `a`                                        |
//! | `1^n 0`       | `c_n + b_n − b_{n−1}`                      |
//! | `1 0^n 1`     | `(b_1 − a) + Σ_{j=2}^n (a_j − a) + d_n`    |
//!
//! For base `0^α 1`:
//!
//! | class of `y`  | dual value                                                   |
//! |---------------|--------------------------------------------------------------|
//! | `0^m 1`       | `a_{α+m} + d_{α+m} − d_{α+m−1}`                              |
//! | `0 1^n 0`     | `a_{α+1} + d_{α+1} − d_α`                                    |
//! | `1^n 0`       | `c_n + b_n − b_{n−1}`                                        |
//! | `1 0^n 1`     | `d_α + b_1 − a_{α+1} + Σ_{j=2}^n (a_j − a_{α+j}) + d_n − d_{α+n}` |
//!
//! The `1`-family bases follow by exchanging symbols.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{BaseSpec, KernelEvaluator, KernelValue, DEFAULT_MAX_TERMS};
use crate::potential::WaltersPotential;
use crate::sequence::{rounding, CustomSequence, SequenceSpec, TailSum};
use crate::symbolic::{BilateralPoint, Point, Symbol};

/// A named tail sum used while building a dual table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedTailSum {
    pub name: String,
    pub sum: TailSum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualResult {
    /// The dual potential, evaluated directly at `y`.
    pub dual: WaltersPotential,
    pub base: BaseSpec,
    pub tail_sum_values: Vec<NamedTailSum>,
}

impl DualResult {
    pub fn eval(&self, y: &Point) -> f64 {
        self.dual.eval(y)
    }
}

fn custom(
    name: &str,
    eval: impl Fn(usize) -> f64 + Send + Sync + 'static,
    limit: f64,
    sup: impl Fn(usize) -> f64 + Send + Sync + 'static,
    sum: Option<Box<dyn Fn(usize) -> f64 + Send + Sync>>,
) -> SequenceSpec {
    let c = CustomSequence::new(name, eval, limit, sup);
    SequenceSpec::Custom(match sum {
        Some(s) => c.with_sum_bound(s),
        None => c,
    })
}

/// `c_n + b_n − b_{n−1}` with its bounds; `c` itself when `b` is constant.
fn dual_c(b: &SequenceSpec, c: &SequenceSpec) -> SequenceSpec {
    if matches!(b, SequenceSpec::Constant { .. }) {
        return c.clone();
    }
    let (b1, c1) = (b.clone(), c.clone());
    let (b2, c2) = (b.clone(), c.clone());
    let sum = match (b.is_abs_summable(), c.is_abs_summable()) {
        (true, true) => {
            let (b3, c3) = (b.clone(), c.clone());
            Some(Box::new(move |n: usize| {
                c3.abs_sum_tail(n).unwrap_or(f64::INFINITY)
                    + b3.abs_sum_tail(n).unwrap_or(f64::INFINITY)
                    + b3.abs_sum_tail(n.saturating_sub(1)).unwrap_or(f64::INFINITY)
            }) as Box<dyn Fn(usize) -> f64 + Send + Sync>)
        }
        _ => None,
    };
    custom(
        "dual-c",
        move |n| if n >= 2 { c1.value(n) + b1.value(n) - b1.value(n - 1) } else { c1.value(n) },
        c.limit(),
        move |n| c2.sup_tail_bound(n) + b2.sup_tail_bound(n) + b2.sup_tail_bound(n.saturating_sub(1)),
        sum,
    )
}

fn dual_zero_family(pot: &WaltersPotential, alpha: Option<usize>, tol: f64) -> Result<DualResult> {
    let (a, b, c, d) = (&pot.a, &pot.b, &pot.c, &pot.d);
    let la = a.limit();
    let sa1 = a.tail_sum(1, tol)?;
    let mut sums = vec![NamedTailSum { name: "sum_{n>=2}(a_n - a)".into(), sum: sa1 }];
    let sa_abs = {
        let a = a.clone();
        move |n: usize| a.abs_sum_tail(n).unwrap_or(f64::INFINITY)
    };
    let c_star = dual_c(b, c);
    // evaluation error of the running sums in the d* evaluators
    let round = 16.0 * f64::EPSILON * (1.0 + d.limit().abs() + b.value(1).abs() + 2.0 * sa_abs(0));
    let dual = match alpha {
        None => {
            let d_lim = d.limit() + b.value(1) - la + sa1.value;
            let (a1, b1, d1) = (a.clone(), b.clone(), d.clone());
            let d2 = d.clone();
            let err = sa1.error_bound;
            let d_star = custom(
                "dual-d",
                move |n| {
                    let mut s = b1.value(1) - la;
                    for j in 2..=n {
                        s += a1.value(j) - la;
                    }
                    s + d1.value(n)
                },
                d_lim,
                move |n| sa_abs(n) + d2.sup_tail_bound(n) + err + round,
                None,
            );
            WaltersPotential::new(SequenceSpec::constant(la), SequenceSpec::constant(la), c_star, d_star)
        }
        Some(al) => {
            let sa_al = a.tail_sum(al + 1, tol)?;
            sums.push(NamedTailSum { name: format!("sum_{{n>=2}}(a_{{{al}+n}} - a)"), sum: sa_al });
            let (a1, d1) = (a.clone(), d.clone());
            let (a2, d2) = (a.clone(), d.clone());
            let a_sum = match d.is_abs_summable() {
                true => {
                    let (a3, d3) = (a.clone(), d.clone());
                    Some(Box::new(move |n: usize| {
                        a3.abs_sum_tail(al + n).unwrap_or(f64::INFINITY)
                            + d3.abs_sum_tail(al + n).unwrap_or(f64::INFINITY)
                            + d3.abs_sum_tail(al + n - 1).unwrap_or(f64::INFINITY)
                    }) as Box<dyn Fn(usize) -> f64 + Send + Sync>)
                }
                false => None,
            };
            let a_star = custom(
                "dual-a",
                move |m| a1.value(al + m) + d1.value(al + m) - d1.value(al + m - 1),
                la,
                move |n| a2.sup_tail_bound(al + n) + d2.sup_tail_bound(al + n) + d2.sup_tail_bound(al + n - 1),
                a_sum,
            );
            let b_star = SequenceSpec::constant(a.value(al + 1) + d.value(al + 1) - d.value(al));
            let head = d.value(al) + b.value(1) - a.value(al + 1);
            let d_lim = head + sa1.value - sa_al.value;
            let err = sa1.error_bound + sa_al.error_bound;
            let (a1, d1) = (a.clone(), d.clone());
            let d2 = d.clone();
            let d_star = custom(
                "dual-d",
                move |n| {
                    let mut s = head;
                    for j in 2..=n {
                        s += a1.value(j) - a1.value(al + j);
                    }
                    s + d1.value(n) - d1.value(al + n)
                },
                d_lim,
                move |n| sa_abs(n) + sa_abs(al + n) + d2.sup_tail_bound(n) + d2.sup_tail_bound(al + n) + err + round,
                None,
            );
            WaltersPotential::new(a_star, b_star, c_star, d_star)
        }
    };
    Ok(DualResult { dual, base: alpha.map_or(BaseSpec::ZerosForever, BaseSpec::ZerosThenOne), tail_sum_values: sums })
}

/// The dual potential as four sequences.
pub fn dual_sequences(pot: &WaltersPotential, base: BaseSpec, tol: f64) -> Result<DualResult> {
    base.validate()?;
    pot.require_regular(tol)?;
    if base.is_ones_family() {
        let r = dual_zero_family(&pot.swapped(), base.flip().alpha(), tol)?;
        Ok(DualResult { dual: r.dual.swapped(), base, tail_sum_values: r.tail_sum_values })
    } else {
        dual_zero_family(pot, base.alpha(), tol)
    }
}

/// `A*(y)` by summing its defining series with base point `base.point()`.
pub fn dual_series(pot: &WaltersPotential, base: BaseSpec, y: &Point, tol: f64) -> Result<KernelValue> {
    let xb = base.point();
    let mut r1 = xb.runs();
    r1.prepend(y.coord(1), 1);
    let mut r2 = xb.runs();
    let mut value = pot.eval_runs(&r1);
    let mut abs = value.abs();
    let p = y.prefix().len();
    let t = y.tail();
    let seq = if t == Symbol::Zero { &pot.a } else { &pot.c };
    let lead = match xb.runs().first() {
        (s, None) if s == t => None,
        (s, Some(l)) if s == t => Some(l),
        _ => Some(0),
    };
    // bound on the remaining error after summing terms m = 2..=big_m
    let bound = |big_m: usize| -> Option<f64> {
        match p {
            0 => Some(match lead {
                None => 0.0,
                Some(r) => seq.sup_tail_bound(big_m + r - 1),
            }),
            1 => {
                let own = seq.abs_sum_tail(big_m - 1)?;
                let other = match lead {
                    None => 0.0,
                    Some(r) => seq.abs_sum_tail(big_m - 1 + r)?,
                };
                Some(own + other)
            }
            _ => Some(0.0),
        }
    };
    let mut m = 1;
    let mut checkpoint = (p + 1).max(2);
    loop {
        while m < checkpoint {
            m += 1;
            let s = y.coord(m);
            r1.prepend(s, 1);
            r2.prepend(s, 1);
            let term = pot.eval_runs(&r1) - pot.eval_runs(&r2);
            value += term;
            abs += term.abs();
        }
        if let Some(b) = bound(m) {
            if b <= tol / 2.0 {
                return Ok(KernelValue { value, error_bound: b + rounding(m, abs), converged: true });
            }
        }
        if m >= DEFAULT_MAX_TERMS {
            return Err(Error::NonSummable {
                tol,
                reason: format!("dual series at y = {y} not certified after {m} terms"),
            });
        }
        checkpoint = (checkpoint * 2).min(DEFAULT_MAX_TERMS);
    }
}

/// Residuals of `A(y_1 x) + W(σy | y_1 x) − W(y|x) − A*(y)` at each point.
pub fn involution_residuals(
    pot: &WaltersPotential,
    base: BaseSpec,
    points: &[BilateralPoint],
    tol: f64,
) -> Result<Vec<f64>> {
    let ev = KernelEvaluator::new(pot, base, tol)?;
    let dual = dual_sequences(pot, base, tol)?;
    points
        .iter()
        .map(|b| {
            let y = &b.left;
            let x = &b.right;
            let moved = b.shift_inverse(1);
            let lhs = pot.eval(&moved.right) + ev.eval(&moved.left, &moved.right)?.value - ev.eval(y, x)?.value;
            Ok((lhs - dual.eval(y)).abs())
        })
        .collect()
}

/// Maximum involution-identity residual over `points`.
pub fn involution_identity_residual(
    pot: &WaltersPotential,
    base: BaseSpec,
    points: &[BilateralPoint],
    tol: f64,
) -> Result<f64> {
    Ok(involution_residuals(pot, base, points, tol)?.into_iter().fold(0.0, f64::max))
}

/// `max_x |A(τ_y x) + W(σ̂^{-1}(y|x)) − W(y|x) − A*(y)|` over `xs`.
pub fn x_independence_residual(
    pot: &WaltersPotential,
    base: BaseSpec,
    y: &Point,
    xs: &[Point],
    tol: f64,
) -> Result<f64> {
    let pts: Vec<BilateralPoint> = xs.iter().map(|x| BilateralPoint::new(y.clone(), x.clone())).collect();
    involution_identity_residual(pot, base, &pts, tol)
}
