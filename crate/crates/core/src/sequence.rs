//! Defining sequences with exact limits and certified tail sums.
//!
//! Every sequence is indexed from `n = 1`. A [`SequenceSpec`] knows its limit
//! `s` and can bound both `sup_{n>N} |s_n - s|` and, when it exists,
//! `sum_{n>N} |s_n - s|`. Those two bounds drive every error estimate in the
//! crate.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on the number of terms summed by [`SequenceSpec::tail_sum`].
pub const TAIL_SUM_MAX_TERMS: usize = 10_000_000;

type SeqFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// A sequence given by a closure together with its limit and tail bounds.
///
/// `sup_bound(N)` must dominate `sup_{n>N} |s_n - s|`; `sum_bound(N)`, when
/// present, must dominate `sum_{n>N} |s_n - s|`. Without a sum bound the
/// sequence is treated as not summable.
#[derive(Clone)]
pub struct CustomSequence {
    pub name: String,
    eval: SeqFn,
    limit: f64,
    sup_bound: SeqFn,
    sum_bound: Option<SeqFn>,
}

impl CustomSequence {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(usize) -> f64 + Send + Sync + 'static,
        limit: f64,
        sup_bound: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomSequence {
            name: name.into(),
            eval: Arc::new(eval),
            limit,
            sup_bound: Arc::new(sup_bound),
            sum_bound: None,
        }
    }

    pub fn with_sum_bound(mut self, sum_bound: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        self.sum_bound = Some(Arc::new(sum_bound));
        self
    }
}

impl fmt::Debug for CustomSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSequence")
            .field("name", &self.name)
            .field("limit", &self.limit)
            .field("summable", &self.sum_bound.is_some())
            .finish()
    }
}

/// Closed-form description of one defining sequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSpec {
    /// `s_n = value`.
    Constant { value: f64 },
    /// `s_n = leading[n-1]` for `n <= leading.len()`, then `tail`.
    FinitePlusConstant { leading: Vec<f64>, tail: f64 },
    /// `s_n = limit + amplitude * ratio^n`, `|ratio| < 1`.
    Geometric { limit: f64, amplitude: f64, ratio: f64 },
    /// `s_n = -gamma * ln((n+1)/n)`, limit 0.
    LogRatio { gamma: f64 },
    #[serde(skip)]
    Custom(CustomSequence),
}

/// Value of `sum_{n>=1} (s_{n+offset} - s)` with a certified error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSum {
    pub value: f64,
    pub error_bound: f64,
}

impl SequenceSpec {
    pub fn constant(value: f64) -> Self {
        SequenceSpec::Constant { value }
    }

    pub fn geometric(limit: f64, amplitude: f64, ratio: f64) -> Self {
        SequenceSpec::Geometric { limit, amplitude, ratio }
    }

    pub fn finite_plus_constant(leading: Vec<f64>, tail: f64) -> Self {
        SequenceSpec::FinitePlusConstant { leading, tail }
    }

    pub fn log_ratio(gamma: f64) -> Self {
        SequenceSpec::LogRatio { gamma }
    }

    /// `s_n`, for `n >= 1`.
    pub fn value(&self, n: usize) -> f64 {
        debug_assert!(n >= 1, "sequences are indexed from 1");
        match self {
            SequenceSpec::Constant { value } => *value,
            SequenceSpec::FinitePlusConstant { leading, tail } => {
                leading.get(n.wrapping_sub(1)).copied().unwrap_or(*tail)
            }
            SequenceSpec::Geometric { limit, amplitude, ratio } => limit + amplitude * powi(*ratio, n),
            SequenceSpec::LogRatio { gamma } => -gamma * (1.0 / n as f64).ln_1p(),
            SequenceSpec::Custom(c) => (c.eval)(n),
        }
    }

    pub fn limit(&self) -> f64 {
        match self {
            SequenceSpec::Constant { value } => *value,
            SequenceSpec::FinitePlusConstant { tail, .. } => *tail,
            SequenceSpec::Geometric { limit, .. } => *limit,
            SequenceSpec::LogRatio { .. } => 0.0,
            SequenceSpec::Custom(c) => c.limit,
        }
    }

    /// A bound on `sup_{n>N} |s_n - s|`.
    pub fn sup_tail_bound(&self, big_n: usize) -> f64 {
        match self {
            SequenceSpec::Constant { .. } => 0.0,
            SequenceSpec::FinitePlusConstant { leading, tail } => {
                leading.iter().skip(big_n).map(|v| (v - tail).abs()).fold(0.0, f64::max)
            }
            SequenceSpec::Geometric { amplitude, ratio, .. } => amplitude.abs() * powi(ratio.abs(), big_n + 1),
            SequenceSpec::LogRatio { gamma } => gamma.abs() * (1.0 / (big_n + 1) as f64).ln_1p(),
            SequenceSpec::Custom(c) => (c.sup_bound)(big_n),
        }
    }

    /// A bound on `sum_{n>N} |s_n - s|`, or `None` when the declared data
    /// cannot certify absolute summability.
    pub fn abs_sum_tail(&self, big_n: usize) -> Option<f64> {
        match self {
            SequenceSpec::Constant { .. } => Some(0.0),
            SequenceSpec::FinitePlusConstant { leading, tail } => {
                Some(leading.iter().skip(big_n).map(|v| (v - tail).abs()).sum())
            }
            SequenceSpec::Geometric { amplitude, ratio, .. } => {
                Some(amplitude.abs() * powi(ratio.abs(), big_n + 1) / (1.0 - ratio.abs()))
            }
            SequenceSpec::LogRatio { gamma } => (*gamma == 0.0).then_some(0.0),
            SequenceSpec::Custom(c) => c.sum_bound.as_ref().map(|s| s(big_n)),
        }
    }

    pub fn is_abs_summable(&self) -> bool {
        self.abs_sum_tail(0).is_some_and(f64::is_finite)
    }

    /// `sum_{n>=1} (s_{n+offset} - s)`.
    ///
    /// Constant, finite-plus-constant and geometric sequences are summed
    /// exactly (error bound 0 up to rounding). Custom sequences are summed
    /// term by term until the declared sum bound drops below `tol / 2`.
    pub fn tail_sum(&self, offset: usize, tol: f64) -> Result<TailSum> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
        }
        match self {
            SequenceSpec::Constant { .. } => Ok(TailSum { value: 0.0, error_bound: 0.0 }),
            SequenceSpec::FinitePlusConstant { leading, tail } => {
                Ok(TailSum { value: leading.iter().skip(offset).map(|v| v - tail).sum(), error_bound: 0.0 })
            }
            SequenceSpec::Geometric { amplitude, ratio, .. } => {
                Ok(TailSum { value: amplitude * powi(*ratio, offset + 1) / (1.0 - ratio), error_bound: 0.0 })
            }
            SequenceSpec::LogRatio { gamma } if *gamma == 0.0 => Ok(TailSum { value: 0.0, error_bound: 0.0 }),
            SequenceSpec::LogRatio { .. } => Err(Error::NonSummable {
                tol,
                reason: "log-ratio sequence has a divergent (harmonic-type) tail".into(),
            }),
            SequenceSpec::Custom(c) => {
                let Some(sum_bound) = c.sum_bound.as_ref() else {
                    return Err(Error::NonSummable {
                        tol,
                        reason: format!("custom sequence `{}` declares no summable tail bound", c.name),
                    });
                };
                let mut terms = 1usize;
                while sum_bound(offset + terms) > tol / 2.0 {
                    if terms >= TAIL_SUM_MAX_TERMS {
                        return Err(Error::NonSummable {
                            tol,
                            reason: format!(
                                "tail bound of `{}` still {:e} after {} terms",
                                c.name,
                                sum_bound(offset + terms),
                                terms
                            ),
                        });
                    }
                    terms = (terms * 2).min(TAIL_SUM_MAX_TERMS);
                }
                let mut value = 0.0;
                let mut abs = 0.0;
                for n in 1..=terms {
                    let t = (c.eval)(n + offset) - c.limit;
                    value += t;
                    abs += t.abs();
                }
                let error_bound = sum_bound(offset + terms) + rounding(terms, abs);
                if error_bound > tol {
                    return Err(Error::NonSummable {
                        tol,
                        reason: format!("rounding error {error_bound:e} exceeds tolerance"),
                    });
                }
                Ok(TailSum { value, error_bound })
            }
        }
    }

    /// Samples the declared invariants: finite values, `|s_{N+1} - s| <= B(N)`,
    /// `B` nonnegative and nonincreasing.
    pub fn validate(&self) -> Result<()> {
        let limit = self.limit();
        if !limit.is_finite() {
            return Err(Error::InvalidParameter(format!("limit is not finite: {limit}")));
        }
        match self {
            SequenceSpec::Geometric { ratio, amplitude, .. } => {
                if !(ratio.abs() < 1.0) || !amplitude.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "geometric sequence needs |ratio| < 1 and finite amplitude, got ratio {ratio}"
                    )));
                }
            }
            SequenceSpec::FinitePlusConstant { leading, .. } => {
                if leading.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter("non-finite leading value".into()));
                }
            }
            SequenceSpec::LogRatio { gamma } if !gamma.is_finite() => {
                return Err(Error::InvalidParameter(format!("gamma is not finite: {gamma}")));
            }
            _ => {}
        }
        let slack = |b: f64| b * (1.0 + 1e-12) + 1e-15 * (1.0 + limit.abs());
        let mut prev = f64::INFINITY;
        for big_n in sample_indices() {
            let b = self.sup_tail_bound(big_n);
            let v = self.value(big_n + 1);
            if !v.is_finite() || !(b >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "sequence value or bound not finite at n = {}",
                    big_n + 1
                )));
            }
            if (v - limit).abs() > slack(b) {
                return Err(Error::InvalidParameter(format!(
                    "|s_{} - limit| = {:e} exceeds declared bound {:e}",
                    big_n + 1,
                    (v - limit).abs(),
                    b
                )));
            }
            if b > slack(prev) {
                return Err(Error::InvalidParameter(format!("tail bound increases at N = {big_n}")));
            }
            prev = b;
        }
        Ok(())
    }

    /// Tabulates the first `n_terms` values as a finite-plus-constant
    /// sequence, returning it together with `sup_{n>n_terms} |s_n - s|`.
    pub fn tabulate(&self, n_terms: usize) -> (SequenceSpec, f64) {
        let leading = (1..=n_terms).map(|n| self.value(n)).collect();
        (SequenceSpec::FinitePlusConstant { leading, tail: self.limit() }, self.sup_tail_bound(n_terms))
    }
}

impl PartialEq for SequenceSpec {
    fn eq(&self, other: &Self) -> bool {
        use SequenceSpec::*;
        match (self, other) {
            (Constant { value: x }, Constant { value: y }) => x == y,
            (FinitePlusConstant { leading: l1, tail: t1 }, FinitePlusConstant { leading: l2, tail: t2 }) => {
                l1 == l2 && t1 == t2
            }
            (Geometric { limit: l1, amplitude: a1, ratio: r1 }, Geometric { limit: l2, amplitude: a2, ratio: r2 }) => {
                l1 == l2 && a1 == a2 && r1 == r2
            }
            (LogRatio { gamma: g1 }, LogRatio { gamma: g2 }) => g1 == g2,
            (Custom(c1), Custom(c2)) => Arc::ptr_eq(&c1.eval, &c2.eval) && c1.limit == c2.limit,
            _ => false,
        }
    }
}

fn powi(r: f64, n: usize) -> f64 {
    match i32::try_from(n) {
        Ok(n) => r.powi(n),
        Err(_) => r.powf(n as f64),
    }
}

/// Conservative floating-point error of a sum of `terms` values whose
/// absolute values add up to `abs`.
pub(crate) fn rounding(terms: usize, abs: f64) -> f64 {
    terms as f64 * f64::EPSILON * abs
}

fn sample_indices() -> impl Iterator<Item = usize> {
    (1..=9).chain((4..=16).map(|p| 1usize << p))
}

/// Riemann zeta function for real `s > 1` by Euler-Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta needs s > 1");
    let n = 20usize;
    let nf = n as f64;
    let head: f64 = (1..n).map(|k| (k as f64).powf(-s)).sum();
    let np = nf.powf(-s);
    head + nf.powf(1.0 - s) / (s - 1.0) + np / 2.0 + s * np / nf / 12.0
        - s * (s + 1.0) * (s + 2.0) * np / nf.powi(3) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * np / nf.powi(5) / 30240.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn partial(s: &SequenceSpec, offset: usize, terms: usize) -> f64 {
        (1..=terms).map(|n| s.value(n + offset) - s.limit()).sum()
    }

    #[test]
    fn geometric_tail_sum_is_analytic() {
        let s = SequenceSpec::geometric(0.0, 0.3, 0.5);
        for k in 0..6 {
            let t = s.tail_sum(k, 1e-12).unwrap();
            assert_eq!(t.error_bound, 0.0);
            let exact = 0.3 * 0.5f64.powi(k as i32 + 1) / 0.5;
            assert!((t.value - exact).abs() < 1e-15);
            assert!((t.value - partial(&s, k, 200)).abs() < 1e-12);
        }
        let alt = SequenceSpec::geometric(1.0, -0.2, -0.7);
        let t = alt.tail_sum(2, 1e-12).unwrap();
        assert!((t.value - partial(&alt, 2, 400)).abs() < 1e-12);
    }

    #[test]
    fn constant_and_finite_tail_sums() {
        assert_eq!(SequenceSpec::constant(3.0).tail_sum(5, 1e-9).unwrap().value, 0.0);
        let f = SequenceSpec::finite_plus_constant(vec![2.0, 5.0], 1.0);
        let t = f.tail_sum(0, 1e-9).unwrap();
        assert_eq!(t.value, (2.0 - 1.0) + (5.0 - 1.0));
        assert_eq!(f.tail_sum(1, 1e-9).unwrap().value, 4.0);
        assert_eq!(f.tail_sum(2, 1e-9).unwrap().value, 0.0);
    }

    #[test]
    fn custom_summable_sequence() {
        // s_n = 1/n^2 with sum_{n>N} 1/n^2 <= 1/N
        let s = SequenceSpec::Custom(
            CustomSequence::new(
                "inv-square",
                |n| 1.0 / (n * n) as f64,
                0.0,
                |big_n| 1.0 / ((big_n + 1) * (big_n + 1)) as f64,
            )
            .with_sum_bound(|big_n| 1.0 / big_n.max(1) as f64),
        );
        s.validate().unwrap();
        let t = s.tail_sum(0, 1e-6).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((t.value - exact).abs() <= t.error_bound);
        assert!(t.error_bound <= 1e-6);
    }

    #[test]
    fn harmonic_custom_is_not_summable() {
        let s = SequenceSpec::Custom(CustomSequence::new(
            "harmonic",
            |n| 1.0 / n as f64,
            0.0,
            |big_n| 1.0 / (big_n as f64 + 1.0).ln().max(1.0 / (big_n + 1) as f64),
        ));
        assert!(matches!(s.tail_sum(0, 1e-9), Err(Error::NonSummable { .. })));
        assert!(!s.is_abs_summable());
    }

    #[test]
    fn log_ratio_values() {
        let s = SequenceSpec::log_ratio(2.0);
        assert!((s.value(3) + 2.0 * (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert_eq!(s.limit(), 0.0);
        s.validate().unwrap();
        assert!(matches!(s.tail_sum(1, 1e-9), Err(Error::NonSummable { .. })));
    }

    #[test]
    fn validate_rejects_bad_specs() {
        assert!(SequenceSpec::geometric(0.0, 1.0, 1.0).validate().is_err());
        let lying = SequenceSpec::Custom(CustomSequence::new("liar", |n| 1.0 / n as f64, 0.0, |_| 1e-9));
        assert!(lying.validate().is_err());
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2.0) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        assert!((zeta(4.0) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((zeta(1.5) - 2.612_375_348_685_488).abs() < 1e-10);
    }

    #[test]
    fn serde_roundtrip() {
        let specs = vec![
            SequenceSpec::constant(-0.5),
            SequenceSpec::finite_plus_constant(vec![1.0, 2.0], 0.25),
            SequenceSpec::geometric(0.1, -0.3, 0.5),
            SequenceSpec::log_ratio(2.0),
        ];
        for s in specs {
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<SequenceSpec>(&json).unwrap(), s);
        }
        let g: SequenceSpec =
            serde_json::from_str(r#"{"kind":"geometric","limit":0,"amplitude":1,"ratio":0.5}"#).unwrap();
        assert_eq!(g, SequenceSpec::geometric(0.0, 1.0, 0.5));
    }

    proptest! {
        #[test]
        fn offset_shift_identity(limit in -2.0..2.0f64, amp in -1.0..1.0f64, ratio in -0.9..0.9f64,
                                 k in 0usize..10) {
            let s = SequenceSpec::geometric(limit, amp, ratio);
            let t0 = s.tail_sum(0, 1e-12).unwrap();
            let tk = s.tail_sum(k, 1e-12).unwrap();
            let head: f64 = (1..=k).map(|n| s.value(n) - limit).sum();
            prop_assert!((t0.value - head - tk.value).abs() <= t0.error_bound + tk.error_bound + 1e-12);
        }

        #[test]
        fn finite_offset_shift_identity(leading in proptest::collection::vec(-3.0..3.0f64, 0..12),
                                        tail in -1.0..1.0f64, k in 0usize..14) {
            let s = SequenceSpec::finite_plus_constant(leading, tail);
            let t0 = s.tail_sum(0, 1e-12).unwrap();
            let tk = s.tail_sum(k, 1e-12).unwrap();
            let head: f64 = (1..=k).map(|n| s.value(n) - tail).sum();
            prop_assert!((t0.value - head - tk.value).abs() <= 1e-12);
        }

        #[test]
        fn geometric_declared_bounds_hold(limit in -2.0..2.0f64, amp in -1.0..1.0f64,
                                          ratio in -0.95..0.95f64) {
            let s = SequenceSpec::geometric(limit, amp, ratio);
            prop_assert!(s.validate().is_ok());
        }
    }
}
