//! One-shot run of every residual check on a single potential.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dual::{dual_sequences, involution_identity_residual, x_independence_residual};
use crate::error::{Error, Result};
use crate::kernel::{kernel_series, BaseSpec, KernelEvaluator, DEFAULT_MAX_TERMS};
use crate::normalization::{check_normalized, jacobian_duality_residual, DEFAULT_NORMALIZATION_TOL};
use crate::potential::{class_representatives, WaltersPotential};
use crate::ruelle::{
    discretize, eigenvalue_duality_residual, entropy_and_pressure, integral_kernel_residual, reversal_symmetry_report,
    solve, DEFAULT_MAX_ITERS, DEFAULT_SOLVER_TOL,
};
use crate::symbolic::BilateralPoint;
use crate::symmetry::{default_symmetry_samples, symmetry_conditions, symmetry_numeric, DEFAULT_SYMMETRY_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub status: Status,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub depth: usize,
    pub alpha: usize,
    pub word_depth: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { depth: 8, alpha: 2, word_depth: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rows: Vec<CheckRow>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn table(&self) -> String {
        let w = self.rows.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
        let mut out = format!("{:<w$}  {:<6}  {:>12}  {:>10}  note\n", "check", "status", "value", "threshold");
        for r in &self.rows {
            let num = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3e}"));
            out += &format!(
                "{:<w$}  {:<6}  {:>12}  {:>10}  {}\n",
                r.check,
                r.status.to_string(),
                num(r.value),
                num(r.threshold),
                r.note
            );
        }
        out
    }
}

struct Rows(Vec<CheckRow>);

impl Rows {
    fn bound(&mut self, check: impl Into<String>, value: Result<f64>, threshold: f64) {
        self.outcome(check, value.map(|v| (v, v <= threshold, String::new())), Some(threshold));
    }

    fn outcome(&mut self, check: impl Into<String>, r: Result<(f64, bool, String)>, threshold: Option<f64>) {
        let row = match r {
            Ok((v, ok, note)) => CheckRow {
                check: check.into(),
                value: Some(v),
                threshold,
                status: if ok { Status::Pass } else { Status::Fail },
                note,
            },
            Err(e) => {
                CheckRow { check: check.into(), value: None, threshold, status: Status::Fail, note: e.to_string() }
            }
        };
        self.0.push(row);
    }

    fn skip(&mut self, check: impl Into<String>, note: impl Into<String>) {
        self.0.push(CheckRow {
            check: check.into(),
            value: None,
            threshold: None,
            status: Status::Skipped,
            note: note.into(),
        });
    }
}

fn closed_form_residual(pot: &WaltersPotential, base: BaseSpec, depth: usize) -> Result<f64> {
    let ev = KernelEvaluator::new(pot, base, 1e-12)?;
    let pts = class_representatives(depth);
    let bp = base.point();
    let mut worst: f64 = 0.0;
    for y in &pts {
        for x in &pts {
            let closed = ev.eval(y, x)?.value;
            let series = kernel_series(pot, &bp, y, x, 1e-12, DEFAULT_MAX_TERMS);
            if !series.converged {
                return Err(Error::NonSummable { tol: 1e-12, reason: format!("series at y = {y}, x = {x}") });
            }
            worst = worst.max((closed - series.value).abs());
        }
    }
    Ok(worst)
}

fn bilateral_grid(depth: usize) -> Vec<BilateralPoint> {
    let pts = class_representatives(depth);
    pts.iter().flat_map(|y| pts.iter().map(move |x| BilateralPoint::new(y.clone(), x.clone()))).collect()
}

/// Runs the kernel, dual, symmetry, Ruelle and normalization checks.
/// Non-regular potentials only get the regularity row.
pub fn verify_all(pot: &WaltersPotential, opts: VerifyOptions) -> Result<VerifyReport> {
    if opts.depth < 4 || opts.word_depth < 1 || opts.word_depth >= opts.depth || opts.alpha < 1 {
        return Err(Error::InvalidParameter(format!("invalid verify options {opts:?}")));
    }
    pot.validate()?;
    let mut rows = Rows(Vec::new());
    let reg = pot.check_regularity(1e-12);
    rows.outcome("regularity", Ok((0.0, reg.is_regular, reg.reasons.join("; "))), None);
    if !reg.is_regular {
        return Ok(VerifyReport { passed: false, rows: rows.0 });
    }

    let grid = bilateral_grid(3);
    let ys = class_representatives(3);
    let xs = class_representatives(2);
    for base in BaseSpec::all(opts.alpha) {
        rows.bound(format!("kernel closed form vs series [{base}]"), closed_form_residual(pot, base, 4), 1e-9);
        rows.bound(
            format!("involution identity [{base}]"),
            involution_identity_residual(pot, base, &grid, 1e-12),
            1e-9,
        );
        let xi = ys.iter().try_fold(0.0f64, |m, y| Ok(m.max(x_independence_residual(pot, base, y, &xs, 1e-12)?)));
        rows.bound(format!("dual x-independence [{base}]"), xi, 1e-9);
        let agree = symmetry_conditions(pot, base, 12, DEFAULT_SYMMETRY_TOL).and_then(|rep| {
            let num = symmetry_numeric(pot, base, &default_symmetry_samples(6), 1e-12)?;
            let numeric = num <= DEFAULT_SYMMETRY_TOL;
            Ok((num, rep.symmetric == numeric, format!("symmetric = {}", rep.symmetric)))
        });
        rows.outcome(format!("symmetry conditions agree with numeric [{base}]"), agree, None);
    }

    let sol = match solve(pot, opts.depth, DEFAULT_SOLVER_TOL, DEFAULT_MAX_ITERS) {
        Ok(s) => s,
        Err(e) => {
            rows.outcome("ruelle solve", Err(e), None);
            return Ok(VerifyReport { passed: false, rows: rows.0 });
        }
    };
    rows.bound("ruelle eigen residual", Ok(sol.residual), DEFAULT_SOLVER_TOL);
    let ep = entropy_and_pressure(&sol, pot);
    let slack = ep.error_bound + 1e-10;
    rows.outcome(
        "entropy in [0, log 2]",
        Ok((
            ep.entropy,
            ep.entropy >= -slack && ep.entropy <= std::f64::consts::LN_2 + slack,
            format!("pressure {:.12}", ep.pressure),
        )),
        None,
    );
    for base in [BaseSpec::ZerosForever, BaseSpec::ZerosThenOne(opts.alpha)] {
        // log λ moves by at most the oscillation of each discretized potential
        let osc = dual_sequences(pot, base, 1e-12)
            .and_then(|d| discretize(&d.dual, opts.depth))
            .map_or(0.0, |d| d.max_oscillation)
            + sol.discretization.max_oscillation;
        rows.bound(
            format!("eigenvalue duality [{base}]"),
            eigenvalue_duality_residual(pot, base, opts.depth),
            f64::max(1e-6, osc.exp_m1()),
        );
    }
    let ik = integral_kernel_residual(pot, BaseSpec::ZerosForever, opts.depth).and_then(|fine| {
        if fine.spread <= 1e-5 {
            return Ok((fine.spread, true, String::new()));
        }
        let coarse = integral_kernel_residual(pot, BaseSpec::ZerosForever, opts.depth - 1)?;
        Ok((fine.spread, fine.spread < coarse.spread, format!("depth {} spread {:.3e}", opts.depth - 1, coarse.spread)))
    });
    rows.outcome("integral kernel spread (<= 1e-5 or decreasing)", ik, Some(1e-5));

    let norm = check_normalized(pot, 32, DEFAULT_NORMALIZATION_TOL);
    rows.outcome(
        "normalization formulations agree",
        Ok((norm.max_residual, norm.formulations_agree, format!("normalized = {}", norm.is_normalized))),
        None,
    );
    if norm.is_normalized {
        rows.bound("normalized: lambda = 1", Ok((sol.lambda - 1.0).abs()), 1e-10);
        let rev = reversal_symmetry_report(&sol, opts.word_depth).map(|r| {
            (r.max_residual, r.max_residual <= r.discretization_error, format!("bound {:.3e}", r.discretization_error))
        });
        rows.outcome("reversal symmetry", rev, None);
        rows.bound(
            "jacobian duality [0^inf]",
            jacobian_duality_residual(pot, BaseSpec::ZerosForever, opts.depth, opts.word_depth),
            1e-6,
        );
    } else {
        for c in ["normalized: lambda = 1", "reversal symmetry", "jacobian duality [0^inf]"] {
            rows.skip(c, "potential is not normalized");
        }
    }
    let passed = rows.0.iter().all(|r| r.status != Status::Fail);
    Ok(VerifyReport { rows: rows.0, passed })
}
