use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use walters_kernel::dual::dual_sequences;
use walters_kernel::kernel::{kernel_table, KernelEvaluator};
use walters_kernel::normalization::{check_normalized, dual_normalizable_check};
use walters_kernel::potential::class_representatives;
use walters_kernel::ruelle::{entropy_and_pressure, solve};
use walters_kernel::spec_file::{load_potential, print_potential_spec, tabulate_potential, PotentialSpec};
use walters_kernel::symmetry::{
    default_symmetry_samples, relaxed_twist_check, strict_twist_configuration, symmetry_conditions, symmetry_numeric,
};
use walters_kernel::verify::{verify_all, VerifyOptions};
use walters_kernel::{BaseSpec, Point, WaltersPotential, Word};

use crate::args::*;

pub const SCHEMA: &str = "walters-kernel/1";
pub const MAX_DEPTH: usize = 14;

#[derive(Debug)]
pub enum CliError {
    Lib(walters_kernel::Error),
    Input(String),
}

impl From<walters_kernel::Error> for CliError {
    fn from(e: walters_kernel::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use walters_kernel::Error::*;
        match self {
            CliError::Lib(NonSummable { .. } | NoConvergence { .. }) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Input(s) => f.write_str(s),
        }
    }
}

type Res<T> = Result<T, CliError>;

/// What a command printed and whether its check passed.
pub struct Outcome {
    pub stdout: String,
    pub ok: bool,
}

fn report(mut v: Value, ok: bool) -> Res<Outcome> {
    if let Some(obj) = v.as_object_mut() {
        obj.insert("schema".into(), json!(SCHEMA));
    }
    let stdout = serde_json::to_string_pretty(&v).map_err(|e| CliError::Input(e.to_string()))? + "\n";
    Ok(Outcome { stdout, ok })
}

fn load(p: &PotentialArg) -> Res<WaltersPotential> {
    let text = fs::read_to_string(&p.potential)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.potential.display())))?;
    Ok(load_potential(&text)?)
}

fn base(b: &BaseArg) -> Res<BaseSpec> {
    Ok(BaseSpec::parse(&b.base, b.alpha)?)
}

fn check_tol(tol: f64) -> Res<f64> {
    if (1e-15..=1e-2).contains(&tol) {
        Ok(tol)
    } else {
        Err(CliError::Input(format!("tolerance {tol:e} outside [1e-15, 1e-2]")))
    }
}

fn check_depth(depth: usize, min: usize) -> Res<usize> {
    if (min..=MAX_DEPTH).contains(&depth) {
        Ok(depth)
    } else {
        Err(CliError::Input(format!("depth {depth} outside [{min}, {MAX_DEPTH}]")))
    }
}

fn point(s: &str) -> Res<Point> {
    Ok(s.parse::<Point>().map_err(|e| CliError::Input(format!("bad point {s:?}: {e}")))?)
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

pub fn run(cmd: Command) -> Res<Outcome> {
    match cmd {
        Command::Potential(PotentialCmd::Validate { potential }) => {
            let pot = load(&potential)?;
            let reg = pot.check_regularity(1e-12);
            let norm = check_normalized(&pot, 12, 1e-10);
            let ok = reg.is_regular;
            report(json!({ "valid": true, "regularity": reg, "normalized": norm.is_normalized }), ok)
        }
        Command::Kernel(KernelCmd::Eval { potential, base: b, y, x, tol }) => {
            let (pot, b, tol) = (load(&potential)?, base(&b)?, check_tol(tol.tol)?);
            let (y, x) = (point(&y)?, point(&x)?);
            let ev = KernelEvaluator::new(&pot, b, tol)?;
            let v = ev.eval(&y, &x)?;
            report(
                json!({
                    "base": b.to_string(), "y": y.to_string(), "x": x.to_string(),
                    "value": v.value, "error_bound": v.error_bound, "converged": v.converged,
                    "cell": ev.cell(&y, &x),
                }),
                true,
            )
        }
        Command::Kernel(KernelCmd::Table { potential, base: b, depth, tol }) => {
            let (pot, b, tol) = (load(&potential)?, base(&b)?, check_tol(tol.tol)?);
            let rows = kernel_table(&pot, b, check_depth(depth, 1)?, tol)?;
            let mut out = String::from("y,x,value,error_bound,cell\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{:.17e},{:.3e},\"{}\"", r.y, r.x, r.value, r.error_bound, r.cell);
            }
            Ok(Outcome { stdout: out, ok: true })
        }
        Command::Dual(DualCmd::Derive { potential, base: b, terms, out, format, tol }) => {
            let (pot, b, tol) = (load(&potential)?, base(&b)?, check_tol(tol.tol)?);
            if terms == 0 {
                return Err(CliError::Input("--terms must be positive".into()));
            }
            let dual = dual_sequences(&pot, b, tol)?;
            let (tab, bound) = tabulate_potential(&dual.dual, terms);
            let mut spec = PotentialSpec::from_potential(tab);
            spec.description = Some(format!("dual potential for the kernel based at {b}"));
            let file = print_potential_spec(&spec)?;
            if let Some(path) = &out {
                write_file(path, &(file.clone() + "\n"))?;
            }
            let values: Vec<(String, f64)> =
                class_representatives(6).into_iter().map(|y| (y.to_string(), dual.eval(&y))).collect();
            match format {
                Format::Text => {
                    let mut s = format!("dual potential, base {b} (truncation bound {bound:.3e})\n");
                    let w = values.iter().map(|v| v.0.len()).max().unwrap_or(1);
                    for (y, v) in &values {
                        let _ = writeln!(s, "{y:<w$}  {v:+.15}");
                    }
                    Ok(Outcome { stdout: s, ok: true })
                }
                Format::Json => {
                    let file: Value = serde_json::from_str(&file).map_err(|e| CliError::Input(e.to_string()))?;
                    let table: Vec<Value> = values.iter().map(|(y, v)| json!({ "y": y, "value": v })).collect();
                    report(
                        json!({
                            "base": b.to_string(), "potential": file, "truncation_bound": bound,
                            "tail_sums": dual.tail_sum_values, "table": table,
                        }),
                        true,
                    )
                }
            }
        }
        Command::Symmetry(SymmetryCmd::Check { potential, base: b, nmax, expect, tol }) => {
            let (pot, b, tol) = (load(&potential)?, base(&b)?, check_tol(tol)?);
            if nmax == 0 {
                return Err(CliError::Input("--nmax must be positive".into()));
            }
            let rep = symmetry_conditions(&pot, b, nmax, tol)?;
            let numeric = symmetry_numeric(&pot, b, &default_symmetry_samples(6), 1e-12)?;
            let ok = match expect {
                None => true,
                Some(Expectation::Symmetric) => rep.symmetric,
                Some(Expectation::Asymmetric) => !rep.symmetric,
            };
            report(
                json!({
                    "base": b.to_string(), "symmetric": rep.symmetric, "max_residual": rep.max_residual,
                    "conditions": rep.conditions, "numeric_max_residual": numeric,
                    "numeric_symmetric": numeric <= tol,
                }),
                ok,
            )
        }
        Command::Twist(TwistCmd::Check { potential, base: b, depth, expect }) => {
            let (pot, b) = (load(&potential)?, base(&b)?);
            if !(1..=8).contains(&depth) {
                return Err(CliError::Input(format!("twist depth {depth} outside [1, 8]")));
            }
            let rep = relaxed_twist_check(&pot, b, depth)?;
            let strict = strict_twist_configuration(&pot, b, 1, 1, 2, 1)?;
            let ok = match expect {
                None => true,
                Some(PassFail::Pass) => rep.relaxed_twist_exhaustive_pass == Some(true),
                Some(PassFail::Fail) => rep.relaxed_twist_exhaustive_pass == Some(false),
            };
            report(json!({ "base": b.to_string(), "depth": depth, "relaxed": rep, "strict_configuration": strict }), ok)
        }
        Command::Normalize(NormalizeCmd::Check { potential, alpha, nmax, tol }) => {
            let (pot, tol) = (load(&potential)?, check_tol(tol.tol)?);
            if nmax == 0 || alpha == 0 {
                return Err(CliError::Input("--nmax and --alpha must be positive".into()));
            }
            let rep = check_normalized(&pot, nmax, tol);
            let rep = if rep.is_normalized { dual_normalizable_check(&pot, alpha, nmax, tol)? } else { rep };
            let obstructed = rep.dual.as_ref().map(|d| d.obstructed);
            report(json!({ "report": rep, "is_normalized": rep.is_normalized, "dual_obstructed": obstructed }), true)
        }
        Command::Ruelle(RuelleCmd::Solve { potential, depth, tol, max_iters, masses }) => {
            let (pot, tol, depth) = (load(&potential)?, check_tol(tol)?, check_depth(depth, 3)?);
            let sol = solve(&pot, depth, tol, max_iters)?;
            let ep = entropy_and_pressure(&sol, &pot);
            if let Some(path) = &masses {
                let mut csv = String::from("word,mass\n");
                for (i, m) in sol.mu_fine.masses.iter().enumerate() {
                    let _ = writeln!(csv, "{},{:.17e}", Word::from_index(i, depth), m);
                }
                write_file(path, &csv)?;
            }
            report(
                json!({
                    "depth": depth, "lambda": sol.lambda, "pressure": ep.pressure, "entropy": ep.entropy,
                    "entropy_error_bound": ep.error_bound, "residual": sol.residual, "iterations": sol.iterations,
                    "max_oscillation": sol.discretization.max_oscillation,
                    "masses_file": masses.as_ref().map(|p| p.display().to_string()),
                }),
                true,
            )
        }
        Command::Verify(VerifyCmd::All { potential, depth, alpha, word_depth, format }) => {
            let pot = load(&potential)?;
            let opts = VerifyOptions { depth: check_depth(depth, 4)?, alpha, word_depth };
            let rep = verify_all(&pot, opts)?;
            match format {
                Format::Text => Ok(Outcome {
                    stdout: rep.table() + if rep.passed { "all checks passed\n" } else { "some checks FAILED\n" },
                    ok: rep.passed,
                }),
                Format::Json => {
                    let ok = rep.passed;
                    report(json!({ "passed": rep.passed, "rows": rep.rows }), ok)
                }
            }
        }
    }
}
