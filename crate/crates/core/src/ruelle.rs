//! Cylinder discretization of the Ruelle operator
//! `(L_A f)(z) = Σ_{σx = z} e^{A(x)} f(x)`.
//!
//! A potential is replaced by its values on depth-`k` cylinders (each word
//! represented by `w 0^∞`), and the operator acts on functions of depth
//! `k − 1` words. Words are indexed lexicographically with the first symbol
//! most significant, so the depth-`k` word `s z` has index `s·2^{k−1} + z`
//! and dropping its last symbol is a right shift.

use serde::{Deserialize, Serialize};

use crate::dual::dual_sequences;
use crate::error::{Error, Result};
use crate::kernel::{BaseSpec, KernelEvaluator, LeadingRun};
use crate::normalization::check_normalized;
use crate::potential::{class_representatives, WaltersPotential};
use crate::symbolic::{Point, Symbol, Word};

pub const DEFAULT_SOLVER_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITERS: usize = 100_000;
const MAX_DEPTH: usize = 20;

/// A function constant on depth-`k` cylinders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderFunction {
    pub depth: usize,
    pub values: Vec<f64>,
}

impl CylinderFunction {
    pub fn new(depth: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 1 << depth {
            return Err(Error::InvalidParameter(format!(
                "depth {depth} needs {} values, got {}",
                1usize << depth,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("cylinder function has non-finite values".into()));
        }
        Ok(CylinderFunction { depth, values })
    }

    pub fn constant(depth: usize, value: f64) -> Self {
        CylinderFunction { depth, values: vec![value; 1 << depth] }
    }

    pub fn get(&self, w: &Word) -> f64 {
        assert_eq!(w.len(), self.depth);
        self.values[w.index()]
    }
}

/// A probability vector on depth-`k` cylinders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderMeasure {
    pub depth: usize,
    pub masses: Vec<f64>,
}

impl CylinderMeasure {
    pub fn new(depth: usize, masses: Vec<f64>) -> Result<Self> {
        if masses.len() != 1 << depth {
            return Err(Error::InvalidParameter(format!("depth {depth} needs {} masses", 1usize << depth)));
        }
        if masses.iter().any(|m| !(*m >= 0.0)) {
            return Err(Error::InvalidParameter("negative or NaN mass".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("masses sum to {total}")));
        }
        Ok(CylinderMeasure { depth, masses })
    }

    pub fn uniform(depth: usize) -> Self {
        let n = 1usize << depth;
        CylinderMeasure { depth, masses: vec![1.0 / n as f64; n] }
    }

    /// The induced measure on depth-`d` cylinders, `d ≤ depth`.
    pub fn marginal(&self, d: usize) -> CylinderMeasure {
        assert!(d <= self.depth);
        let shift = self.depth - d;
        let mut masses = vec![0.0; 1 << d];
        for (i, m) in self.masses.iter().enumerate() {
            masses[i >> shift] += m;
        }
        CylinderMeasure { depth: d, masses }
    }

    /// Mass of the cylinder `[w]`, `|w| ≤ depth`.
    pub fn mass(&self, w: &Word) -> f64 {
        assert!(w.len() <= self.depth);
        let shift = self.depth - w.len();
        let lo = w.index() << shift;
        self.masses[lo..lo + (1 << shift)].iter().sum()
    }
}

/// Depth-`k` values of a potential together with per-cell oscillation
/// bounds (sup − inf of the true potential over the cell).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub function: CylinderFunction,
    pub oscillation: Vec<f64>,
    pub max_oscillation: f64,
}

fn representative(w: &Word) -> Point {
    Point::new(w.clone(), Symbol::Zero)
}

/// Values of `A` on the representatives `w 0^∞` of depth-`k` words.
///
/// Only four cells can have nonzero oscillation: `0^k`, `1^k`, `0 1^{k−1}`
/// and `1 0^{k−1}`; every other word fixes the point class.
pub fn discretize(pot: &WaltersPotential, depth: usize) -> Result<Discretization> {
    if !(2..=MAX_DEPTH).contains(&depth) {
        return Err(Error::InvalidParameter(format!("discretization depth must be in 2..={MAX_DEPTH}, got {depth}")));
    }
    let n = 1usize << depth;
    let values: Vec<f64> = (0..n).map(|i| pot.eval(&representative(&Word::from_index(i, depth)))).collect();
    let mut oscillation = vec![0.0; n];
    let k = depth;
    oscillation[0] = 2.0 * pot.a.sup_tail_bound(k - 1);
    oscillation[n - 1] = 2.0 * pot.c.sup_tail_bound(k - 1);
    oscillation[(n >> 1) - 1] = 2.0 * pot.b.sup_tail_bound(k - 2);
    oscillation[n >> 1] = 2.0 * pot.d.sup_tail_bound(k - 2);
    let max_oscillation = oscillation.iter().copied().fold(0.0, f64::max);
    Ok(Discretization { function: CylinderFunction::new(depth, values)?, oscillation, max_oscillation })
}

/// One application of the discretized operator: `ak` has depth `k`, `f`
/// depth `k − 1`.
pub fn ruelle_apply(ak: &CylinderFunction, f: &CylinderFunction) -> Result<CylinderFunction> {
    if f.depth + 1 != ak.depth {
        return Err(Error::DepthMismatch { potential: ak.depth, function: f.depth });
    }
    let n = f.values.len();
    let values = (0..n)
        .map(|z| ak.values[z].exp() * f.values[z >> 1] + ak.values[n + z].exp() * f.values[(n + z) >> 1])
        .collect();
    Ok(CylinderFunction { depth: f.depth, values })
}

/// Leading eigendata of the discretized operator.
#[derive(Clone, Debug)]
pub struct RuelleSolution {
    pub depth: usize,
    pub lambda: f64,
    /// Eigenfunction on depth `k − 1` words, normalized so `∫ φ dν = 1`.
    pub phi: CylinderFunction,
    pub nu: CylinderMeasure,
    pub mu: CylinderMeasure,
    /// Equilibrium masses of depth-`k` cylinders.
    pub mu_fine: CylinderMeasure,
    pub pressure: f64,
    pub iterations: usize,
    pub residual: f64,
    pub discretization: Discretization,
    pub potential: WaltersPotential,
}

/// Power iteration for `φ` and the transpose iteration for `ν`, both
/// started from constant vectors.
pub fn solve(pot: &WaltersPotential, depth: usize, tol: f64, max_iters: usize) -> Result<RuelleSolution> {
    if depth < 3 {
        return Err(Error::InvalidParameter(format!("solver depth must be at least 3, got {depth}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    pot.require_regular(1e-10)?;
    let disc = discretize(pot, depth)?;
    let shift = disc.function.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = disc.function.values.iter().map(|v| (v - shift).exp()).collect();
    let n = 1usize << (depth - 1);
    let apply = |f: &[f64], out: &mut [f64]| {
        for z in 0..n {
            out[z] = e[z] * f[z >> 1] + e[n + z] * f[(n + z) >> 1];
        }
    };

    let mut phi = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        apply(&phi, &mut next);
        lambda = next.iter().copied().fold(0.0, f64::max);
        residual = 0.0;
        for (p, q) in phi.iter_mut().zip(&next) {
            let q = q / lambda;
            residual = f64::max(residual, (q - *p).abs());
            *p = q;
        }
        if residual <= tol {
            break;
        }
    }
    if residual > tol {
        return Err(Error::NoConvergence { iterations, residual });
    }

    let mut nu = vec![1.0 / n as f64; n];
    let mut nu_next = vec![0.0; n];
    let mut nu_iters = 0;
    loop {
        nu_iters += 1;
        nu_next.iter_mut().for_each(|m| *m = 0.0);
        for z in 0..n {
            nu_next[z >> 1] += nu[z] * e[z];
            nu_next[(n + z) >> 1] += nu[z] * e[n + z];
        }
        let total: f64 = nu_next.iter().sum();
        let mut diff = 0.0;
        for (m, q) in nu.iter_mut().zip(&nu_next) {
            let q = q / total;
            diff += (q - *m).abs();
            *m = q;
        }
        if diff <= tol {
            break;
        }
        if nu_iters >= max_iters {
            return Err(Error::NoConvergence { iterations: nu_iters, residual: diff });
        }
    }

    let scale: f64 = phi.iter().zip(&nu).map(|(p, m)| p * m).sum();
    phi.iter_mut().for_each(|p| *p /= scale);
    let mu: Vec<f64> = phi.iter().zip(&nu).map(|(p, m)| p * m).collect();
    let mut fine = vec![0.0; 2 * n];
    for z in 0..n {
        for s in 0..2 {
            let w = s * n + z;
            fine[w] = nu[z] * e[w] * phi[w >> 1] / lambda;
        }
    }
    let total: f64 = fine.iter().sum();
    fine.iter_mut().for_each(|m| *m /= total);
    let mu_total: f64 = mu.iter().sum();

    Ok(RuelleSolution {
        depth,
        lambda: lambda * shift.exp(),
        phi: CylinderFunction { depth: depth - 1, values: phi },
        nu: CylinderMeasure { depth: depth - 1, masses: nu },
        mu: CylinderMeasure { depth: depth - 1, masses: mu.iter().map(|m| m / mu_total).collect() },
        mu_fine: CylinderMeasure { depth, masses: fine },
        pressure: lambda.ln() + shift,
        iterations: iterations.max(nu_iters),
        residual,
        discretization: disc,
        potential: pot.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyPressure {
    pub entropy: f64,
    pub pressure: f64,
    /// Bound on the error of `∫ A dμ` caused by the discretization.
    pub error_bound: f64,
}

/// `h(μ) = P − ∫ A dμ` with `P = log λ`.
pub fn entropy_and_pressure(sol: &RuelleSolution, pot: &WaltersPotential) -> EntropyPressure {
    let k = sol.depth;
    let mut integral = 0.0;
    let mut err = 0.0;
    for (i, m) in sol.mu_fine.masses.iter().enumerate() {
        integral += m * pot.eval(&representative(&Word::from_index(i, k)));
        err += m * sol.discretization.oscillation[i];
    }
    EntropyPressure { entropy: sol.pressure - integral, pressure: sol.pressure, error_bound: err }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReversalReport {
    pub max_residual: f64,
    pub worst_word: String,
    /// Change of the compared masses between depths `k − 1` and `k`.
    pub discretization_error: f64,
}

/// `max |μ([w]) − μ([reverse w])|` over words with `|w| ≤ word_depth`.
pub fn reversal_symmetry_report(sol: &RuelleSolution, word_depth: usize) -> Result<ReversalReport> {
    if word_depth < 1 || word_depth >= sol.depth {
        return Err(Error::InvalidParameter(format!("word depth must be in 1..{}, got {word_depth}", sol.depth)));
    }
    let norm = check_normalized(&sol.potential, 32, 1e-10);
    if !norm.is_normalized {
        return Err(Error::NotNormalized(format!("max residual {:e}", norm.max_residual)));
    }
    let coarse = solve(&sol.potential, sol.depth - 1, DEFAULT_SOLVER_TOL, DEFAULT_MAX_ITERS)?;
    let mut max_residual: f64 = 0.0;
    let mut worst_word = String::new();
    let mut drift: f64 = 0.0;
    for len in 1..=word_depth {
        for i in 0..1usize << len {
            let w = Word::from_index(i, len);
            let m = sol.mu_fine.mass(&w);
            let r = (m - sol.mu_fine.mass(&w.reversed())).abs();
            if r > max_residual {
                max_residual = r;
                worst_word = w.to_string();
            }
            drift = drift.max((m - coarse.mu_fine.mass(&w)).abs());
        }
    }
    Ok(ReversalReport { max_residual, worst_word, discretization_error: drift + 64.0 * f64::EPSILON })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralKernelReport {
    /// `(max − min) / mean` of `F(x)/φ(x)` over the sampled `x`.
    pub spread: f64,
    pub ratios: Vec<(String, f64)>,
}

/// Compares `F(x) = ∫ e^{W(y|x)} dν_{A*}(y)` with `φ_A(x)`: the ratio must be
/// constant.
pub fn integral_kernel_residual(pot: &WaltersPotential, base: BaseSpec, depth: usize) -> Result<IntegralKernelReport> {
    let dual = dual_sequences(pot, base, 1e-12)?;
    let sol = solve(pot, depth, DEFAULT_SOLVER_TOL, DEFAULT_MAX_ITERS)?;
    let sol_dual = solve(&dual.dual, depth, DEFAULT_SOLVER_TOL, DEFAULT_MAX_ITERS)?;
    let ev = KernelEvaluator::new(pot, base, 1e-12)?;
    let cells = sol_dual.nu.depth;
    let y_runs: Vec<LeadingRun> =
        (0..1usize << cells).map(|i| LeadingRun::of(&representative(&Word::from_index(i, cells)))).collect();
    let xs = class_representatives(depth.saturating_sub(2).max(1));
    let mut ratios = Vec::with_capacity(xs.len());
    for x in &xs {
        let xr = LeadingRun::of(x);
        let mut cache = std::collections::HashMap::new();
        let mut f = 0.0;
        for (i, yr) in y_runs.iter().enumerate() {
            let w = match cache.get(yr) {
                Some(&w) => w,
                None => {
                    let w = ev.eval_runs(*yr, xr)?.value;
                    cache.insert(*yr, w);
                    w
                }
            };
            f += w.exp() * sol_dual.nu.masses[i];
        }
        let phi = sol.phi.get(&x.head(sol.phi.depth));
        ratios.push((x.to_string(), f / phi));
    }
    let max = ratios.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let mean = ratios.iter().map(|r| r.1).sum::<f64>() / ratios.len() as f64;
    Ok(IntegralKernelReport { spread: (max - min) / mean, ratios })
}

/// `|λ_A − λ_{A*}| / λ_A` at the given depth.
pub fn eigenvalue_duality_residual(pot: &WaltersPotential, base: BaseSpec, depth: usize) -> Result<f64> {
    let dual = dual_sequences(pot, base, 1e-12)?;
    let l = solve(pot, depth, DEFAULT_SOLVER_TOL, DEFAULT_MAX_ITERS)?.lambda;
    let ld = solve(&dual.dual, depth, DEFAULT_SOLVER_TOL, DEFAULT_MAX_ITERS)?.lambda;
    Ok((l - ld).abs() / l)
}
