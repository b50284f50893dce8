//! Problem instances, validation, objectives, and the spectral solution
//! bounds that confine every iterate.
//!
//! An [`Instance`] holds the sample covariance `Σ`, the full penalty-weight
//! matrix `ρ`, and the constrained pair set `Ω`. The weights are stored as one
//! full matrix even though conceptually they split into fixed user weights
//! (off `Ω`) and adaptive penalty levels (on `Ω`); the outer loop owns which
//! entries mutate, everything here consumes the whole matrix.
//!
//! [`compute_bounds`] evaluates the a-priori spectral bounds on the penalized
//! solution: every optimizer satisfies `α_ρ I ⪯ X ⪯ β_ρ I`, with
//! `α_ρ = 1/(‖Σ‖ + ‖ρ‖)` and `β_ρ` the largest root of
//! `log t − λ_min(Σ + Diag(ρ))·t − ϑ = 0`.

use serde::Serialize;

use crate::linalg::{max_abs_on_set, sym_eigen, spectral_norm, PairSet, SymMatrix};
use crate::{Error, Result};

/// Feasibility tolerance for the hard zero constraints in [`f_constrained`].
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// A covariance-selection problem instance.
#[derive(Debug, Clone)]
pub struct Instance {
    sigma: SymMatrix,
    rho: SymMatrix,
    omega: PairSet,
}

impl Instance {
    /// Builds an instance, checking dimensions and weight nonnegativity.
    /// Positive definiteness of `Σ + Diag(ρ)` is established separately by
    /// [`validate`].
    pub fn new(sigma: SymMatrix, rho: SymMatrix, omega: PairSet) -> Result<Self> {
        if sigma.n() != rho.n() {
            return Err(Error::InvalidInput(format!(
                "sigma is {}x{0} but rho is {1}x{1}",
                sigma.n(),
                rho.n()
            )));
        }
        if let Some(idx) = omega.max_index() {
            if idx >= sigma.n() {
                return Err(Error::InvalidInput(format!(
                    "omega index {idx} out of range for dimension {}",
                    sigma.n()
                )));
            }
        }
        if rho.as_slice().iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidInput(
                "penalty weights must be finite and nonnegative".into(),
            ));
        }
        if !sigma.as_slice().iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("sigma has non-finite entries".into()));
        }
        Ok(Instance { sigma, rho, omega })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn sigma(&self) -> &SymMatrix {
        &self.sigma
    }

    pub fn rho(&self) -> &SymMatrix {
        &self.rho
    }

    pub fn omega(&self) -> &PairSet {
        &self.omega
    }

    /// Copy with every weight on `Ω` set to `level`.
    pub fn with_rho_on_omega(&self, level: f64) -> Result<Self> {
        if level < 0.0 || !level.is_finite() {
            return Err(Error::InvalidInput(format!(
                "penalty level must be finite and nonnegative, got {level}"
            )));
        }
        let mut rho = self.rho.clone();
        for (i, j) in self.omega.iter() {
            rho.set(i, j, level);
        }
        Ok(Instance { sigma: self.sigma.clone(), rho, omega: self.omega.clone() })
    }

    /// Copy with every weight on `Ω` multiplied by `factor`.
    pub fn scale_rho_on_omega(&self, factor: f64) -> Result<Self> {
        if factor < 0.0 || !factor.is_finite() {
            return Err(Error::InvalidInput(format!(
                "penalty factor must be finite and nonnegative, got {factor}"
            )));
        }
        let mut rho = self.rho.clone();
        for (i, j) in self.omega.iter() {
            rho.set(i, j, rho.get(i, j) * factor);
        }
        Ok(Instance { sigma: self.sigma.clone(), rho, omega: self.omega.clone() })
    }

    /// `Σ + Diag(ρ)`, the shifted matrix whose positive definiteness is the
    /// standing assumption.
    pub fn shifted_sigma(&self) -> SymMatrix {
        self.sigma.add_diag(&self.rho.diag())
    }

    /// Largest weight `ρ_max = max_ij ρ_ij`.
    pub fn rho_max(&self) -> f64 {
        self.rho.max_abs()
    }
}

/// Spectral solution bounds for the penalized problem.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Bounds {
    /// Lower spectral bound α_ρ = 1/(‖Σ‖ + ‖ρ‖).
    pub alpha: f64,
    /// Upper spectral bound β_ρ: largest root of log t − λ_min_shift·t − ϑ = 0.
    pub beta: f64,
    /// ϑ = max{f_penalized((Σ+Diag(ρ))⁻¹), θ} − (n−1)(−1 − log λ_min_shift).
    pub vartheta: f64,
    /// θ = n(−1 − log Tr(Σ+ρ) + log n).
    pub theta: f64,
    /// λ_min(Σ + Diag(ρ)).
    pub lam_min_shift: f64,
    /// Set when the root equation had no bracket and β was clamped to the
    /// maximizer 1/λ_min_shift.
    pub degenerate: bool,
}

/// Enforces the standing assumption `Σ + Diag(ρ) ≻ 0` by raising the diagonal
/// weights by the minimal multiple of `perturb` that makes
/// `λ_min(Σ + Diag(ρ)) ≥ perturb`. Idempotent; returns a validated copy.
pub fn validate(inst: &Instance, perturb: f64) -> Result<Instance> {
    if !(perturb > 0.0) || !perturb.is_finite() {
        return Err(Error::InvalidInput(format!(
            "perturbation must be a positive real, got {perturb}"
        )));
    }
    let mut out = inst.clone();
    loop {
        let lam_min = sym_eigen(&out.shifted_sigma())?.lam_min();
        if lam_min >= perturb || lam_min > 0.0 && lam_min >= perturb * (1.0 - 1e-12) {
            return Ok(out);
        }
        // Adding c·I to Diag(ρ) shifts λ_min by exactly c; one pass suffices
        // modulo rounding, so the loop re-checks and tops up if needed.
        let k = ((perturb - lam_min) / perturb).ceil().max(1.0);
        let add = vec![k * perturb; out.n()];
        out.rho = out.rho.add_diag(&add);
    }
}

/// Weighted absolute sum Σ_ij ρ_ij |X_ij| over all entries.
pub(crate) fn weighted_abs_sum(rho: &SymMatrix, x: &SymMatrix) -> f64 {
    rho.as_slice()
        .iter()
        .zip(x.as_slice())
        .map(|(r, v)| r * v.abs())
        .sum()
}

/// Penalized objective log det X − ⟨Σ, X⟩ − Σ_ij ρ_ij |X_ij| (sum over ALL
/// entries, `Ω` and diagonal included); −∞ when X is not positive definite.
pub fn f_penalized(inst: &Instance, x: &SymMatrix) -> Result<f64> {
    if x.n() != inst.n() {
        return Err(Error::InvalidInput(format!(
            "X is {}x{0}, instance is {1}x{1}",
            x.n(),
            inst.n()
        )));
    }
    let eig = sym_eigen(x)?;
    if eig.lam_min() <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let log_det: f64 = eig.lambda.iter().map(|l| l.ln()).sum();
    Ok(log_det - inst.sigma.inner(x) - weighted_abs_sum(&inst.rho, x))
}

/// Constrained objective: log det X − ⟨Σ, X⟩ − Σ_{(i,j)∉Ω} ρ_ij |X_ij|, with a
/// −∞ sentinel when X is not positive definite or violates the zero
/// constraints beyond [`FEASIBILITY_TOL`].
pub fn f_constrained(inst: &Instance, x: &SymMatrix) -> Result<f64> {
    if x.n() != inst.n() {
        return Err(Error::InvalidInput(format!(
            "X is {}x{0}, instance is {1}x{1}",
            x.n(),
            inst.n()
        )));
    }
    if max_abs_on_set(x, &inst.omega)? > FEASIBILITY_TOL {
        return Ok(f64::NEG_INFINITY);
    }
    let eig = sym_eigen(x)?;
    if eig.lam_min() <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let log_det: f64 = eig.lambda.iter().map(|l| l.ln()).sum();
    let mut penalty = weighted_abs_sum(&inst.rho, x);
    for (i, j) in inst.omega.iter() {
        penalty -= inst.rho.get(i, j) * x.get(i, j).abs();
    }
    Ok(log_det - inst.sigma.inner(x) - penalty)
}

/// φ(X, U) = log det X − ⟨Σ + ρ∗U, X⟩, the saddle function underlying the
/// dual machinery.
pub fn phi(inst: &Instance, x: &SymMatrix, u: &SymMatrix) -> Result<f64> {
    if x.n() != inst.n() || u.n() != inst.n() {
        return Err(Error::InvalidInput("dimension mismatch in phi".into()));
    }
    let eig = sym_eigen(x)?;
    if eig.lam_min() <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "phi requires positive definite X (lambda_min = {:.3e})",
            eig.lam_min()
        )));
    }
    let log_det: f64 = eig.lambda.iter().map(|l| l.ln()).sum();
    let pu = crate::linalg::pointwise_product(&inst.rho, u)?;
    Ok(log_det - inst.sigma.inner(x) - pu.inner(x))
}

/// Largest root of `log t − a·t − vartheta = 0` for `a > 0`, together with a
/// degeneracy flag. The function peaks at `t = 1/a` with value
/// `−1 − log a − vartheta`; when that peak is negative beyond tolerance there
/// is no root and the maximizer itself is returned with the flag set.
pub fn largest_root_log_linear(a: f64, vartheta: f64) -> Result<(f64, bool)> {
    if !(a > 0.0) || !a.is_finite() || !vartheta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "root solve needs finite a > 0 and finite vartheta, got a={a}, vartheta={vartheta}"
        )));
    }
    let h = |t: f64| t.ln() - a * t - vartheta;
    let t_peak = 1.0 / a;
    let h_peak = -1.0 - a.ln() - vartheta;
    let tol = 1e-8 * (1.0 + vartheta.abs());
    if h_peak <= 0.0 {
        // At or below zero at the maximizer: the double root collapses onto
        // the peak; beyond tolerance there is no root at all.
        return Ok((t_peak, h_peak < -tol));
    }
    // h is strictly decreasing right of the peak and h → −∞, so doubling
    // finds a sign change.
    let mut lo = t_peak;
    let mut hi = 2.0 * t_peak;
    let mut guard = 0;
    while h(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 2000 || !hi.is_finite() {
            return Err(Error::NumericalFailure(
                "no upper bracket for the beta root".into(),
            ));
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if h(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton polish; h'(t) = 1/t − a < 0 on the bracket.
    let mut t = 0.5 * (lo + hi);
    for _ in 0..5 {
        let hp = 1.0 / t - a;
        if hp == 0.0 {
            break;
        }
        let step = h(t) / hp;
        let next = t - step;
        if next.is_finite() && next >= lo && next <= hi {
            t = next;
        }
    }
    Ok((t, false))
}

/// Solution bounds α_ρ, β_ρ (with ϑ, θ) for a validated instance.
///
/// Norm convention: both ‖Σ‖ and ‖ρ‖ in α_ρ are spectral (operator) norms of
/// the full matrices; for ρ this is a documented choice of operator norm over
/// the alternatives.
pub fn compute_bounds(inst: &Instance) -> Result<Bounds> {
    let n = inst.n() as f64;
    let shifted = inst.shifted_sigma();
    let eig = sym_eigen(&shifted)?;
    let lam_min_shift = eig.lam_min();
    if lam_min_shift <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "instance not validated: lambda_min(Sigma + Diag(rho)) = {lam_min_shift:.3e}"
        )));
    }
    let alpha = 1.0 / (spectral_norm(&inst.sigma)? + spectral_norm(&inst.rho)?);

    let trace_sum = inst.sigma.trace() + inst.rho.trace();
    let theta = n * (-1.0 - trace_sum.ln() + n.ln());

    let inv_spectrum: Vec<f64> = eig.lambda.iter().map(|l| 1.0 / l).collect();
    let inv_shifted = eig.recompose(&inv_spectrum);
    let f_inv = f_penalized(inst, &inv_shifted)?;

    let vartheta = f_inv.max(theta) - (n - 1.0) * (-1.0 - lam_min_shift.ln());
    let (root, degenerate) = largest_root_log_linear(lam_min_shift, vartheta)?;
    let beta = root.max(alpha);
    Ok(Bounds { alpha, beta, vartheta, theta, lam_min_shift, degenerate })
}
