//! The dual oracle: one eigendecomposition yields the box-constrained primal
//! maximizer X_β(U), the dual value g_{ρ,β}(U), its gradient, the penalized
//! primal value, and the activity flag that drives β adaptation.
//!
//! For U in the unit box 𝒰, the dual function is
//!
//! ```text
//!   g_{ρ,β}(U) = max { φ(X, U) : α I ⪯ X ⪯ β I },
//!   φ(X, U)    = log det X − ⟨Σ + ρ∗U, X⟩.
//! ```
//!
//! Writing Σ + ρ∗U = Q·diag(d)·Qᵀ, the maximizer is spectral and separable:
//! each eigenvalue solves max { log x − d_i x : x ∈ [α, β] }, whose solution
//! is 1/d_i clamped into the box (with d_i ≤ 0 sent to β, since the scalar
//! objective is then increasing). The clamp is applied upper-bound last, so a
//! transient β < α stays well defined during adaptive β schedules. The dual
//! value is evaluated in the eigenbasis, Σ_i (log x_i − d_i x_i), which costs
//! nothing beyond the one decomposition; the gradient is −ρ∗X by Danskin's
//! rule.

use crate::linalg::{pointwise_product, sym_eigen, SymMatrix};
use crate::problem::{weighted_abs_sum, Instance};
use crate::{Error, Result};

/// Relative tolerance deciding whether λ_max(X) sits on the β bound.
pub const ACTIVITY_REL_TOL: f64 = 1e-9;

/// Slack allowed on membership of U in the unit box.
pub const BOX_TOL: f64 = 1e-12;

/// Everything one dual function evaluation produces.
#[derive(Debug, Clone)]
pub struct OracleEval {
    /// Primal maximizer X_β(U) of φ(·, U) over the spectral box.
    pub x: SymMatrix,
    /// Dual value g_{ρ,β}(U).
    pub g: f64,
    /// Gradient ∇g_{ρ,β}(U) = −ρ∗X.
    pub grad: SymMatrix,
    /// Penalized primal objective at X.
    pub f: f64,
    /// λ_max(X), exact from the clamped spectrum.
    pub lam_max: f64,
    /// True when λ_max(X) ≥ β(1 − 1e-9) and β < β_ρ: the spectral cap binds
    /// and can still be raised.
    pub active: bool,
}

/// Evaluates the dual oracle at U for the box [alpha, beta], with beta_rho
/// deciding activity. One eigendecomposition per call.
pub fn eval(
    inst: &Instance,
    u: &SymMatrix,
    alpha: f64,
    beta: f64,
    beta_rho: f64,
) -> Result<OracleEval> {
    if u.n() != inst.n() {
        return Err(Error::InvalidInput(format!(
            "U is {}x{0}, instance is {1}x{1}",
            u.n(),
            inst.n()
        )));
    }
    if u.max_abs() > 1.0 + BOX_TOL {
        return Err(Error::InvalidInput(format!(
            "U outside the unit box: max |U_ij| = {}",
            u.max_abs()
        )));
    }
    if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "spectral bounds must be positive and finite, got alpha={alpha}, beta={beta}"
        )));
    }

    let d_mat = inst.sigma().add_scaled(1.0, &pointwise_product(inst.rho(), u)?);
    let eig = sym_eigen(&d_mat)?;

    let mut spectrum = Vec::with_capacity(inst.n());
    let mut g = 0.0;
    let mut log_det = 0.0;
    let mut lam_max = f64::NEG_INFINITY;
    for &d in &eig.lambda {
        // Upper bound applied last: d ≤ 0 maps to β, and β < α resolves to β.
        let x = if d <= 0.0 { beta } else { beta.min(alpha.max(1.0 / d)) };
        g += x.ln() - d * x;
        log_det += x.ln();
        lam_max = lam_max.max(x);
        spectrum.push(x);
    }
    let x = eig.recompose(&spectrum);
    let grad = pointwise_product(inst.rho(), &x)?.scale(-1.0);
    let f = log_det - inst.sigma().inner(&x) - weighted_abs_sum(inst.rho(), &x);
    let active = lam_max >= beta * (1.0 - ACTIVITY_REL_TOL) && beta < beta_rho;

    debug_assert!(
        g - f >= -1e-9 * (1.0 + g.abs()),
        "weak duality violated: g = {g}, f = {f}"
    );
    Ok(OracleEval { x, g, grad, f, lam_max, active })
}

/// Duality gap g − f at an evaluated pair; nonnegative up to roundoff.
pub fn duality_gap(ev: &OracleEval) -> f64 {
    ev.g - ev.f
}
