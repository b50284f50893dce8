//! Outer adaptive-penalty loop for the constrained selection problem.
//!
//! Entries indexed by Ω must vanish in the estimate. Instead of solving the
//! constrained program directly, each outer stage solves the fully penalized
//! problem with the current penalty levels on Ω, checks the largest |X_ij|
//! over Ω, and multiplies those penalty levels by r_ρ until the violation
//! drops below ε_c. Dual iterates transfer between stages: entries on Ω are
//! divided by r_ρ (the penalty grew by that factor, so the scaled entry keeps
//! the product ρ_ij·U_ij intact), and the spectral cap restarts from the last
//! primal λ_max. A final post-processing step zeroes Ω exactly and shifts the
//! diagonal to the likelihood-maximizing t*, restoring positive definiteness.

use crate::ans::{ans_solve, AnsParams};
use crate::linalg::{max_abs_on_set, sym_eigen, PairSet, SymMatrix};
use crate::problem::{compute_bounds, Instance};
use crate::spg::{aspg_solve, SolveReport, SpgParams};
use crate::{Error, Result};

/// Inner solver choice with its parameters.
#[derive(Debug, Clone)]
pub enum Method {
    Aspg(SpgParams),
    Ans(AnsParams),
}

impl Default for Method {
    fn default() -> Self {
        Method::Aspg(SpgParams::default())
    }
}

/// Outer-loop parameters.
#[derive(Debug, Clone)]
pub struct GsicsParams {
    /// Duality-gap target passed to every inner solve.
    pub eps_o: f64,
    /// Constraint tolerance: stop once max |X_ij| over Ω is below this.
    pub eps_c: f64,
    /// Penalty escalation ratio r_ρ > 1.
    pub r_rho: f64,
    /// Initial penalty level ρ⁰ placed on every Ω entry.
    pub rho0_omega: f64,
    pub method: Method,
    pub max_outer: usize,
    /// Spectral cap for the very first stage (later stages warm start).
    pub beta0: f64,
    /// Cap escalation ratio for the ASPG inner solver.
    pub r_beta: f64,
}

impl Default for GsicsParams {
    fn default() -> Self {
        GsicsParams {
            eps_o: 0.1,
            eps_c: 1e-4,
            r_rho: 2.0,
            rho0_omega: 0.5,
            method: Method::default(),
            max_outer: 30,
            beta0: 1.0,
            r_beta: 10.0,
        }
    }
}

impl GsicsParams {
    fn check(&self) -> Result<()> {
        if !(self.eps_o > 0.0 && self.eps_c > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be positive, got eps_o = {}, eps_c = {}",
                self.eps_o, self.eps_c
            )));
        }
        if !(self.r_rho > 1.0) {
            return Err(Error::InvalidInput(format!("r_rho must exceed 1, got {}", self.r_rho)));
        }
        if !(self.rho0_omega > 0.0) {
            return Err(Error::InvalidInput(format!(
                "rho0_omega must be positive, got {}",
                self.rho0_omega
            )));
        }
        if self.max_outer == 0 {
            return Err(Error::InvalidInput("max_outer must be at least 1".into()));
        }
        Ok(())
    }
}

/// Final output of the outer loop.
#[derive(Debug, Clone)]
pub struct EstimationResult {
    /// Solution of the last penalized stage: Ω entries below ε_c but not
    /// exactly zero.
    pub x_approx: SymMatrix,
    /// Post-processed solution: exactly zero on Ω and positive definite.
    pub x_star: SymMatrix,
    /// Diagonal shift applied by post-processing.
    pub t_star: f64,
    pub outer_iters: usize,
    /// One report per outer stage, in order.
    pub inner_reports: Vec<SolveReport>,
    /// Penalty level on Ω at the final stage.
    pub final_rho_omega: f64,
}

/// Transfers the previous stage's dual iterate across a penalty escalation:
/// Ω entries are divided by r_ρ (keeping the product ρ_ij·U_ij and hence the
/// dual matrix Σ + ρ∗U unchanged there), the rest copy over, and the new cap
/// starts from the previous primal λ_max floored by the new α.
pub fn warm_start(
    prev_u: &SymMatrix,
    prev_lam_max: f64,
    r_rho: f64,
    omega: &PairSet,
    new_alpha: f64,
) -> Result<(SymMatrix, f64)> {
    if !(r_rho > 1.0) {
        return Err(Error::InvalidInput(format!("r_rho must exceed 1, got {r_rho}")));
    }
    if prev_u.max_abs() > 1.0 + 1e-12 {
        return Err(Error::InvalidInput("warm start point leaves the dual box".into()));
    }
    if let Some(m) = omega.max_index() {
        if m >= prev_u.n() {
            return Err(Error::InvalidInput("omega indexes beyond the matrix".into()));
        }
    }
    let mut u0 = prev_u.clone();
    for (i, j) in omega.iter() {
        // set() mirrors, so touching each unordered pair once suffices.
        if i <= j {
            u0.set(i, j, prev_u.get(i, j) / r_rho);
        }
    }
    Ok((u0, new_alpha.max(prev_lam_max)))
}

/// Zeroes the Ω entries of `x_approx` exactly, then shifts the diagonal by
/// the t* maximizing log det(X̃+tI) − ⟨Σ, X̃+tI⟩. Stationarity reads
/// Σ_i 1/(λ_i+t) = Tr(Σ); the left side is strictly decreasing on
/// t ∈ (−λ_min(X̃), ∞) and spans (+∞, 0), so the root is unique. Returns
/// (X̃ + t*·I, t*); the result is positive definite.
pub fn post_process(
    inst: &Instance,
    x_approx: &SymMatrix,
    omega: &PairSet,
) -> Result<(SymMatrix, f64)> {
    if x_approx.n() != inst.n() {
        return Err(Error::InvalidInput("dimension mismatch in post_process".into()));
    }
    if let Some(m) = omega.max_index() {
        if m >= x_approx.n() {
            return Err(Error::InvalidInput("omega indexes beyond the matrix".into()));
        }
    }
    let tr_sigma = inst.sigma().trace();
    if !(tr_sigma > 0.0) {
        return Err(Error::DegenerateTrace(tr_sigma));
    }

    let mut xt = x_approx.clone();
    for (i, j) in omega.iter() {
        if i <= j {
            xt.set(i, j, 0.0);
        }
    }
    let dec = sym_eigen(&xt)?;
    let lam = &dec.lambda;
    let lam_min = dec.lam_min();
    let scale = 1.0 + lam.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    // Derivative of the shifted likelihood in t.
    let slope = |t: f64| lam.iter().map(|l| 1.0 / (l + t)).sum::<f64>() - tr_sigma;

    // Bracket the root: just above the pole the slope is +∞ in exact
    // arithmetic; shrink the offset if Tr(Σ) is large enough to beat 1/δ.
    let mut delta = 1e-12 * scale;
    let mut lo = -lam_min + delta;
    let mut guard = 0;
    while slope(lo) <= 0.0 {
        delta *= 1e-3;
        lo = -lam_min + delta;
        guard += 1;
        if guard > 8 {
            return Err(Error::NumericalFailure(
                "post-process root bracket collapsed at the pole".into(),
            ));
        }
    }
    let mut hi = lo + scale;
    guard = 0;
    while slope(hi) >= 0.0 {
        hi = lo + (hi - lo) * 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NumericalFailure(
                "post-process slope stayed positive while doubling".into(),
            ));
        }
    }
    // Invariant: slope(lo) > 0 ≥ slope(hi).
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..5 {
        let s = slope(t);
        let d: f64 = lam.iter().map(|l| -1.0 / ((l + t) * (l + t))).sum();
        if !(d < 0.0) {
            break;
        }
        let next = t - s / d;
        if next.is_finite() {
            // The root stays inside the bisection bracket.
            t = next.clamp(lo, hi);
        }
    }
    Ok((xt.shift_diag(t), t))
}

/// Runs the outer penalty loop on a validated instance. The penalty on Ω is
/// initialized to `p.rho0_omega` regardless of what `inst.rho()` holds there.
///
/// Errors: an inner solve stopping on its caps yields [`Error::CapsExceeded`];
/// running out of outer stages yields [`Error::PenaltyDivergence`]. Both
/// attach the best post-processed estimate found.
pub fn gsics_solve(inst: &Instance, p: &GsicsParams) -> Result<EstimationResult> {
    p.check()?;
    let mut work = inst.with_rho_on_omega(p.rho0_omega)?;
    let mut rho_omega = p.rho0_omega;
    let mut inner_reports: Vec<SolveReport> = Vec::new();
    // Dual iterate and primal λ_max carried across an escalation.
    let mut carry: Option<(SymMatrix, f64)> = None;
    let mut last_violation = f64::INFINITY;

    for stage in 0..p.max_outer {
        let bounds = compute_bounds(&work)?;
        let (u0, beta0) = match &carry {
            None => (SymMatrix::zeros(inst.n()), p.beta0),
            Some((u_hat, lam)) => warm_start(u_hat, *lam, p.r_rho, inst.omega(), bounds.alpha)?,
        };
        let rep = match &p.method {
            Method::Aspg(sp) => aspg_solve(&work, &bounds, &u0, p.eps_o, beta0, p.r_beta, sp)?,
            Method::Ans(ap) => ans_solve(&work, &bounds, &u0, beta0, p.eps_o, ap)?,
        };
        let x = rep.eval.x.clone();
        let lam_max = rep.eval.lam_max;
        let u_hat = rep.u.clone();
        let converged = rep.converged;
        let gap = rep.gap;
        inner_reports.push(rep);

        if !converged {
            let best = finish(inst, x, inner_reports, stage + 1, rho_omega)?;
            return Err(Error::CapsExceeded { stage, gap, best: Box::new(best) });
        }

        let violation = max_abs_on_set(&x, inst.omega())?;
        last_violation = violation;
        if violation <= p.eps_c {
            return finish(inst, x, inner_reports, stage + 1, rho_omega);
        }
        work = work.scale_rho_on_omega(p.r_rho)?;
        rho_omega *= p.r_rho;
        carry = Some((u_hat, lam_max));
    }

    let x_last = inner_reports
        .last()
        .map(|r| r.eval.x.clone())
        .expect("max_outer >= 1 guarantees at least one stage");
    let best = finish(inst, x_last, inner_reports, p.max_outer, rho_omega)?;
    Err(Error::PenaltyDivergence {
        max_outer: p.max_outer,
        violation: last_violation,
        best: Box::new(best),
    })
}

fn finish(
    inst: &Instance,
    x_approx: SymMatrix,
    inner_reports: Vec<SolveReport>,
    outer_iters: usize,
    final_rho_omega: f64,
) -> Result<EstimationResult> {
    // With an empty Ω the penalized and constrained problems coincide and
    // x_approx is already the certified solution; the diagonal shift would
    // trade that optimality for raw likelihood. Shift only to repair zeroing.
    let (x_star, t_star) = if inst.omega().is_empty() {
        (x_approx.clone(), 0.0)
    } else {
        post_process(inst, &x_approx, inst.omega())?
    };
    Ok(EstimationResult {
        x_approx,
        x_star,
        t_star,
        outer_iters,
        inner_reports,
        final_rho_omega,
    })
}
