//! Adaptive Nesterov smoothing solver for the dual problem.
//!
//! On a fixed spectral box the dual g_{ρ,β} is smooth with Lipschitz-constant
//! gradient, L = β²ρ_max², so Nesterov's accelerated scheme applies: each
//! iteration combines a projected gradient point with a prox-center point
//! aggregating all past gradients. Two adaptations wrap the scheme. When the
//! primal iterate presses against the cap (active), β is expanded by the
//! smallest power of ς1 making it inactive (capped at β_ρ). When the iterate
//! uses only a ς3 fraction of the cap, β shrinks toward ς2·λ_max. Every β
//! change resets the inner counter, the prox center, and the gradient
//! aggregate, and re-derives L.
//!
//! Counting convention: `fevals` counts every oracle evaluation, including
//! the probes spent searching for the expansion exponent in step 1a.

use crate::linalg::{project_onto_u, SymMatrix};
use crate::oracle::{duality_gap, eval, OracleEval};
use crate::problem::{Bounds, Instance};
use crate::spg::{SolveReport, TraceRecord};
use crate::{Error, Result};

/// Prox strong-convexity constant σ; a named parameter of the scheme that
/// stays fixed at 1.
pub const ANS_SIGMA: f64 = 1.0;

/// Adaptation parameters.
#[derive(Debug, Clone)]
pub struct AnsParams {
    /// β expansion factor ς1 > 1 (step 1a).
    pub varsigma1: f64,
    /// β re-centering factor ς2 > 1 (step 1b).
    pub varsigma2: f64,
    /// Shrink trigger ς3 ∈ (0, 1): shrink when λ_max ≤ ς3·β.
    pub varsigma3: f64,
    pub max_iter: usize,
    pub max_feval: usize,
}

impl Default for AnsParams {
    fn default() -> Self {
        AnsParams {
            varsigma1: 1.05,
            varsigma2: 1.05,
            varsigma3: 0.95,
            max_iter: 50_000,
            max_feval: 100_000,
        }
    }
}

impl AnsParams {
    fn check(&self) -> Result<()> {
        if !(self.varsigma1 > 1.0 && self.varsigma2 > 1.0) {
            return Err(Error::InvalidInput(format!(
                "varsigma1 and varsigma2 must exceed 1, got {} and {}",
                self.varsigma1, self.varsigma2
            )));
        }
        if !(self.varsigma3 > 0.0 && self.varsigma3 < 1.0) {
            return Err(Error::InvalidInput(format!(
                "varsigma3 must be in (0,1), got {}",
                self.varsigma3
            )));
        }
        Ok(())
    }
}

/// Per-β state of the accelerated scheme; reset whenever β changes.
#[derive(Debug, Clone)]
struct AnsState {
    /// Prox center U_0 of the current β phase.
    u0: SymMatrix,
    /// Inner iteration counter k.
    k: usize,
    /// Lipschitz constant L = β²ρ_max².
    l: f64,
    /// Running Σ_{i≤k} (i+1)/2 · ∇g(U_i).
    grad_accum: SymMatrix,
}

impl AnsState {
    fn reset(u: &SymMatrix, beta: f64, rho_max: f64) -> Self {
        AnsState {
            u0: u.clone(),
            k: 0,
            l: lipschitz(beta, rho_max),
            grad_accum: SymMatrix::zeros(u.n()),
        }
    }
}

fn lipschitz(beta: f64, rho_max: f64) -> f64 {
    let l = beta * beta * rho_max * rho_max;
    // rho ≡ 0 makes the gradient identically zero and the solve terminates at
    // the first gap test; a unit L merely keeps the arithmetic finite.
    if l > 0.0 {
        l
    } else {
        1.0
    }
}

/// Closed form of the step-4 subproblem: the aggregate point
/// argmin over 𝒰 of (L/2σ)‖U − U0‖²_F + ⟨grad_accum, U⟩, which separates per
/// entry into a clamped unconstrained minimum.
pub fn aggregate_point(u0: &SymMatrix, grad_accum: &SymMatrix, l_over_sigma: f64) -> SymMatrix {
    project_onto_u(&u0.add_scaled(-1.0 / l_over_sigma, grad_accum))
}

fn record(iter: usize, inner_k: usize, beta: f64, ev: &OracleEval) -> TraceRecord {
    TraceRecord {
        iter,
        inner_k,
        beta,
        g: ev.g,
        f: ev.f,
        gap: duality_gap(ev),
        lam_max: ev.lam_max,
        accept_bound: None,
    }
}

/// Runs the adaptive Nesterov scheme from `u_init` until the duality gap at
/// the current pair reaches `eps_o`, adapting β inside [α_ρ, β_ρ]. Hitting a
/// cap returns `converged = false` with the best pair seen.
pub fn ans_solve(
    inst: &Instance,
    bounds: &Bounds,
    u_init: &SymMatrix,
    beta_init: f64,
    eps_o: f64,
    p: &AnsParams,
) -> Result<SolveReport> {
    p.check()?;
    if !(eps_o > 0.0) {
        return Err(Error::InvalidInput(format!("eps_o must be positive, got {eps_o}")));
    }
    if !beta_init.is_finite() || beta_init <= 0.0 {
        return Err(Error::InvalidInput(format!("beta_init must be positive, got {beta_init}")));
    }

    let beta_rho = bounds.beta;
    let rho_max = inst.rho_max();
    let mut beta = beta_init.clamp(bounds.alpha, beta_rho);

    let mut u = project_onto_u(u_init);
    let mut state = AnsState::reset(&u, beta, rho_max);
    let mut iterations = 0usize;
    let mut fevals = 1usize;
    let mut trace: Vec<TraceRecord> = Vec::new();

    let mut ev = eval(inst, &u, bounds.alpha, beta, beta_rho)?;
    let mut best_u = u.clone();
    let mut best_ev = ev.clone();
    let mut best_gap = duality_gap(&ev);

    let finish = |u: SymMatrix,
                  ev: OracleEval,
                  iterations: usize,
                  fevals: usize,
                  beta: f64,
                  converged: bool,
                  trace: Vec<TraceRecord>| {
        let gap = duality_gap(&ev);
        SolveReport {
            u,
            eval: ev,
            iterations,
            fevals,
            gap,
            beta_final: beta,
            converged,
            trace: Some(trace),
        }
    };

    loop {
        // Step 1a: expand an active cap by the smallest power of ς1 that
        // frees the iterate, then restart the scheme at the same U.
        if ev.active {
            loop {
                let beta_bar = (p.varsigma1 * beta).min(beta_rho);
                let probe = eval(inst, &u, bounds.alpha, beta_bar, beta_rho)?;
                fevals += 1;
                beta = beta_bar;
                ev = probe;
                if !ev.active {
                    break;
                }
                if fevals >= p.max_feval {
                    return Ok(finish(best_u, best_ev, iterations, fevals, beta, false, trace));
                }
            }
            state = AnsState::reset(&u, beta, rho_max);
            // Fall through to the gap test; step 1b is skipped on this pass.
        } else if ev.lam_max <= p.varsigma3 * beta {
            // Step 1b: the iterate uses a ς3 fraction of the cap at most;
            // shrink toward it. No eigenvalue of X sits above the new cap
            // (λ_max < new β by ς2 > 1), so the evaluation stays valid.
            beta = (p.varsigma2 * ev.lam_max).min(beta_rho).max(bounds.alpha);
            state = AnsState::reset(&u, beta, rho_max);
        }
        debug_assert!(
            rho_max == 0.0 || state.l == beta * beta * rho_max * rho_max,
            "Lipschitz constant out of sync with beta"
        );
        debug_assert!(beta >= bounds.alpha && beta <= beta_rho);

        trace.push(record(iterations, state.k, beta, &ev));
        let gap = duality_gap(&ev);
        if gap < best_gap {
            best_gap = gap;
            best_u = u.clone();
            best_ev = ev.clone();
        }
        if gap <= eps_o {
            return Ok(finish(u, ev, iterations, fevals, beta, true, trace));
        }
        if iterations >= p.max_iter || fevals >= p.max_feval {
            return Ok(finish(best_u, best_ev, iterations, fevals, beta, false, trace));
        }

        // Step 3: projected gradient point.
        let u_sd = project_onto_u(&u.add_scaled(-1.0 / state.l, &ev.grad));
        // Step 4: aggregate point from the prox center.
        state
            .grad_accum
            .axpy((state.k as f64 + 1.0) / 2.0, &ev.grad);
        let u_ag = aggregate_point(&state.u0, &state.grad_accum, state.l / ANS_SIGMA);
        // Step 5: convex combination (weights sum to one, so the iterate
        // stays in the box; the projection only removes rounding).
        let kf = state.k as f64;
        u = project_onto_u(&SymMatrix::lin_comb(
            2.0 / (kf + 3.0),
            &u_ag,
            (kf + 1.0) / (kf + 3.0),
            &u_sd,
        ));

        state.k += 1;
        iterations += 1;
        ev = eval(inst, &u, bounds.alpha, beta, beta_rho)?;
        fevals += 1;
    }
}
