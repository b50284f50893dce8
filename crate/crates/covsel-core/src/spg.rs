//! Spectral projected gradient inner solver and its adaptive-β wrapper.
//!
//! [`spg_solve`] minimizes the dual g_{ρ,β} over the unit box for a fixed β:
//! nonmonotone line search over the last M dual values, safeguarded quadratic
//! backtracking, and Barzilai-Borwein step lengths clamped to
//! [α_min, α_max]. [`aspg_solve`] wraps it, multiplying β by r_β (capped at
//! β_ρ) whenever the solution of the β-truncated problem presses against the
//! spectral cap, so the final pair is optimal for the untruncated problem.

use std::collections::VecDeque;

use serde::Serialize;

use crate::linalg::{project_onto_u, SymMatrix};
use crate::oracle::{duality_gap, eval, OracleEval};
use crate::problem::{Bounds, Instance};
use crate::{Error, Result};

/// Line-search and step-length parameters.
#[derive(Debug, Clone)]
pub struct SpgParams {
    /// Sufficient-decrease constant γ ∈ (0, 1).
    pub gamma: f64,
    /// Nonmonotone window M ≥ 1: the acceptance reference is the max dual
    /// value over the last min(k+1, M) iterates.
    pub window: usize,
    /// Backtracking safeguards 0 < σ1 < σ2 < 1.
    pub sigma1: f64,
    pub sigma2: f64,
    /// Clamps for the BB step length.
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Initial step length; `None` uses the scale-free 1/‖∇g(U_0)‖_∞.
    pub alpha0: Option<f64>,
    pub max_iter: usize,
    pub max_feval: usize,
}

impl Default for SpgParams {
    fn default() -> Self {
        SpgParams {
            gamma: 1e-4,
            window: 8,
            sigma1: 0.1,
            sigma2: 0.9,
            alpha_min: 1e-15,
            alpha_max: 1e15,
            alpha0: None,
            max_iter: 50_000,
            max_feval: 100_000,
        }
    }
}

impl SpgParams {
    fn check(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidInput(format!("gamma must be in (0,1), got {}", self.gamma)));
        }
        if self.window < 1 {
            return Err(Error::InvalidInput("nonmonotone window must be >= 1".into()));
        }
        if !(0.0 < self.sigma1 && self.sigma1 < self.sigma2 && self.sigma2 < 1.0) {
            return Err(Error::InvalidInput(format!(
                "need 0 < sigma1 < sigma2 < 1, got {} and {}",
                self.sigma1, self.sigma2
            )));
        }
        if !(0.0 < self.alpha_min && self.alpha_min <= self.alpha_max) {
            return Err(Error::InvalidInput(format!(
                "need 0 < alpha_min <= alpha_max, got {} and {}",
                self.alpha_min, self.alpha_max
            )));
        }
        Ok(())
    }
}

/// One per-iteration trace entry; `accept_bound` is the nonmonotone bound
/// that admitted the iterate (None for initial points and ANS records).
#[derive(Debug, Clone, Serialize)]
pub struct TraceRecord {
    pub iter: usize,
    /// Counter within the current β stage (resets on β changes).
    pub inner_k: usize,
    pub beta: f64,
    pub g: f64,
    pub f: f64,
    pub gap: f64,
    pub lam_max: f64,
    pub accept_bound: Option<f64>,
}

/// Outcome of an inner solve (SPG, ASPG, or ANS).
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Dual iterate attaining `gap`.
    pub u: SymMatrix,
    /// Oracle evaluation at `u` (primal X, values, gradient).
    pub eval: OracleEval,
    pub iterations: usize,
    /// Oracle evaluations consumed (one eigendecomposition each).
    pub fevals: usize,
    pub gap: f64,
    pub beta_final: f64,
    /// True only when `gap` ≤ the requested ε.
    pub converged: bool,
    pub trace: Option<Vec<TraceRecord>>,
}

fn record(iter: usize, inner_k: usize, beta: f64, ev: &OracleEval, accept_bound: Option<f64>) -> TraceRecord {
    TraceRecord {
        iter,
        inner_k,
        beta,
        g: ev.g,
        f: ev.f,
        gap: duality_gap(ev),
        lam_max: ev.lam_max,
        accept_bound,
    }
}

/// Safeguarded quadratic interpolation for the backtracking step: minimizes
/// the quadratic through (0, g0) with slope `dir_deriv` and (lambda, g_try),
/// clamped into [σ1·λ, σ2·λ]; falls back to λ/2 when degenerate.
fn next_lambda(lambda: f64, g0: f64, dir_deriv: f64, g_try: f64, sigma1: f64, sigma2: f64) -> f64 {
    let denom = 2.0 * (g_try - g0 - dir_deriv * lambda);
    let candidate = if denom > 0.0 {
        -dir_deriv * lambda * lambda / denom
    } else {
        f64::NAN
    };
    if candidate.is_finite() {
        candidate.clamp(sigma1 * lambda, sigma2 * lambda)
    } else {
        0.5 * lambda
    }
}

/// SPG for fixed β: minimizes g_{ρ,β} over 𝒰 until the duality gap at the
/// current pair drops to `eps_o`. Hitting an iteration or evaluation cap
/// returns `converged = false` with the best pair seen.
pub fn spg_solve(
    inst: &Instance,
    alpha: f64,
    beta: f64,
    beta_rho: f64,
    u0: &SymMatrix,
    eps_o: f64,
    p: &SpgParams,
) -> Result<SolveReport> {
    p.check()?;
    if !(eps_o > 0.0) {
        return Err(Error::InvalidInput(format!("eps_o must be positive, got {eps_o}")));
    }

    let mut u = project_onto_u(u0);
    let mut ev = eval(inst, &u, alpha, beta, beta_rho)?;
    let mut fevals = 1usize;
    let mut iterations = 0usize;
    let mut trace = vec![record(0, 0, beta, &ev, None)];

    let mut history: VecDeque<f64> = VecDeque::with_capacity(p.window + 1);
    history.push_back(ev.g);

    let mut best_u = u.clone();
    let mut best_ev = ev.clone();
    let mut best_gap = duality_gap(&ev);

    let mut step = match p.alpha0 {
        Some(a) => a.clamp(p.alpha_min, p.alpha_max),
        None => {
            let gn = ev.grad.max_abs();
            if gn > 0.0 {
                (1.0 / gn).clamp(p.alpha_min, p.alpha_max)
            } else {
                1.0
            }
        }
    };

    let finish = |u: SymMatrix,
                  ev: OracleEval,
                  iterations: usize,
                  fevals: usize,
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
        let gap = duality_gap(&ev);
        if gap < best_gap {
            best_gap = gap;
            best_u = u.clone();
            best_ev = ev.clone();
        }
        if gap <= eps_o {
            return Ok(finish(u, ev, iterations, fevals, true, trace));
        }
        if iterations >= p.max_iter || fevals >= p.max_feval {
            return Ok(finish(best_u, best_ev, iterations, fevals, false, trace));
        }

        let d = project_onto_u(&u.add_scaled(-step, &ev.grad)).add_scaled(-1.0, &u);
        let dir_deriv = d.inner(&ev.grad);
        if d.frob_norm() <= 1e-15 * (1.0 + u.frob_norm()) || dir_deriv >= 0.0 {
            // Stationary point of the convex dual; the gap test above did not
            // pass, so report the numerical floor without claiming success.
            return Ok(finish(best_u, best_ev, iterations, fevals, false, trace));
        }

        let g_ref = history.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut lambda = 1.0;
        let mut accepted: Option<(SymMatrix, OracleEval, f64)> = None;
        for _ in 0..=60 {
            // u + λd is a convex combination of box points; project anyway to
            // keep the membership exact under rounding.
            let u_try = project_onto_u(&u.add_scaled(lambda, &d));
            let ev_try = eval(inst, &u_try, alpha, beta, beta_rho)?;
            fevals += 1;
            let bound = g_ref + p.gamma * lambda * dir_deriv;
            if ev_try.g <= bound {
                accepted = Some((u_try, ev_try, bound));
                break;
            }
            if fevals >= p.max_feval {
                return Ok(finish(best_u, best_ev, iterations, fevals, false, trace));
            }
            lambda = next_lambda(lambda, ev.g, dir_deriv, ev_try.g, p.sigma1, p.sigma2);
        }
        let Some((u_new, ev_new, bound)) = accepted else {
            return Err(Error::StalledLineSearch { iteration: iterations, lambda });
        };

        let s = u_new.add_scaled(-1.0, &u);
        let y = ev_new.grad.add_scaled(-1.0, &ev.grad);
        let b_k = s.inner(&y);
        step = if b_k <= 0.0 {
            p.alpha_max
        } else {
            (s.inner(&s) / b_k).clamp(p.alpha_min, p.alpha_max)
        };

        u = u_new;
        ev = ev_new;
        iterations += 1;
        history.push_back(ev.g);
        if history.len() > p.window {
            history.pop_front();
        }
        trace.push(record(iterations, iterations, beta, &ev, Some(bound)));
    }
}

/// Adaptive-β SPG: runs [`spg_solve`] stages with β escalating by r_β (capped
/// at β_ρ = `bounds.beta`) until the primal iterate leaves the spectral cap or
/// the cap reaches β_ρ, at which point the pair is optimal for the
/// untruncated penalized problem.
pub fn aspg_solve(
    inst: &Instance,
    bounds: &Bounds,
    u0: &SymMatrix,
    eps_o: f64,
    beta0: f64,
    r_beta: f64,
    p: &SpgParams,
) -> Result<SolveReport> {
    if !(r_beta > 1.0) {
        return Err(Error::InvalidInput(format!("r_beta must exceed 1, got {r_beta}")));
    }
    if !(beta0 > 0.0) || !beta0.is_finite() {
        return Err(Error::InvalidInput(format!("beta0 must be positive, got {beta0}")));
    }
    let beta_rho = bounds.beta;
    let mut beta = beta0.min(beta_rho);
    let mut u = u0.clone();
    let mut total_iter = 0usize;
    let mut total_fev = 0usize;
    let mut trace: Vec<TraceRecord> = Vec::new();

    loop {
        let rep = spg_solve(inst, bounds.alpha, beta, beta_rho, &u, eps_o, p)?;
        total_iter += rep.iterations;
        total_fev += rep.fevals;
        if let Some(t) = rep.trace {
            trace.extend(t);
        }
        u = rep.u;

        let done = !rep.converged || !rep.eval.active;
        if done {
            for (i, r) in trace.iter_mut().enumerate() {
                r.iter = i;
            }
            return Ok(SolveReport {
                u,
                eval: rep.eval,
                iterations: total_iter,
                fevals: total_fev,
                gap: rep.gap,
                beta_final: beta,
                converged: rep.converged,
                trace: Some(trace),
            });
        }
        beta = (beta * r_beta).min(beta_rho);
    }
}
