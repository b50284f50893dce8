//! Serialized outputs: result.json, meta.json, benchmark.csv rows, pattern
//! bitmaps, and recovery metrics.
//!
//! Everything written here is a pure function of the run configuration, so
//! repeated runs with the same flags produce byte-identical files. Wall-clock
//! timings are therefore kept out of result.json (they go to stderr and to
//! the benchmark CSV, which is documented as machine-dependent).

use covsel_core::gsics::EstimationResult;
use covsel_core::linalg::SymMatrix;
use covsel_core::problem::{f_constrained, f_penalized, Instance};
use covsel_core::spg::TraceRecord;
use covsel_core::Result;
use serde::Serialize;
use std::fs;
use std::path::Path;

/// Pixel threshold for the pattern bitmaps, aligned with the default
/// constraint tolerance so recovered patterns are consistent with the
/// termination criterion.
pub const PATTERN_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Serialize)]
pub struct MetaJson {
    pub n: usize,
    pub family: String,
    pub density: f64,
    pub tau: f64,
    pub vartheta_gen: f64,
    pub seed: u64,
    pub bandwidth: usize,
    /// Ordered-pair count (both orientations).
    pub omega_size: usize,
}

#[derive(Debug, Serialize)]
pub struct StageReport {
    pub iterations: usize,
    pub fevals: usize,
    pub gap: f64,
    pub beta_final: f64,
    pub converged: bool,
}

#[derive(Debug, Serialize)]
pub struct MethodReport {
    pub converged: bool,
    /// Objective of the constrained problem at the post-processed solution.
    pub objective: f64,
    /// Penalized objective at the last-stage solution (final penalty levels).
    pub objective_penalized: f64,
    /// Duality gap certified by the final stage.
    pub gap: f64,
    pub t_star: f64,
    pub outer_iters: usize,
    pub final_rho_omega: f64,
    pub total_iterations: usize,
    pub total_fevals: usize,
    pub stages: Vec<StageReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRecord>>,
}

impl MethodReport {
    /// Builds the JSON view of one estimation run. `inst` must carry the
    /// original penalty matrix (levels on the constrained set are rebuilt
    /// from `final_rho_omega`).
    pub fn build(inst: &Instance, res: &EstimationResult, with_trace: bool) -> Result<Self> {
        let final_inst = inst.with_rho_on_omega(res.final_rho_omega)?;
        let objective = f_constrained(&final_inst, &res.x_star)?;
        let objective_penalized = f_penalized(&final_inst, &res.x_approx)?;
        let last = res
            .inner_reports
            .last()
            .expect("an estimation result always has at least one stage");
        let stages = res
            .inner_reports
            .iter()
            .map(|r| StageReport {
                iterations: r.iterations,
                fevals: r.fevals,
                gap: r.gap,
                beta_final: r.beta_final,
                converged: r.converged,
            })
            .collect();
        let trace = with_trace.then(|| {
            res.inner_reports
                .iter()
                .flat_map(|r| r.trace.iter().flatten().cloned())
                .collect::<Vec<TraceRecord>>()
        });
        Ok(MethodReport {
            converged: res.inner_reports.iter().all(|r| r.converged),
            objective,
            objective_penalized,
            gap: last.gap,
            t_star: res.t_star,
            outer_iters: res.outer_iters,
            final_rho_omega: res.final_rho_omega,
            total_iterations: res.inner_reports.iter().map(|r| r.iterations).sum(),
            total_fevals: res.inner_reports.iter().map(|r| r.fevals).sum(),
            stages,
            trace,
        })
    }
}

/// result.json top level: one entry per method actually run, fixed order.
#[derive(Debug, Default, Serialize)]
pub struct ResultJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aspg: Option<MethodReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ans: Option<MethodReport>,
}

#[derive(Debug, Serialize)]
pub struct RecoveryMetrics {
    pub n: usize,
    pub seed: u64,
    pub threshold: f64,
    /// Fraction of the truth's off-diagonal support recovered in X*.
    pub true_positive_rate: f64,
    /// Fraction of true off-diagonal zeros reported nonzero in X*.
    pub false_positive_rate: f64,
    pub truth_offdiag_nonzeros: usize,
    pub xstar_offdiag_density: f64,
    pub binv_offdiag_density: f64,
}

/// Computes support-recovery rates of `x_star` against the exact support of
/// `truth`, over unordered off-diagonal pairs.
pub fn recovery_metrics(
    truth: &SymMatrix,
    x_star: &SymMatrix,
    b_inv: &SymMatrix,
    seed: u64,
) -> RecoveryMetrics {
    let n = truth.n();
    let mut truth_pos = 0usize;
    let mut hit = 0usize;
    let mut false_pos = 0usize;
    let mut xstar_nz = 0usize;
    let mut binv_nz = 0usize;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            pairs += 1;
            let in_truth = truth.get(i, j) != 0.0;
            let in_xstar = x_star.get(i, j).abs() > PATTERN_THRESHOLD;
            if in_truth {
                truth_pos += 1;
                if in_xstar {
                    hit += 1;
                }
            } else if in_xstar {
                false_pos += 1;
            }
            if in_xstar {
                xstar_nz += 1;
            }
            if b_inv.get(i, j).abs() > PATTERN_THRESHOLD {
                binv_nz += 1;
            }
        }
    }
    let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    RecoveryMetrics {
        n,
        seed,
        threshold: PATTERN_THRESHOLD,
        true_positive_rate: ratio(hit, truth_pos),
        false_positive_rate: ratio(false_pos, pairs - truth_pos),
        truth_offdiag_nonzeros: truth_pos,
        xstar_offdiag_density: ratio(xstar_nz, pairs),
        binv_offdiag_density: ratio(binv_nz, pairs),
    }
}

/// Writes an ASCII portable bitmap: pixel 1 where |entry| exceeds the
/// pattern threshold.
pub fn write_pattern(path: &Path, m: &SymMatrix) -> Result<()> {
    let n = m.n();
    let mut text = format!("P1\n{n} {n}\n");
    for i in 0..n {
        let row: Vec<&str> = (0..n)
            .map(|j| if m.get(i, j).abs() > PATTERN_THRESHOLD { "1" } else { "0" })
            .collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

/// Serializes a value as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| covsel_core::Error::Io(format!("{}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
