//! Seeded random instance families.
//!
//! Both families first build a sparse positive definite ground truth A, then
//! corrupt its inverse into a sample-covariance stand-in: B = A⁻¹ + τV with V
//! uniform noise, shifted to Σ = B − min{λ_min(B) − ϑ_gen, 0}·I so Σ stays
//! safely positive definite. The constraint set collects exact zeros of A at
//! distance at least `omega_bandwidth` from the diagonal, mimicking partial
//! prior knowledge of the conditional independence structure.
//!
//! Determinism: a ChaCha stream cipher RNG keyed by the seed, with stream 0
//! reserved for A and stream 1 for the noise V, makes every artifact a pure
//! function of the configuration, portable across platforms.

use crate::linalg::{sym_eigen, PairSet, SymMatrix};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ground-truth family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Bernoulli(ϱ) off-diagonal support with uniform values and a strictly
    /// diagonally dominant diagonal.
    Density,
    /// Diagonal near one plus a few ±1 off-diagonal spikes; diagonal boosted
    /// so λ_min ≥ 0.1.
    Spike,
}

/// Generation parameters.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub n: usize,
    /// Off-diagonal fill probability ϱ ∈ (0, 1] (Density family).
    pub density: f64,
    /// Noise scale τ on the inverted truth.
    pub tau: f64,
    /// Target lower bound on λ_min(Σ).
    pub vartheta_gen: f64,
    pub seed: u64,
    pub family: Family,
    /// Pairs enter Ω only when |i − j| is at least this.
    pub omega_bandwidth: usize,
}

impl GenConfig {
    /// Density-family configuration with the standard τ = 0.15, ϑ = 1e-4,
    /// bandwidth 2.
    pub fn density_family(n: usize, density: f64, seed: u64) -> Self {
        GenConfig {
            n,
            density,
            tau: 0.15,
            vartheta_gen: 1e-4,
            seed,
            family: Family::Density,
            omega_bandwidth: 2,
        }
    }

    /// Spike-family configuration with bandwidth 5.
    pub fn spike_family(n: usize, seed: u64) -> Self {
        GenConfig {
            n,
            density: 0.1,
            tau: 0.15,
            vartheta_gen: 1e-4,
            seed,
            family: Family::Spike,
            omega_bandwidth: 5,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "density must lie in (0, 1], got {}",
                self.density
            )));
        }
        if !self.tau.is_finite() || !(self.vartheta_gen >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "tau = {} and vartheta_gen = {} must be finite (vartheta nonnegative)",
                self.tau, self.vartheta_gen
            )));
        }
        if self.omega_bandwidth < 1 {
            return Err(Error::InvalidInput("omega_bandwidth must be at least 1".into()));
        }
        Ok(())
    }
}

/// A complete generated problem.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    /// Ground-truth precision matrix.
    pub a: SymMatrix,
    pub sigma: SymMatrix,
    pub omega: PairSet,
    /// Noisy intermediate B = A⁻¹ + τV before the PD shift.
    pub b: SymMatrix,
}

/// Samples the ground-truth precision matrix on RNG stream 0.
pub fn gen_truth(cfg: &GenConfig) -> Result<SymMatrix> {
    cfg.check()?;
    let n = cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let mut a = SymMatrix::zeros(n);

    match cfg.family {
        Family::Density => {
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random_bool(cfg.density) {
                        a.set(i, j, rng.random_range(-1.0..=1.0));
                    }
                }
            }
            for i in 0..n {
                let row_abs: f64 = (0..n).filter(|&j| j != i).map(|j| a.get(i, j).abs()).sum();
                // Strict diagonal dominance: PD by Gershgorin.
                a.set(i, i, row_abs + 1.0);
            }
        }
        Family::Spike => {
            if n < 2 {
                return Err(Error::InvalidInput("spike family needs n >= 2".into()));
            }
            for i in 0..n {
                a.set(i, i, rng.random_range(0.9..=1.1));
            }
            let spikes = n.div_ceil(10);
            let mut placed = 0;
            let mut draws = 0;
            while placed < spikes {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                draws += 1;
                if draws > 100_000 {
                    return Err(Error::NumericalFailure(
                        "spike placement failed to find free off-diagonal slots".into(),
                    ));
                }
                if i == j || a.get(i, j) != 0.0 {
                    continue;
                }
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                a.set(i, j, sign);
                placed += 1;
            }
            let lam_min = sym_eigen(&a)?.lam_min();
            if lam_min < 0.1 {
                a = a.shift_diag(0.1 - lam_min);
            }
        }
    }
    Ok(a)
}

/// Inverts the truth, adds τ-scaled uniform noise from RNG stream 1, and
/// shifts the diagonal so that λ_min(Σ) ≥ `vartheta_gen`. Returns (Σ, B).
pub fn make_sigma(a: &SymMatrix, tau: f64, vartheta_gen: f64, seed: u64) -> Result<(SymMatrix, SymMatrix)> {
    let dec = sym_eigen(a)?;
    if dec.lam_min() <= 0.0 {
        return Err(Error::NumericalFailure(format!(
            "truth matrix is singular (lambda_min = {:.3e})",
            dec.lam_min()
        )));
    }
    let inv_spectrum: Vec<f64> = dec.lambda.iter().map(|l| 1.0 / l).collect();
    let a_inv = dec.recompose(&inv_spectrum);

    let n = a.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut v = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            v.set(i, j, rng.random_range(-1.0..=1.0));
        }
    }

    let b = a_inv.add_scaled(tau, &v);
    let shift = (sym_eigen(&b)?.lam_min() - vartheta_gen).min(0.0);
    let sigma = if shift < 0.0 { b.shift_diag(-shift) } else { b.clone() };
    Ok((sigma, b))
}

/// Collects the pairs where the truth is exactly zero and the band distance
/// reaches the threshold. Entries are exact zeros by construction (never
/// sampled), so no magnitude threshold is involved.
pub fn derive_omega(a: &SymMatrix, bandwidth: usize) -> Result<PairSet> {
    if bandwidth < 1 {
        return Err(Error::InvalidInput("omega bandwidth must be at least 1".into()));
    }
    let mut omega = PairSet::new();
    let n = a.n();
    for i in 0..n {
        for j in (i + 1)..n {
            if j - i >= bandwidth && a.get(i, j) == 0.0 {
                omega.insert(i, j)?;
            }
        }
    }
    Ok(omega)
}

/// Runs the full pipeline for one configuration.
pub fn generate(cfg: &GenConfig) -> Result<GeneratedInstance> {
    let a = gen_truth(cfg)?;
    let (sigma, b) = make_sigma(&a, cfg.tau, cfg.vartheta_gen, cfg.seed)?;
    let omega = derive_omega(&a, cfg.omega_bandwidth)?;
    Ok(GeneratedInstance { a, sigma, omega, b })
}
