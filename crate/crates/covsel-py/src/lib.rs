//! Python bindings for the covariance-selection solver.
//!
//! Builds as an extension module named `covsel`. There is no packaging
//! scaffold; stage the compiled library next to your script:
//!
//! ```text
//! cargo build --release -p covsel-py
//! cp target/release/libcovsel.so python/covsel.so
//! python3 -c 'import covsel; print(covsel.generate(10, seed=0).omega)'
//! ```
//!
//! Matrices cross the boundary as row-major lists of lists and constraint
//! sets as lists of `(i, j)` pairs with `i < j`, so the module needs nothing
//! beyond the Python standard library.

use covsel_core::ans::AnsParams;
use covsel_core::gsics::{self, EstimationResult, GsicsParams, Method};
use covsel_core::instgen::{self, GenConfig};
use covsel_core::io;
use covsel_core::linalg::{PairSet, SymMatrix};
use covsel_core::problem::{self, Instance};
use covsel_core::spg::SpgParams;
use covsel_core::Error;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::path::PathBuf;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) => PyValueError::new_err(e.to_string()),
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> PyResult<SymMatrix> {
    let n = rows.len();
    let mut flat = Vec::with_capacity(n * n);
    for row in rows {
        if row.len() != n {
            return Err(PyValueError::new_err(format!(
                "expected a square row-major matrix, got a row of length {} in {n} rows",
                row.len()
            )));
        }
        flat.extend_from_slice(row);
    }
    SymMatrix::from_flat(n, &flat).map_err(to_py_err)
}

fn matrix_to_rows(m: &SymMatrix) -> Vec<Vec<f64>> {
    (0..m.n())
        .map(|i| (0..m.n()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn pairs_to_set(pairs: Vec<(usize, usize)>) -> PyResult<PairSet> {
    PairSet::from_pairs(pairs).map_err(to_py_err)
}

/// Unordered view: one (i, j) with i < j per constrained pair.
fn set_to_pairs(s: &PairSet) -> Vec<(usize, usize)> {
    s.iter().filter(|(i, j)| i < j).collect()
}

/// A covariance-selection problem: the sample covariance, entrywise penalty
/// weights, and the index pairs constrained to exact zero.
#[pyclass(name = "Instance", module = "covsel", skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (sigma, rho, omega=Vec::new()))]
    fn new(
        sigma: Vec<Vec<f64>>,
        rho: Vec<Vec<f64>>,
        omega: Vec<(usize, usize)>,
    ) -> PyResult<Self> {
        let inner = Instance::new(
            matrix_from_rows(&sigma)?,
            matrix_from_rows(&rho)?,
            pairs_to_set(omega)?,
        )
        .map_err(to_py_err)?;
        Ok(PyInstance { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn sigma(&self) -> Vec<Vec<f64>> {
        matrix_to_rows(self.inner.sigma())
    }

    fn rho(&self) -> Vec<Vec<f64>> {
        matrix_to_rows(self.inner.rho())
    }

    fn omega(&self) -> Vec<(usize, usize)> {
        set_to_pairs(self.inner.omega())
    }

    /// log det X - <Sigma, X> - sum_ij rho_ij |X_ij| over all entries;
    /// -inf when X is not positive definite.
    fn f_penalized(&self, x: Vec<Vec<f64>>) -> PyResult<f64> {
        problem::f_penalized(&self.inner, &matrix_from_rows(&x)?).map_err(to_py_err)
    }

    /// Same objective with the penalty sum skipping the constrained pairs.
    fn f_constrained(&self, x: Vec<Vec<f64>>) -> PyResult<f64> {
        problem::f_constrained(&self.inner, &matrix_from_rows(&x)?).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n={}, omega_pairs={})",
            self.inner.n(),
            self.inner.omega().len() / 2
        )
    }
}

/// Provable spectral bounds: every solution eigenvalue lies in [alpha, beta].
#[pyclass(name = "Bounds", module = "covsel", skip_from_py_object)]
#[derive(Clone)]
struct PyBounds {
    #[pyo3(get)]
    alpha: f64,
    #[pyo3(get)]
    beta: f64,
    #[pyo3(get)]
    vartheta: f64,
    #[pyo3(get)]
    theta: f64,
    #[pyo3(get)]
    lam_min_shift: f64,
    #[pyo3(get)]
    degenerate: bool,
}

#[pymethods]
impl PyBounds {
    fn __repr__(&self) -> String {
        format!("Bounds(alpha={:.6e}, beta={:.6e})", self.alpha, self.beta)
    }
}

/// Inner-solver summary for one penalty stage.
#[pyclass(name = "StageReport", module = "covsel", skip_from_py_object)]
#[derive(Clone)]
struct PyStage {
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    fevals: usize,
    #[pyo3(get)]
    gap: f64,
    #[pyo3(get)]
    beta_final: f64,
    #[pyo3(get)]
    converged: bool,
}

#[pymethods]
impl PyStage {
    fn __repr__(&self) -> String {
        format!(
            "StageReport(iterations={}, fevals={}, gap={:.3e}, converged={})",
            self.iterations, self.fevals, self.gap, self.converged
        )
    }
}

/// Output of the outer loop: the post-processed estimate `x_star` (exactly
/// zero on the constraints, positive definite) plus the raw last-stage
/// solution and per-stage solver reports.
#[pyclass(name = "Estimate", module = "covsel", skip_from_py_object)]
#[derive(Clone)]
struct PyEstimate {
    #[pyo3(get)]
    x_star: Vec<Vec<f64>>,
    #[pyo3(get)]
    x_approx: Vec<Vec<f64>>,
    #[pyo3(get)]
    t_star: f64,
    #[pyo3(get)]
    outer_iters: usize,
    #[pyo3(get)]
    final_rho_omega: f64,
    #[pyo3(get)]
    stages: Vec<PyStage>,
}

#[pymethods]
impl PyEstimate {
    fn __repr__(&self) -> String {
        format!(
            "Estimate(n={}, outer_iters={}, t_star={:.3e})",
            self.x_star.len(),
            self.outer_iters,
            self.t_star
        )
    }
}

fn estimate_from(res: EstimationResult) -> PyEstimate {
    PyEstimate {
        x_star: matrix_to_rows(&res.x_star),
        x_approx: matrix_to_rows(&res.x_approx),
        t_star: res.t_star,
        outer_iters: res.outer_iters,
        final_rho_omega: res.final_rho_omega,
        stages: res
            .inner_reports
            .iter()
            .map(|r| PyStage {
                iterations: r.iterations,
                fevals: r.fevals,
                gap: r.gap,
                beta_final: r.beta_final,
                converged: r.converged,
            })
            .collect(),
    }
}

/// A generated problem: the ground-truth precision matrix, its noisy sample
/// covariance, and the constraint set read off the truth's far-off-diagonal
/// zeros. `b` is the noisy intermediate before the positive-definite shift.
#[pyclass(name = "GeneratedInstance", module = "covsel", skip_from_py_object)]
#[derive(Clone)]
struct PyGenerated {
    #[pyo3(get)]
    truth: Vec<Vec<f64>>,
    #[pyo3(get)]
    sigma: Vec<Vec<f64>>,
    #[pyo3(get)]
    b: Vec<Vec<f64>>,
    #[pyo3(get)]
    omega: Vec<(usize, usize)>,
}

#[pymethods]
impl PyGenerated {
    /// Validated solver instance with a uniform penalty weight, mirroring
    /// the command-line front end.
    fn instance(&self, rho_off: f64) -> PyResult<PyInstance> {
        let n = self.sigma.len();
        let inst = Instance::new(
            matrix_from_rows(&self.sigma)?,
            SymMatrix::constant(n, rho_off),
            pairs_to_set(self.omega.clone())?,
        )
        .map_err(to_py_err)?;
        let inner = problem::validate(&inst, 1e-8).map_err(to_py_err)?;
        Ok(PyInstance { inner })
    }

    fn __repr__(&self) -> String {
        format!(
            "GeneratedInstance(n={}, omega_pairs={})",
            self.sigma.len(),
            self.omega.len()
        )
    }
}

/// Generates a reproducible random instance. `family` is "density"
/// (Bernoulli off-diagonal support) or "spike" (near-diagonal truth with a
/// few strong entries); `bandwidth` defaults to the family's standard value.
#[pyfunction]
#[pyo3(signature = (n, density=0.5, seed=0, family="density", tau=0.15, vartheta_gen=1e-4, bandwidth=None))]
fn generate(
    n: usize,
    density: f64,
    seed: u64,
    family: &str,
    tau: f64,
    vartheta_gen: f64,
    bandwidth: Option<usize>,
) -> PyResult<PyGenerated> {
    let mut cfg = match family {
        "density" => GenConfig::density_family(n, density, seed),
        "spike" => GenConfig::spike_family(n, seed),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown family {other:?}; use \"density\" or \"spike\""
            )))
        }
    };
    cfg.tau = tau;
    cfg.vartheta_gen = vartheta_gen;
    if let Some(b) = bandwidth {
        cfg.omega_bandwidth = b;
    }
    let g = instgen::generate(&cfg).map_err(to_py_err)?;
    Ok(PyGenerated {
        truth: matrix_to_rows(&g.a),
        sigma: matrix_to_rows(&g.sigma),
        b: matrix_to_rows(&g.b),
        omega: set_to_pairs(&g.omega),
    })
}

/// Raises the diagonal penalty minimally until Sigma + Diag(rho) is positive
/// definite; idempotent on instances that already satisfy the assumption.
#[pyfunction]
#[pyo3(signature = (inst, perturb=1e-8))]
fn validate(inst: &PyInstance, perturb: f64) -> PyResult<PyInstance> {
    problem::validate(&inst.inner, perturb)
        .map(|inner| PyInstance { inner })
        .map_err(to_py_err)
}

/// Spectral solution bounds [alpha, beta] for the penalized problem.
#[pyfunction]
fn compute_bounds(inst: &PyInstance) -> PyResult<PyBounds> {
    let b = problem::compute_bounds(&inst.inner).map_err(to_py_err)?;
    Ok(PyBounds {
        alpha: b.alpha,
        beta: b.beta,
        vartheta: b.vartheta,
        theta: b.theta,
        lam_min_shift: b.lam_min_shift,
        degenerate: b.degenerate,
    })
}

/// Runs the escalating-penalty outer loop with the chosen inner solver
/// ("aspg" or "ans") and returns the post-processed estimate.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (inst, method="aspg", eps_o=0.1, eps_c=1e-4, r_rho=2.0, rho0=0.5, beta0=1.0, r_beta=10.0, max_outer=30, max_iter=50_000))]
fn solve(
    inst: &PyInstance,
    method: &str,
    eps_o: f64,
    eps_c: f64,
    r_rho: f64,
    rho0: f64,
    beta0: f64,
    r_beta: f64,
    max_outer: usize,
    max_iter: usize,
) -> PyResult<PyEstimate> {
    let method = match method {
        "aspg" => Method::Aspg(SpgParams {
            max_iter,
            max_feval: 2 * max_iter,
            ..Default::default()
        }),
        "ans" => Method::Ans(AnsParams {
            max_iter,
            max_feval: 2 * max_iter,
            ..Default::default()
        }),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown method {other:?}; use \"aspg\" or \"ans\""
            )))
        }
    };
    let p = GsicsParams {
        eps_o,
        eps_c,
        r_rho,
        rho0_omega: rho0,
        method,
        max_outer,
        beta0,
        r_beta,
    };
    let res = gsics::gsics_solve(&inst.inner, &p).map_err(to_py_err)?;
    Ok(estimate_from(res))
}

/// Zeroes the instance's constrained entries in `x_approx` exactly, then
/// shifts the diagonal by the likelihood-optimal t*; returns (x_star, t_star).
#[pyfunction]
fn post_process(inst: &PyInstance, x_approx: Vec<Vec<f64>>) -> PyResult<(Vec<Vec<f64>>, f64)> {
    let x = matrix_from_rows(&x_approx)?;
    let (x_star, t_star) =
        gsics::post_process(&inst.inner, &x, inst.inner.omega()).map_err(to_py_err)?;
    Ok((matrix_to_rows(&x_star), t_star))
}

/// Reads a symmetric MatrixMarket coordinate file into a dense matrix.
#[pyfunction]
fn read_matrix(path: PathBuf) -> PyResult<Vec<Vec<f64>>> {
    io::read_matrix(&path).map(|m| matrix_to_rows(&m)).map_err(to_py_err)
}

/// Writes a dense symmetric matrix as MatrixMarket coordinate data.
#[pyfunction]
fn write_matrix(path: PathBuf, m: Vec<Vec<f64>>) -> PyResult<()> {
    io::write_matrix(&path, &matrix_from_rows(&m)?).map_err(to_py_err)
}

/// Reads a constraint-pair file; returns (dimension, pairs with i < j).
#[pyfunction]
fn read_omega(path: PathBuf) -> PyResult<(usize, Vec<(usize, usize)>)> {
    let (n, set) = io::read_omega(&path).map_err(to_py_err)?;
    Ok((n, set_to_pairs(&set)))
}

/// Writes a constraint-pair file for a dimension-`n` problem.
#[pyfunction]
fn write_omega(path: PathBuf, n: usize, pairs: Vec<(usize, usize)>) -> PyResult<()> {
    io::write_omega(&path, n, &pairs_to_set(pairs)?).map_err(to_py_err)
}

/// Sparse inverse covariance selection with known-zero constraints.
#[pymodule]
fn covsel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyBounds>()?;
    m.add_class::<PyStage>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PyGenerated>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(compute_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(post_process, m)?)?;
    m.add_function(wrap_pyfunction!(read_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(write_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(read_omega, m)?)?;
    m.add_function(wrap_pyfunction!(write_omega, m)?)?;
    Ok(())
}
