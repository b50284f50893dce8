//! Dense symmetric matrices, their eigendecompositions, and symmetric index
//! sets.
//!
//! Everything downstream works with full dense symmetric matrices: the solvers
//! perform one dense eigendecomposition per function evaluation, which
//! dominates all other costs, so sparse or packed storage buys nothing.
//! Symmetry is an exact invariant of [`SymMatrix`]: every constructor and
//! operation writes both triangles identically, so `get(i, j) == get(j, i)`
//! holds bitwise.

use std::collections::BTreeSet;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Dense symmetric matrix with exact entrywise symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    /// Row-major n*n storage; data[i*n + j] == data[j*n + i] exactly.
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Matrix with every entry equal to `v`.
    pub fn constant(n: usize, v: f64) -> Self {
        assert!(n >= 1, "dimension must be positive");
        SymMatrix { n, data: vec![v; n * n] }
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * d.len() + i] = v;
        }
        m
    }

    /// Builds from `f(i, j)` evaluated only on the upper triangle (i ≤ j) and
    /// mirrored, so symmetry holds by construction.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    /// Builds from a row-major slice, accepting small floating-point asymmetry
    /// (relative to the largest entry) and storing the exact symmetrization
    /// (M + Mᵀ)/2.
    pub fn from_flat(n: usize, data: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let scale = data.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let tol = 1e-12 * (1.0 + scale);
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let a = data[i * n + j];
                let b = data[j * n + i];
                if (a - b).abs() > tol {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not symmetric: entry ({i},{j}) = {a}, ({j},{i}) = {b}"
                    )));
                }
                let v = 0.5 * (a + b);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both (i, j) and (j, i).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Largest absolute entry (the l∞ vector norm over entries).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius inner product ⟨A, B⟩ = Σ_ij A_ij B_ij.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// self + c · other.
    pub fn add_scaled(&self, c: f64, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + c * b)
            .collect();
        SymMatrix { n: self.n, data }
    }

    /// self += c · other.
    pub fn axpy(&mut self, c: f64, other: &Self) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// a·X + b·Y.
    pub fn lin_comb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        assert_eq!(x.n, y.n, "dimension mismatch");
        let data = x
            .data
            .iter()
            .zip(&y.data)
            .map(|(u, v)| a * u + b * v)
            .collect();
        SymMatrix { n: x.n, data }
    }

    pub fn scale(&self, c: f64) -> Self {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    /// self + c·I.
    pub fn shift_diag(&self, c: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += c;
        }
        m
    }

    /// self + Diag(d).
    pub fn add_diag(&self, d: &[f64]) -> Self {
        assert_eq!(self.n, d.len(), "dimension mismatch");
        let mut m = self.clone();
        for (i, &v) in d.iter().enumerate() {
            m.data[i * self.n + i] += v;
        }
        m
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.n + i]).collect()
    }

    /// Entrywise map; symmetry is preserved because f is applied per value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Eigendecomposition M = Q · diag(lambda) · Qᵀ with eigenvalues sorted
/// descending (λ_1 ≥ … ≥ λ_n) and orthonormal columns in Q.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    n: usize,
    /// Eigenvalues, descending.
    pub lambda: Vec<f64>,
    /// Row-major n×n; column k is the eigenvector for lambda[k].
    q: Vec<f64>,
}

impl EigenDecomp {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lam_max(&self) -> f64 {
        self.lambda[0]
    }

    #[inline]
    pub fn lam_min(&self) -> f64 {
        self.lambda[self.n - 1]
    }

    /// Entry Q_{ik}: component i of the k-th eigenvector.
    #[inline]
    pub fn q(&self, i: usize, k: usize) -> f64 {
        self.q[i * self.n + k]
    }

    /// Rebuilds Q · diag(spectrum) · Qᵀ for an arbitrary replacement spectrum,
    /// symmetrized exactly.
    pub fn recompose(&self, spectrum: &[f64]) -> SymMatrix {
        assert_eq!(spectrum.len(), self.n, "spectrum length mismatch");
        let n = self.n;
        let q = DMatrix::from_row_slice(n, n, &self.q);
        let mut scaled = q.clone();
        for (k, &s) in spectrum.iter().enumerate() {
            scaled.column_mut(k).scale_mut(s);
        }
        let full = scaled * q.transpose();
        SymMatrix::from_fn(n, |i, j| 0.5 * (full[(i, j)] + full[(j, i)]))
    }
}

/// Symmetric set of off-diagonal index pairs; stores both orientations, so
/// `len()` counts ordered pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from any iterator of pairs; each (i, j) is mirrored to (j, i).
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut s = Self::new();
        for (i, j) in pairs {
            s.insert(i, j)?;
        }
        Ok(s)
    }

    /// Inserts (i, j) and (j, i). Diagonal pairs are rejected.
    pub fn insert(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::InvalidInput(format!(
                "diagonal pair ({i},{i}) is not allowed"
            )));
        }
        self.pairs.insert((i, j));
        self.pairs.insert((j, i));
        Ok(())
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    /// Number of ordered pairs (both orientations counted).
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Iterates over all ordered pairs in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.pairs.iter().map(|&(i, j)| i.max(j)).max()
    }
}

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
pub fn sym_eigen(m: &SymMatrix) -> Result<EigenDecomp> {
    if !m.as_slice().iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.n();
    let dm = DMatrix::from_row_slice(n, n, m.as_slice());
    let max_niter = 40 * n.max(8);
    let eig = dm
        .try_symmetric_eigen(f64::EPSILON, max_niter)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

    let lambda: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut q = vec![0.0; n * n];
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..n {
            q[i * n + new_k] = eig.eigenvectors[(i, old_k)];
        }
    }
    Ok(EigenDecomp { n, lambda, q })
}

/// Operator (spectral) norm max_i |λ_i(M)| of a symmetric matrix.
pub fn spectral_norm(m: &SymMatrix) -> Result<f64> {
    let eig = sym_eigen(m)?;
    Ok(eig.lambda.iter().fold(0.0f64, |a, &v| a.max(v.abs())))
}

/// Entrywise (Hadamard) product A ∗ B.
pub fn pointwise_product(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    if a.n() != b.n() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: {} vs {}",
            a.n(),
            b.n()
        )));
    }
    Ok(SymMatrix {
        n: a.n,
        data: a.data.iter().zip(&b.data).map(|(x, y)| x * y).collect(),
    })
}

/// Projection onto the unit box 𝒰 = {U symmetric : |U_ij| ≤ 1}: every entry
/// clamped to [−1, 1]. Idempotent, and the Frobenius-nearest point of 𝒰
/// because the constraint is separable per entry.
pub fn project_onto_u(m: &SymMatrix) -> SymMatrix {
    m.map(|v| v.clamp(-1.0, 1.0))
}

/// max |M_ij| over (i, j) ∈ S; zero for an empty set.
pub fn max_abs_on_set(m: &SymMatrix, s: &PairSet) -> Result<f64> {
    if let Some(max_idx) = s.max_index() {
        if max_idx >= m.n() {
            return Err(Error::InvalidInput(format!(
                "pair index {max_idx} out of range for dimension {}",
                m.n()
            )));
        }
    }
    Ok(s.iter().fold(0.0f64, |a, (i, j)| a.max(m.get(i, j).abs())))
}
