//! Estimation of sparse inverse covariance matrices when part of the
//! conditional-independence structure is known in advance.
//!
//! The problem: given a sample covariance `Σ` and a set `Ω` of index pairs on
//! which the inverse covariance is known to vanish, maximize the l1-penalized
//! log-likelihood
//!
//! ```text
//!   log det X − ⟨Σ, X⟩ − Σ_{(i,j)∉Ω} ρ_ij |X_ij|   s.t.  X ≻ 0,  X_ij = 0 on Ω.
//! ```
//!
//! The constrained problem is attacked through a sequence of fully penalized
//! problems in which the weights on `Ω` are escalated geometrically until the
//! constrained entries are numerically zero ([`gsics`]). Each penalized problem
//! is solved in the dual, where the feasible set is the unit box and one
//! eigendecomposition yields the dual value, its gradient, and a primal point
//! ([`oracle`]). Two inner solvers are provided: an adaptive spectral projected
//! gradient method ([`spg`]) and an adaptive Nesterov smoothing method
//! ([`ans`]), both of which grow or shrink the spectral box adaptively.
//!
//! [`instgen`] reproduces the synthetic instance families used to benchmark the
//! solvers, and [`io`] reads and writes the on-disk formats shared with the
//! command-line front end.

pub mod ans;
mod error;
pub mod gsics;
pub mod instgen;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod problem;
pub mod spg;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
