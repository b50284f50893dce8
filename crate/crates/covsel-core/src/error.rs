use crate::gsics::EstimationResult;

/// Error type shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An internal numerical routine failed to converge or produced
    /// non-finite values.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The nonmonotone line search could not find an acceptable step within
    /// its backtracking budget.
    #[error("line search stalled at iteration {iteration} (lambda = {lambda:.3e})")]
    StalledLineSearch { iteration: usize, lambda: f64 },

    /// The outer penalty loop hit its stage cap without driving the
    /// constrained entries below tolerance. The best iterate found is
    /// attached.
    #[error("penalty escalation exceeded {max_outer} stages (violation {violation:.3e})")]
    PenaltyDivergence {
        max_outer: usize,
        violation: f64,
        best: Box<EstimationResult>,
    },

    /// An inner solve stopped on its iteration or evaluation cap before
    /// reaching the requested duality gap; the best iterate is attached.
    #[error("inner solver hit its cap at outer stage {stage} (gap {gap:.3e})")]
    CapsExceeded {
        stage: usize,
        gap: f64,
        best: Box<EstimationResult>,
    },

    /// Post-processing needs Tr(Σ) > 0 to place the diagonal shift.
    #[error("degenerate trace: Tr(Sigma) = {0:.3e} is not positive")]
    DegenerateTrace(f64),

    /// File I/O or format errors from the on-disk representations.
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
