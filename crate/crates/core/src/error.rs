use thiserror::Error;

/// Errors from the exact geometry kernel.
#[derive(Debug, Clone, Error)]
pub enum GeomError {
    /// Input is not full-dimensional where full dimension is required.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    /// A halfspace system does not bound a polytope.
    #[error("unbounded input: {0}")]
    UnboundedInput(String),
    /// Operands live in different ambient dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A matrix that must be invertible is singular.
    #[error("singular matrix")]
    SingularMatrix,
    /// Ambient dimension outside the supported 1..=6 range for exact duality.
    #[error("unsupported dimension {0} (supported: 1..=6)")]
    UnsupportedDimension(usize),
}

/// Errors from covering verification and the lemma audits.
#[derive(Debug, Clone, Error)]
pub enum CoverError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    /// An audit requires a verified covering certificate.
    #[error("not a covering: {0}")]
    NotACovering(String),
    /// A sampled point lay in no candidate translate despite a Covered certificate.
    #[error("zero multiplicity at sample {0:?}; certificate and geometry disagree")]
    ZeroMultiplicity(Vec<f64>),
    /// Bisection could not shrink the scale bracket because certificates
    /// went inconclusive at the configured depth.
    #[error("depth exhausted: bracket [{lo}, {hi}] not reducible to tolerance {tol}")]
    DepthExhausted { lo: String, hi: String, tol: String },
    /// The body is not a simplex where a simplex is required.
    #[error("not a simplex: {0}")]
    NotASimplex(String),
}

/// Errors from the lattice-basis search.
#[derive(Debug, Clone, Error)]
pub enum OptimError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    /// No candidate basis certified as a covering within the search budget.
    #[error("no covering found within the search budget ({0} restarts)")]
    NoCoveringFound(usize),
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
}
