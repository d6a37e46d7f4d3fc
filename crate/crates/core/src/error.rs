//! Crate-wide error type.

/// Errors produced by solvers, quadrature and geometry operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An angle argument fell outside `[0, pi/2]` by more than the
    /// permitted slack of `1e-12`.
    #[error("angle {t} outside [0, {hi}] beyond slack")]
    AngleOutOfDomain { t: f64, hi: f64 },

    /// Adaptive quadrature hit its depth limit before reaching the
    /// requested tolerance. Carries the best estimate obtained so far.
    #[error("quadrature failed to reach tol {tol:.3e} (best estimate {best:.17e})")]
    QuadratureDepthExceeded { tol: f64, best: f64 },

    /// Gaussian elimination found a pivot that is zero to working
    /// precision. `pivot` is the elimination column where this happened.
    #[error("linear system singular to working precision at pivot {pivot}")]
    SingularMatrix { pivot: usize },

    /// Newton iteration diverged or ran out of iterations.
    #[error("root finding failed after {iterations} iterations, residual {residual:.3e} at {last:?}")]
    RootFindingFailed {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    /// The two wall lines used by the contact-point oracle are parallel.
    #[error("wall lines at t = {t} are parallel; cannot intersect")]
    ParallelWallLines { t: f64 },

    /// A rotation path failed a structural check (coverage, continuity,
    /// anchoring at the origin).
    #[error("invalid rotation path: {reason}")]
    InvalidPath { reason: String },

    /// The swept intersection came out empty.
    #[error("swept intersection is empty (degenerate rotation path)")]
    EmptyShape,

    /// An operation that slices the shape into vertical columns met a
    /// boundary that is not a graph over x on top and bottom.
    #[error("boundary is not vertically simple: {reason}")]
    NotVerticallySimple { reason: String },

    /// Boundary attribution left vertices without a generator, so the
    /// analytic boundary chain cannot be assembled.
    #[error("boundary chain is not closed: gap of {gap:.3e} after segment {segment}")]
    OpenBoundaryChain { segment: usize, gap: f64 },

    /// An operation was asked about a boundary segment id it does not know.
    #[error("unknown boundary segment id {id}")]
    UnknownSegment { id: usize },

    /// A caller-supplied parameter was outside its documented range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
