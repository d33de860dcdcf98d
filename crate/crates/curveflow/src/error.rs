//! Error type shared by the solver crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A closed polygonal curve needs at least [`crate::MIN_POINTS`] points.
    #[error("curve needs at least {min} points, got {got}")]
    TooFewPoints { got: usize, min: usize },

    /// Two consecutive grid points coincide; the discrete curvature is
    /// undefined there.
    #[error("zero-length segment ending at grid point {0}")]
    ZeroSegment(usize),

    /// A coordinate became NaN or infinite.
    #[error("non-finite coordinate at grid point {0}")]
    NonFinite(usize),

    /// Requested a flow model that is not in the built-in catalog.
    #[error("unknown flow model `{0}`")]
    UnknownModel(String),

    /// A flow definition violates a structural requirement (for example a
    /// curvature part that does not vanish at zero curvature).
    #[error("invalid flow `{name}`: {reason}")]
    InvalidFlow { name: String, reason: String },

    /// SOR cannot start from a system with a vanishing diagonal entry.
    #[error("zero diagonal entry at row {0}")]
    ZeroDiagonal(usize),

    /// Gaussian elimination found no usable pivot.
    #[error("singular matrix: no pivot in column {0}")]
    SingularMatrix(usize),

    /// The iterative solve made no acceptable progress even after the time
    /// step was halved once.
    #[error(
        "linear solver diverged: {iterations} iterations, iterate difference {diff:.3e} \
         (tolerance {tol:.3e})"
    )]
    SolverDiverged {
        iterations: usize,
        diff: f64,
        tol: f64,
    },

    /// Convergence orders need strictly positive errors on both grids.
    #[error("error ratio needs positive errors, got {coarse} and {fine}")]
    NonPositiveError { coarse: f64, fine: f64 },

    /// The uniform-redistribution weights must not both vanish.
    #[error("redistribution weights must satisfy kappa1 + kappa2 > 0, got {kappa1} + {kappa2}")]
    ZeroRedistributionWeight { kappa1: f64, kappa2: f64 },
}
