use thiserror::Error;

use crate::distributions::Chart;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("outcome: {0} is outside the support of the family")]
    OutsideSupport(f64),

    #[error("chart: expected {expected} coordinates, found {found}")]
    ChartMismatch { expected: Chart, found: Chart },

    #[error("point: parameter lies on the boundary of the model ({0})")]
    BoundaryParameter(String),

    #[error("potential: Hessian is not positive definite at the point")]
    NotConvex,

    #[error("metric: singular metric along the path")]
    SingularMetric,

    #[error("dimension: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("chart: family is not an exponential family in the {0} chart")]
    NotExponential(Chart),

    #[error("transform: position-dependent map requires its derivative field")]
    MissingDerivativeField,

    #[error("geodesic: shooting did not converge after {iterations} iterations (residual {residual:e})")]
    ShootingNoConvergence { iterations: usize, residual: f64 },

    #[error("quadrature: no convergence (error estimate {0:e})")]
    QuadratureNonConvergence(f64),

    #[error("state: not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("state: near-degenerate family at the evaluation point")]
    DegenerateState,

    #[error("loop: vanishing overlap between consecutive states at segment {0}")]
    VanishingOverlap(usize),

    #[error("mesh: boundary does not match loop ({0})")]
    MeshBoundaryMismatch(String),

    #[error("solver: singular linear system")]
    SingularSystem,

    #[error("table: {0}")]
    InvalidTable(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for failures of an iterative numerical method, as opposed to
    /// rejected inputs.
    pub fn is_non_convergence(&self) -> bool {
        matches!(
            self,
            Error::ShootingNoConvergence { .. }
                | Error::QuadratureNonConvergence(_)
                | Error::SingularSystem
        )
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
