use crate::numerics::ResidualReport;

/// Which axis a finite-difference stencil was attempted along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::X => write!(f, "x"),
            Axis::Y => write!(f, "y"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no second-order stencil along {axis} at node ({i}, {j})")]
    StencilFailure { i: usize, j: usize, axis: Axis },

    #[error("{context}: vector field is not a gradient (curl max {:.3e} > tol {tol:.3e})", report.max_abs)]
    NotAGradient {
        context: String,
        report: ResidualReport,
        tol: f64,
    },

    #[error("topology: {0}")]
    Topology(String),

    #[error("domain: {0}")]
    Domain(String),

    #[error("graph is not spacelike at {} node(s) (min 1 - |grad|^2 = {min_margin:.3e})", nodes.len())]
    SpacelikeViolation { nodes: Vec<usize>, min_margin: f64 },

    #[error("constructed twin is (nearly) lightlike: min margin {min_margin:.3e} below guard {guard:.1e}")]
    LightlikeDegeneracy {
        min_margin: f64,
        guard: f64,
        margin: Vec<f64>,
    },

    #[error("graph is not strictly area-decreasing at {} node(s) (max |J| = {max_norm:.6})", nodes.len())]
    NotAreaDecreasing { nodes: Vec<usize>, max_norm: f64 },

    #[error("grids of the two inputs differ")]
    GridMismatch,

    #[error("wrong signature: {0}")]
    WrongSignature(String),

    #[error("ode singularity: {0}")]
    Singularity(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
