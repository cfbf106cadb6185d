use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-physical state{}: {reason}", node_suffix(.node))]
    NonPhysicalState {
        node: Option<(usize, usize)>,
        reason: String,
    },

    #[error("detached shock: deflection {theta_deg:.6} deg exceeds theta_max {theta_max_deg:.6} deg at M = {mach}")]
    DetachedShock {
        mach: f64,
        theta_deg: f64,
        theta_max_deg: f64,
    },

    #[error("upstream normal Mach number {normal_mach} is not supersonic")]
    SubsonicNormalMach { normal_mach: f64 },

    #[error("Mach number {mach} is below 1")]
    SubsonicInput { mach: f64 },

    #[error("no regular wave-matching solution: {0}")]
    NoRegularSolution(String),

    #[error("stencil at index {index} needs 3 neighbours on each side of a line of length {len}")]
    StencilOutOfRange { index: usize, len: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("grid-vector metadata mismatch: {0}")]
    MetadataMismatch(String),

    #[error("angle is undefined for a zero vector")]
    ZeroVector,

    #[error("degenerate angle {0} deg")]
    DegenerateAngle(f64),

    #[error("true error norm is zero, effectivity undefined")]
    ZeroTrueError,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{label} did not converge in {iters} iterations (relative residual {residual:e})")]
    NotConverged { label: String, iters: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("I/O: {0}")]
    Io(String),
}

fn node_suffix(node: &Option<(usize, usize)>) -> String {
    match node {
        Some((i, j)) => format!(" at node ({i}, {j})"),
        None => String::new(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
