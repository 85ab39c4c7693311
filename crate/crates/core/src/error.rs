use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RipaError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("face {0} is on the boundary and has no dual edges")]
    BoundaryFace(usize),

    #[error("non-finite initial value for {field} in cell {cell}")]
    NonFiniteSample { field: &'static str, cell: usize },

    #[error("logarithmic mean requires positive arguments, got ({0}, {1})")]
    NonPositiveMean(f64, f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{field} became non-positive ({value:e}) in cell {cell} at t = {time}")]
    Positivity {
        field: &'static str,
        cell: usize,
        value: f64,
        time: f64,
    },

    #[error("time step underflow: dt = {dt:e} at t = {time} (binding constraint: {binding})")]
    TimeStepUnderflow {
        dt: f64,
        time: f64,
        binding: String,
    },

    #[error("time step {dt:e} violates the {binding} bound {bound:e} after {retries} retries")]
    RetriesExhausted {
        dt: f64,
        bound: f64,
        binding: String,
        retries: usize,
    },

    #[error("fixed time step {dt:e} exceeds the admissible bound {bound:e} ({binding})")]
    FixedStepTooLarge { dt: f64, bound: f64, binding: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("unknown case '{name}'; available: {available}")]
    UnknownCase { name: String, available: String },

    #[error("missing run: {0}")]
    MissingRun(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for RipaError {
    fn from(err: std::io::Error) -> Self {
        RipaError::Io(err.to_string())
    }
}

impl RipaError {
    /// True for failures of the numerical solver itself (as opposed to bad input).
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            RipaError::Positivity { .. }
                | RipaError::TimeStepUnderflow { .. }
                | RipaError::RetriesExhausted { .. }
                | RipaError::FixedStepTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, RipaError>;
