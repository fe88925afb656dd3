use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by validation, evaluation, differencing and the diagnostics.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("separation constants coincide (alpha = beta = {0}); the velocity amplitude is undefined")]
    DegenerateSeparation(f64),
    #[error("parameter `{name}` = {value} must be {constraint}")]
    NonPositive {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("the transport-only variant requires gamma = 0, got gamma = {0}")]
    BadVariant(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("grid has an axis or time list with zero points")]
    EmptyGrid,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("t = {t} lies outside the solution domain [0, {limit})")]
    OutOfDomain { t: f64, limit: f64 },
    #[error("integration end time {t_end} is not below the blow-up time {t_blow}")]
    StepTooLarge { t_end: f64, t_blow: f64 },
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("invalid stencil: {0}")]
    InvalidStencil(String),
    #[error("stencil node at t = {t} leaves the field's domain")]
    FootprintOutOfDomain { t: f64 },
    #[error("finite-difference error vanishes at h = {h}; the stencil is exact for this field")]
    ZeroError { h: f64 },
    #[error("need at least {needed} samples, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("profile value {value} at t = {t} is not positive")]
    NonPositiveValue { t: f64, value: f64 },
    #[error("no finite blow-up time for these parameters")]
    NoBlowUp,
    #[error("threshold must lie strictly between 0 and 1, got {0}")]
    BadThreshold(f64),
    #[error("expected a {expected}-dimensional point, got {got} coordinates")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("profile sample {index} does not resolve below the blow-up time (ratio too small or count too large)")]
    DegenerateProfile { index: usize },
    #[error("at x = {point:?}, t = {t}: {source}")]
    AtPoint {
        point: Vec<f64>,
        t: f64,
        source: Box<Error>,
    },
    #[error("output: {0}")]
    Output(String),
}

impl Error {
    /// Stable machine-readable name of the error variant. Location wrappers
    /// report the kind of the underlying error.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateSeparation(_) => "DegenerateSeparation",
            Error::NonPositive { .. } => "NonPositive",
            Error::BadVariant(_) => "BadVariant",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::EmptyGrid => "EmptyGrid",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::InvalidStep(_) => "InvalidStep",
            Error::InvalidStencil(_) => "InvalidStencil",
            Error::FootprintOutOfDomain { .. } => "FootprintOutOfDomain",
            Error::ZeroError { .. } => "ZeroError",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::NonPositiveValue { .. } => "NonPositiveValue",
            Error::NoBlowUp => "NoBlowUp",
            Error::BadThreshold(_) => "BadThreshold",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Unsupported(_) => "Unsupported",
            Error::DegenerateProfile { .. } => "DegenerateProfile",
            Error::AtPoint { source, .. } => source.kind(),
            Error::Output(_) => "Output",
        }
    }

    pub(crate) fn at(self, point: Vec<f64>, t: f64) -> Error {
        Error::AtPoint {
            point,
            t,
            source: Box::new(self),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Output(e.to_string())
    }
}
