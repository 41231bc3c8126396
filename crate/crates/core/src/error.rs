use thiserror::Error;

/// Errors produced by the period computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent {0} is odd; only even potentials are supported")]
    OddExponent(u32),
    #[error("leading coefficient must be positive for a confining potential")]
    NonPositiveLeading,
    #[error("potential has no terms")]
    EmptyPotential,
    #[error("potential must vanish at the origin (constant term {0})")]
    NonZeroConstant(f64),
    #[error("{family} family requires m >= 2, got {m}")]
    BadM { family: &'static str, m: u32 },
    #[error("cannot parse potential: {0}")]
    ParsePotential(String),

    #[error("amplitude must be non-negative, got {0}")]
    NegativeAmplitude(f64),
    #[error("period diverges at zero amplitude for this potential")]
    ZeroAmplitude,
    #[error("position {x} lies outside the turning points +/-{amplitude}")]
    OutOfRange { x: f64, amplitude: f64 },

    #[error("division by (A^2 - x^2) left remainder {remainder:e} (scale {scale:e})")]
    NonzeroRemainder { remainder: f64, scale: f64 },
    #[error("no free parameter defined for x^{0}")]
    MissingLambda(u32),
    #[error("lambda table mode does not match the potential: {0}")]
    ModeMismatch(&'static str),

    #[error("{function} is undefined for parameter {value}")]
    Domain { function: &'static str, value: f64 },
    #[error("value leaves double-precision range: {0}")]
    OverflowRisk(&'static str),
    #[error("quadrature did not converge: {coarse} vs {fine}")]
    QuadratureNonConvergence { coarse: f64, fine: f64 },
    #[error("kernel R is not positive at theta = {theta}; potential is not confining on [-A, A]")]
    NonPositiveKernel { theta: f64 },
    #[error("integration reached |v| >= 1 at t = {t} (step size too large)")]
    SuperluminalState { t: f64 },
    #[error("integration exceeded {0} steps")]
    MaxStepsExceeded(usize),

    #[error("relative error is undefined for a zero reference value")]
    ZeroReference,
    #[error("no closed form available: {0}")]
    NoClosedForm(&'static str),
    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },
    #[error("at A = {amplitude}: {source}")]
    Row {
        amplitude: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of a numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::OverflowRisk(_)
            | Error::QuadratureNonConvergence { .. }
            | Error::SuperluminalState { .. }
            | Error::MaxStepsExceeded(_)
            | Error::NonzeroRemainder { .. } => true,
            Error::Row { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
