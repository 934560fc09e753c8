use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the physically meaningful range.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("spectral density is not tabulated at frequency {omega}")]
    SpectralLookup { omega: f64 },

    #[error("reservoir `{0}` has no coupling in this system")]
    MissingReservoir(String),

    #[error("invalid coupling for reservoir `{reservoir}`: {reason}")]
    InvalidCoupling { reservoir: String, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot combine kernels of different modes without opting in")]
    ModeMismatch,

    /// Two distinct transition frequencies are too close for the secular
    /// test to decide whether they match.
    #[error(
        "transition frequencies {first} and {second} of reservoir `{reservoir}` are nearly \
         degenerate; the secular approximation is ambiguous here"
    )]
    NearDegenerate { reservoir: String, first: f64, second: f64 },

    #[error("steady state is not unique: generator nullity {nullity} (smallest singular values {smallest:?})")]
    DegenerateSteadyState { nullity: usize, smallest: Vec<f64> },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("no dissipation: all spectral weights vanish, the steady state is undefined")]
    NoDissipation,

    #[error("closed form requires a uniform spectral density: {0}")]
    NonUniformSpectralDensity(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
