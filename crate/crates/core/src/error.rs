use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The resolvent `(iω − M)` could not be inverted reliably.
    #[error("resolvent is singular at omega = {omega:e} rad/s (condition number {condition:e})")]
    SingularResolvent { omega: f64, condition: f64 },

    #[error("{name} = {value} is outside its domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("cannot cascade transfer sets evaluated at {first:e} and {second:e} rad/s")]
    FrequencyMismatch { first: f64, second: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("expected exactly one force channel, found {0}")]
    ForceChannelCount(usize),

    /// The force signal no longer reaches the measured phase quadrature.
    #[error("force-to-phase coefficient {coefficient:e} is below the floor at omega = {omega:e} rad/s")]
    VanishingCoefficient { omega: f64, coefficient: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no finite objective value inside the measurement-strength bracket at omega = {omega:e} rad/s")]
    NotBracketed { omega: f64 },

    #[error("signal path fully lost ({0}); the noise floor is infinite")]
    SignalLost(&'static str),

    #[error("oscillator mass is required for physical units")]
    MissingMass,

    #[error("temperature is required: {0}")]
    MissingTemperature(&'static str),

    #[error("normalization {0} cannot be converted to physical units")]
    Normalization(&'static str),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("at omega/omega_m = {omega_over_omega_m:e}: {source}")]
    AtFrequency {
        omega_over_omega_m: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by user input (configuration, presets, files)
    /// rather than by the numerics.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config { .. }
            | Error::UnknownPreset(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::InvalidParameter { .. }
            | Error::Domain { .. }
            | Error::MissingMass
            | Error::MissingTemperature(_)
            | Error::Normalization(_) => true,
            Error::AtFrequency { source, .. } => source.is_config(),
            _ => false,
        }
    }

    pub(crate) fn at_frequency(self, omega_over_omega_m: f64) -> Self {
        Error::AtFrequency {
            omega_over_omega_m,
            source: Box::new(self),
        }
    }
}
