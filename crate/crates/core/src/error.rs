use thiserror::Error;

/// Errors raised by the library. CLI exit codes are derived from the variant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lane count: {0}")]
    InvalidLaneCount(String),
    #[error("invalid vehicle parameters: {0}")]
    InvalidVehicleParams(String),
    #[error("invalid lane {0}")]
    InvalidLane(String),
    #[error("no odd multiple of T1 keeps {category} inside the speed band [{lo:.3}, {hi:.3}] m/s (length {length:.3} m); nearest achievable speeds: below {below}, above {above}")]
    InfeasibleBand {
        category: String,
        length: f64,
        lo: f64,
        hi: f64,
        below: String,
        above: String,
    },
    #[error("resolution {resolution} s is coarser than T1/4 = {limit} s")]
    ResolutionTooCoarse { resolution: f64, limit: f64 },
    #[error("audit window must be at least 2, got {0}")]
    WindowTooSmall(usize),
    #[error("queue is unstable: 2*theta*T1 = {0} must be < 1")]
    UnstableQueue(f64),
    #[error("invalid arrival distribution: {0}")]
    InvalidDistribution(String),
    #[error("adjustment zone too short: {0}")]
    ZoneTooShort(String),
    #[error("target {target} s is earlier than free-flow arrival {free_flow} s")]
    TargetTooEarly { target: f64, free_flow: f64 },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("config syntax error: {0}")]
    ConfigSyntax(String),
    #[error("config error at `{field}`: {message}")]
    ConfigSemantic { field: String, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
