use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("velocity norm {norm} is not strictly subluminal")]
    Superluminal { norm: f64 },

    #[error("non-finite component in {what}")]
    NonFinite { what: &'static str },

    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("spin state has zero norm")]
    ZeroState,

    #[error("states live on different momentum fibers")]
    FiberMismatch,

    #[error("transverse velocity {rho:e} too small: the V^3 eigenbasis direction is undefined")]
    UndefinedDirection { rho: f64 },

    #[error("probability {value} fell outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },

    #[error("significance window {delta} must lie in (0, 1/4)")]
    InvalidDelta { delta: f64 },

    #[error("resolution {resolution} must be at least 2")]
    InvalidResolution { resolution: usize },

    #[error("velocity norm {vnorm} is out of range for this map")]
    InvalidVnorm { vnorm: f64 },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
