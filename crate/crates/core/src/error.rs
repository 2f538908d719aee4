use thiserror::Error;

use crate::model::Species;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("position {position} nm lies outside the cavity region [0, {length}] nm")]
    PositionOutOfRange { position: f64, length: f64 },

    #[error("mode profile vanishes at every donor position; cannot normalise to the Rabi frequency")]
    DegenerateProfile,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("collective coupling of the {0:?} ensemble is zero")]
    ZeroCollectiveCoupling(Species),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("negative relaxation rate {rate:e} for eigenstate {from} -> {to}")]
    NegativeRate { from: usize, to: usize, rate: f64 },

    #[error("no emission: all cavity-weighted polariton populations vanish")]
    NoEmission,

    #[error("steady state is not unique (pivot ratio {pivot_ratio:e})")]
    RankDeficient { pivot_ratio: f64 },

    #[error("steady-state residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("transition {from} -> {to} is not downhill")]
    NotDownhill { from: String, to: String },

    #[error("level {0} has no outflow; rate network is singular")]
    SingularNetwork(String),

    #[error("sweep point {index} ({label}) failed: {source}")]
    SweepPoint {
        index: usize,
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
