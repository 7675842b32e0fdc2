use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("base field is not a solution (residual L∞ = {residual:e}, gate {gate:e})")]
    NotASolution { residual: f64, gate: f64 },

    #[error("singular Jacobian at {0:?}")]
    SingularJacobian([f64; 9]),

    #[error("megaideal `{label}` disagrees with its analytic description: {detail}")]
    ChainMismatch { label: String, detail: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
