use thiserror::Error;

use crate::graph::InducedMinorModel;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The resampling loop hit its cap without clearing every collision.
    #[error("embedding failed after {resamples} resamples")]
    EmbeddingFailed { resamples: u64 },

    /// The graph was not H-induced-minor-free; the model is the certificate.
    #[error("graph contains the pattern as an induced minor")]
    ModelFound(Box<InducedMinorModel>),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
