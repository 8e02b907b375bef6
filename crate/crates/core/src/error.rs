use thiserror::Error;

use crate::fusion::Label;

/// Errors produced by fusion-algebra construction and the numerical layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A label does not belong to the model it was handed to.
    #[error("malformed label {0} for this model")]
    MalformedLabel(Label),

    /// A product of a finite fragment model would leave the known fragment.
    #[error("product {0} * {1} leaves the known fragment")]
    OutOfFragment(Label, Label),

    /// The requested operation needs an enumerable model.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A fusion document failed structural validation before axiom checks.
    #[error("invalid fusion document: {0}")]
    InvalidDocument(String),

    /// A fusion document parsed but violates the fusion-algebra axioms.
    #[error("fusion axioms violated:\n{0}")]
    AxiomsViolated(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
