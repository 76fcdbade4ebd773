use thiserror::Error;

use crate::report::ValidationReport;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("leg signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("bad leg positions: {0}")]
    BadPositions(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("validation failed:\n{0}")]
    Validation(Box<ValidationReport>),
    #[error("internal consistency check failed:\n{0}")]
    Internal(Box<ValidationReport>),
    #[error("weak R-matrix is not valid over the twisted pair:\n{0}")]
    WrongWeakContext(Box<ValidationReport>),
    #[error("element is not central")]
    NotCentral,
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("composition mismatch: {0}")]
    CompositionMismatch(String),
    #[error("2-cell boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("triangular mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("source is not triangular")]
    NotTriangular,
    #[error("projection mismatch:\n{0}")]
    ProjectionMismatch(Box<ValidationReport>),
    #[error("counit of the element is not 1")]
    CounitNotOne,
    #[error("scale parameter must be nonzero")]
    ZeroScale,
    #[error("invalid document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
