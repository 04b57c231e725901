use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// The variants fall into three groups that the command-line front end maps
/// onto distinct exit codes: malformed input (`Parse`, `Validation`,
/// `UnknownCrossing`, `UnknownArc`, `Shape`, `Json`), arithmetic preconditions
/// (`Domain`, `DivisionByZero`, `SingularMatrix`), and failures of the
/// diagrammatic construction itself (`Framing`, `Certification`, `Pipeline`).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid diagram: {0}")]
    Validation(String),
    #[error("unknown crossing {0}")]
    UnknownCrossing(usize),
    #[error("unknown arc {0}")]
    UnknownArc(usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("framing error: {0}")]
    Framing(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("pipeline error: {0}")]
    Pipeline(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by the
    /// computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Validation(_)
                | Error::UnknownCrossing(_)
                | Error::UnknownArc(_)
                | Error::Shape(_)
                | Error::Json(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
