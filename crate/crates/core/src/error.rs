use thiserror::Error;

/// Errors raised by the library. Each variant maps to one failure class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: bad polynomial, unparsable number, wrong shape.
    #[error("format error: {0}")]
    Format(String),
    /// Division by zero or another undefined exact operation.
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    /// The input lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested precision is insufficient; retry with more digits.
    #[error("precision error: {0}")]
    Precision(String),
    /// The defining polynomial has a repeated root.
    #[error("squarefreeness error: {0}")]
    Squarefree(String),
    /// An element could not be written in the supplied generators.
    #[error("presentation incomplete: {0}")]
    PresentationIncomplete(String),
    /// A section does not belong to the ideal.
    #[error("membership error: {0}")]
    Membership(String),
    /// The claimed generator does not generate the ideal power.
    #[error("principality error: {0}")]
    Principality(String),
    /// Objects from different number fields were combined.
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
}

impl Error {
    /// Short stable identifier for machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Format(_) => "format",
            Error::Arithmetic(_) => "arithmetic",
            Error::Domain(_) => "domain",
            Error::Precision(_) => "precision",
            Error::Squarefree(_) => "squarefree",
            Error::PresentationIncomplete(_) => "presentation-incomplete",
            Error::Membership(_) => "membership",
            Error::Principality(_) => "principality",
            Error::FieldMismatch(_) => "field-mismatch",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
