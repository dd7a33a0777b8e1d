use thiserror::Error;

/// Crate-wide error type.
///
/// `PrecisionExhausted` is the only retryable variant: callers that own a
/// precision budget (the CLI ladder) may double the working precision and try
/// again. Everything else is a hard input or contract failure.
#[derive(Debug, Error)]
pub enum Error {
    /// Input fails a structural precondition (bad polynomial, wrong
    /// coordinate length, inconsistent unit data, unparsable spec file).
    #[error("validation: {0}")]
    Validation(String),

    /// The requested certification could not be completed at the working
    /// precision. Retrying at higher precision may succeed.
    #[error("precision exhausted at {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },

    /// Inversion of the zero element.
    #[error("division by zero element")]
    ZeroElement,

    /// Elements of two different number fields were mixed.
    #[error("elements belong to different fields")]
    FieldMismatch,

    /// A twist produced a non-primitive element, so the twisted form would
    /// not have full degree.
    #[error("twisted element does not generate the field")]
    DegenerateTwist,

    /// Embedding values that must be distinct coincide (zero denominator in
    /// the coordinate recovery).
    #[error("coincident embedding values")]
    CoincidentEmbeddings,

    /// The form has a real root, so the totally imaginary bound does not
    /// apply.
    #[error("form has a real root")]
    RealRootPresent,

    /// The logarithmic embedding matrix does not have full rank at a
    /// certifiable margin.
    #[error("unit log matrix is rank deficient: {0}")]
    RankDeficient(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn precision(bits: u32, context: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            bits,
            context: context.into(),
        }
    }

    /// Process exit code used by the CLI: 2 for input problems, 3 for
    /// precision exhaustion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted { .. } => 3,
            _ => 2,
        }
    }

    /// Stable machine-readable tag for JSON error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::PrecisionExhausted { .. } => "precision-exhausted",
            Error::ZeroElement => "zero-element",
            Error::FieldMismatch => "field-mismatch",
            Error::DegenerateTwist => "degenerate-twist",
            Error::CoincidentEmbeddings => "coincident-embeddings",
            Error::RealRootPresent => "real-root-present",
            Error::RankDeficient(_) => "rank-deficient",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
