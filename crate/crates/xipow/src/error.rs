use std::fmt;

/// Error categories shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    NegativeExponent,
    ZeroPoly,
    ConstantPoly,
    NotUniqueRoot,
    NonpositiveBase,
    DegenerateInput,
    MissingConstant,
    InvalidBase,
    ResourceLimit,
    UndecidableBase,
    Precondition,
    NoStrategy,
    UniversalQuantifier,
    QeUnsupported,
    DelegateFailure,
    NonAlgebraicBase,
    InvalidParams,
    Parse,
    Io,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::NegativeExponent => "NEGATIVE_EXPONENT",
            ErrorKind::ZeroPoly => "ZERO_POLY",
            ErrorKind::ConstantPoly => "CONSTANT_POLY",
            ErrorKind::NotUniqueRoot => "NOT_UNIQUE_ROOT",
            ErrorKind::NonpositiveBase => "NONPOSITIVE_BASE",
            ErrorKind::DegenerateInput => "DEGENERATE_INPUT",
            ErrorKind::MissingConstant => "MISSING_CONSTANT",
            ErrorKind::InvalidBase => "INVALID_BASE",
            ErrorKind::ResourceLimit => "RESOURCE_LIMIT",
            ErrorKind::UndecidableBase => "UNDECIDABLE_BASE",
            ErrorKind::Precondition => "PRECONDITION",
            ErrorKind::NoStrategy => "NO_STRATEGY",
            ErrorKind::UniversalQuantifier => "UNIVERSAL_QUANTIFIER",
            ErrorKind::QeUnsupported => "QE_UNSUPPORTED",
            ErrorKind::DelegateFailure => "DELEGATE_FAILURE",
            ErrorKind::NonAlgebraicBase => "NON_ALGEBRAIC_BASE",
            ErrorKind::InvalidParams => "INVALID_PARAMS",
            ErrorKind::Parse => "PARSE",
            ErrorKind::Io => "IO",
        }
    }

    /// True for failures caused by a budget rather than by the input.
    pub fn is_resource(self) -> bool {
        matches!(self, ErrorKind::ResourceLimit)
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind}: {detail}")]
pub struct Error {
    pub kind: ErrorKind,
    pub detail: String,
}

impl Error {
    pub fn new(kind: ErrorKind, detail: impl Into<String>) -> Self {
        Error { kind, detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn err<T>(kind: ErrorKind, detail: impl Into<String>) -> Result<T> {
    Err(Error::new(kind, detail))
}
