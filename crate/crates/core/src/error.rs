use alloc::string::String;

/// Errors raised by the algebraic constructors and evaluators.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    Arity { left: usize, right: usize },

    #[error("{what} out of range: {value} not in {min}..={max}")]
    Range {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("operation requires a nonzero vector")]
    ZeroVector,

    #[error("module family mismatch: {0}")]
    Family(String),

    #[error("result exceeds degree cap {cap} (needed {needed})")]
    CapExceeded { cap: u32, needed: u32 },

    #[error("incomplete truncation window: {0}")]
    Window(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid module data: {0}")]
    InvalidModule(String),
}

impl Error {
    /// Stable name used by the CLI when reporting domain errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Arity { .. } => "ArityError",
            Error::Range { .. } => "RangeError",
            Error::ZeroVector => "ZeroVectorError",
            Error::Family(_) => "FamilyError",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::Window(_) => "WindowError",
            Error::Hypothesis(_) => "HypothesisError",
            Error::InvalidModule(_) => "InvalidModuleError",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn check_arity(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::Arity { left, right })
    }
}
