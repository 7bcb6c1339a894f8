//! JSON encodings, request evaluation and verification suites on top of
//! `witt-smooth-core`.

pub mod eval;
pub mod json;
pub mod modules;
pub mod suites;

pub use eval::eval;
pub use modules::{module_from, AnyModule};
pub use suites::{run_suite, SuiteOptions, SuiteReport};

/// Exit code for a failed check or a domain error.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for malformed input or an unknown name.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] witt_smooth_core::Error),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Domain(e) => e.name(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_FAILURE,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"error": self.name(), "message": self.to_string()})
    }
}
