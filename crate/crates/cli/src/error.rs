use thiserror::Error;

/// Everything the command line can fail with.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] wuclass::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{source_name}:{line}:{column}: {message}")]
    Spec {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for failed computations, 2 for malformed or invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_input_error() => 1,
            _ => 2,
        }
    }

    /// `"domain"` or `"input"`, matching [`Self::exit_code`].
    pub fn kind(&self) -> &'static str {
        if self.exit_code() == 1 {
            "domain"
        } else {
            "input"
        }
    }
}
