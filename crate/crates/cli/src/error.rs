use std::fmt;
use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error{}: {message}", location(.line, .field))]
    Config {
        line: Option<usize>,
        field: Option<String>,
        message: String,
    },

    #[error("{context}: {source}")]
    Solver {
        context: String,
        #[source]
        source: leaky_core::Error,
    },

    #[error("cannot {action} {}: {source}", .path.display())]
    Io {
        action: &'static str,
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{failed} selftest check(s) failed")]
    Acceptance { failed: usize },
}

fn location(line: &Option<usize>, field: &Option<String>) -> String {
    match (line, field) {
        (Some(l), Some(f)) => format!(" at line {l}, field '{f}'"),
        (Some(l), None) => format!(" at line {l}"),
        (None, Some(f)) => format!(" in field '{f}'"),
        (None, None) => String::new(),
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 1,
            CliError::Solver { .. } | CliError::Io { .. } => 2,
            CliError::Acceptance { .. } => 3,
        }
    }
}

/// Attaches context to core errors.
pub trait SolverContext<T> {
    fn context<C: fmt::Display>(self, context: C) -> Result<T, CliError>;
}

impl<T> SolverContext<T> for leaky_core::Result<T> {
    fn context<C: fmt::Display>(self, context: C) -> Result<T, CliError> {
        self.map_err(|source| CliError::Solver {
            context: context.to_string(),
            source,
        })
    }
}
