//! Front end for the setlog solver: interactive session, batch runs and
//! invariant checking.

pub mod batch;
pub mod invariants;
pub mod repl;

use setlog::engine::EngineError;
use setlog::verifier::VerifyError;

pub const PROMPT: &str = "{log}=> ";
pub const ERROR_PREFIX: &str = "***ERROR***: ";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid manifest {path}: {message}")]
    Manifest { path: String, message: String },
    #[error("invalid expectation on line {line}: {text:?}")]
    Expectation { line: usize, text: String },
    #[error("{0} goals but {1} expectations")]
    ExpectationCount(usize, usize),
}
