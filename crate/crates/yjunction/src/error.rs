use std::io;

/// Errors of the std layer: I/O, file formats and everything from the core.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] yjunction_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("QASM {line}:{col}: {msg}")]
    Qasm { line: usize, col: usize, msg: String },
    #[error("{file} line {line}: {msg}")]
    Format { file: &'static str, line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
