//! Harness-level errors and their process exit-code mapping.
//!
//! Two failure families matter to the CLI: configuration errors (bad flags,
//! inconsistent grids) exit with code 2, and data errors (unreadable files,
//! malformed cells, bound violations, solver failures on the supplied data)
//! exit with code 3. Success is exit 0.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    /// A cell that failed numeric parsing, located by 1-based file line and
    /// 1-based column within that line.
    #[error("{source_name}:{row}:{col}: cannot parse {token:?} as a number")]
    Parse { source_name: String, row: usize, col: usize, token: String },
    /// A row whose width disagrees with the first data row (1-based line).
    #[error("{source_name}:{row}: ragged row: {got} columns, expected {expected}")]
    Ragged { source_name: String, row: usize, expected: usize, got: usize },
    #[error("{source_name}: no data rows")]
    Empty { source_name: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Data that parsed but violates a declared contract (bounds, shapes).
    #[error("data error: {0}")]
    Data(String),
    #[error("solver error: {0}")]
    Solver(#[from] primo_core::Error),
}

impl HarnessError {
    /// Process exit code for the CLI: 2 for configuration errors, 3 for
    /// anything wrong with the data itself.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = core::result::Result<T, HarnessError>;
