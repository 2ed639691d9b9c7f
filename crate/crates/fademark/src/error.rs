//! Application-level errors and their exit codes.
//!
//! Exit code map: 0 success, 1 partial batch failure, 2 usage or parameter
//! error (including input paths that do not exist), 3 I/O or file-format
//! error.

use fademark_core::attack::AttackError;
use fademark_core::fade::FadeError;
use fademark_core::metrics::MetricsError;
use fademark_core::oracle::OracleError;
use thiserror::Error;

use crate::formats::{FileError, FormatError};

pub const EXIT_PARTIAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Fade(#[from] FadeError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}: {message}")]
    Manifest { path: String, message: String },
    #[error(transparent)]
    File(FileError),
}

impl From<FileError> for AppError {
    fn from(e: FileError) -> Self {
        AppError::File(e)
    }
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_)
            | AppError::Fade(_)
            | AppError::Metrics(_)
            | AppError::Attack(_)
            | AppError::Oracle(_) => EXIT_USAGE,
            AppError::Format(_) | AppError::Io(_) | AppError::Manifest { .. } => EXIT_IO,
            // a path the user got wrong is a usage problem; a file that
            // exists but cannot be read or decoded is an I/O problem
            AppError::File(FileError::Missing(_)) | AppError::File(FileError::UnknownFormat { .. }) => {
                EXIT_USAGE
            }
            AppError::File(_) => EXIT_IO,
        }
    }
}
