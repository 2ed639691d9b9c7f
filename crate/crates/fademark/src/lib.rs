//! File formats, reports, and batch pipelines for the fade-blend
//! watermarking toolkit. The algorithms themselves live in
//! [`fademark_core`]; this crate adds everything that touches the filesystem
//! plus the machinery behind the `fademark` command-line tool.

pub mod error;
pub mod formats;
pub mod manifest;
pub mod pipeline;
pub mod report;

pub use error::AppError;
