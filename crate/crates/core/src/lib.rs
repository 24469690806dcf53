//! Distance-based measures of synchronization for open quantum systems.

pub mod error;
pub mod lindblad;
pub mod linalg;
pub mod measures;
pub mod models;
pub mod ops;
pub mod optimize;
pub mod random;
pub mod sweep;
pub mod sync;

pub use error::{Error, Result};
