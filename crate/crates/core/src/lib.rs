//! Expansivity, hyperbolicity and shadowing for weighted shift operators and
//! finite-dimensional linear maps.

pub mod error;
pub mod magnitude;
pub mod classifier;
pub mod cli;
pub mod matrix_lab;
pub mod sequence_space;
pub mod shadowing;

pub use error::{Error, Result};
pub use magnitude::Magnitude;
