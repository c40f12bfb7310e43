//! Exact complexification of real modulated quivers with quadratic
//! relations, gentle classification, and the correspondence with
//! C-semilinear clannish algebras of gentle type.
//!
//! Every computation is carried out over the rationals. Complex numbers are
//! Gaussian rationals and quaternions have rational coefficients.

pub mod clannish;
pub mod complexify;
pub mod gentle;
pub mod linalg;
pub mod modquiver;
pub mod mqtext;
pub mod random;
pub mod rings;
pub mod scalar;
pub mod tables;
pub mod verify;

mod parse;

pub use rings::{BimoduleKind, RingLabel};
pub use scalar::{Gaussian, Quaternion, Rational};

/// Location-aware error for textual inputs.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}
