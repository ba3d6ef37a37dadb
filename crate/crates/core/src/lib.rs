//! Iris fuzzy sketches built on Reed-Muller product codes.
//!
//! - [`codes`]: RM(1,m) codes, masked Hamming matching, an exhaustive ML decoder.
//! - [`minsum`]: product codes and the row/column min-sum decoder.
//! - [`sketch`]: enrollment and verification with an interleaver and rotations.
//! - [`capacity`]: entropy-based limits on the achievable false reject rate.
//! - [`channel`]: synthetic matching and non-matching channels, template files.
//! - [`eval`]: FRR / FAR measurement.

pub mod bits;
pub mod capacity;
pub mod channel;
pub mod cli;
pub mod codes;
pub mod error;
pub mod eval;
pub mod fraction;
pub mod minsum;
pub mod sketch;

pub use bits::{BitVector, TernaryVector, Trit};
pub use error::{Error, Result};
pub use fraction::Fraction;
pub use minsum::ProductCode;
pub use sketch::{Sketch, Template};
