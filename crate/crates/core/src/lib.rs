//! Finite-key guessing-probability bounds, two-universal GF(2) hashing,
//! and an exact brute-force oracle for the classical security claims.
//!
//! The crate has five parts:
//!
//! * [`numerics`]: log-domain probability arithmetic ([`Log2Prob`]),
//!   the binary entropy function, and decimal rendering of values far
//!   below `f64` range.
//! * [`bounds`]: the finite-key length formula, its inverse solver,
//!   the fixed-point key length, and the guessing-probability bounds
//!   derived from them.
//! * [`hashing`]: packed bit vectors, seeded random GF(2) matrices and
//!   modified Toeplitz matrices, and the hash/truncate/submatrix
//!   operations.
//! * [`oracle`]: exhaustive enumeration that recomputes guessing
//!   probabilities as exact rationals and cross-checks the inequalities
//!   the bounds rely on.
//! * [`files`]: plain-text key and matrix file formats.

pub mod bounds;
pub mod files;
pub mod hashing;
pub mod numerics;
pub mod oracle;
pub mod rng;

pub use bounds::{BoundReport, BoundsError, ProtocolParams};
pub use hashing::{BitMatrix, BitVector, HashSeed, MatrixKind};
pub use numerics::Log2Prob;
