//! Dense complex matrices of dimension 2 and 4, Pauli operators, Hermitian
//! eigensolvers and entropies.
//!
//! Entropies are measured in bits throughout the crate; natural logarithms
//! are never used for reported quantities.

mod eigen;
mod entropy;
mod matrix;

pub use eigen::{hermitian_2x2_eigenvalues, hermitian_eigen, hermitian_eigenvalues};
pub use entropy::{binary_entropy, von_neumann_entropy, Spectrum};
pub use matrix::{kron, pauli, ComplexMatrix};

pub use num_complex::Complex64;

/// Eigenvalues in `[-NEGATIVITY_TOL, 0)` are treated as zero.
pub const NEGATIVITY_TOL: f64 = 1e-12;
/// Allowed deviation of a density matrix trace (or spectrum sum) from one.
pub const TRACE_TOL: f64 = 1e-9;
