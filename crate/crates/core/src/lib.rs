//! Simulation and analysis of correlated (memory) two-qubit Pauli channels.
//!
//! The crate covers the Z⊗Z-symmetric channel family with equal marginals,
//! its three-parameter subclass and a Gaussian random-rotation memory model
//! that reduces to it. For each family it provides closed-form output
//! spectra, optimal input-state classification and Holevo quantities, phase
//! diagram scans, and a brute-force oracle that checks every closed form
//! against dense numerics.
//!
//! All entropies are in bits.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod oracle;
pub mod phase;
pub mod sampling;
pub mod spec;
pub mod verify;

pub use analytic::{
    classify_subclass, classify_symmetric, holevo_covariant, optimize_symmetric, output_entries, subclass_eigenvalues,
    y_functional, InputState, OutputEntries, PhaseLabel, Classification, DEFAULT_TIE_TOL,
};
pub use channel::{ErrorProbabilityMatrix, PauliChannel, SubclassParams, SymmetricChannelParams};
pub use error::{Error, Result};
pub use gaussian::GaussianModelParams;
pub use linalg::{ComplexMatrix, Spectrum};
pub use phase::{CoexistenceBand, Domain, PhasePoint, Polyline, ScanGrid};
pub use spec::ChannelSpec;
