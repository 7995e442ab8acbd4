//! Pauli-Villars regularisation as a quantised low-pass filter.
//!
//! * [`reg_algebra`]: mass ladders, the filter functions `G^(K,L)(z)`, their
//!   partial fractions and recursion identities.
//! * [`contour`]: time-domain propagators over the Feynman, retarded,
//!   closed and single-sideband contours, with a quadrature oracle.
//! * [`oscillator`]: the two-mode toy filter: Fock matrices, dual operator
//!   sets, the non-Hermitian Hamiltonian, response, Born series and the
//!   pseudo-unitary S-matrix.
//! * [`dirac`]: gamma-matrix algebra of the regularised fermion filter.
//! * [`power_counting`]: superficial degrees of divergence.
//! * [`verify`]: the invariant suite behind `pvfilter verify`.

pub mod contour;
pub mod dirac;
pub mod error;
pub mod oscillator;
pub mod power_counting;
pub mod quadrature;
pub mod reg_algebra;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
