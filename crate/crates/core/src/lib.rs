//! Bivariate Charlier polynomials and the discrete superintegrable
//! two-dimensional harmonic oscillator built on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`univariate`]: one-variable Charlier and Hermite polynomials together
//!   with the 1D ladder and difference operators.
//! - [`bivariate`]: the two-variable Charlier family `C_{n1,n2}(x1,x2)`,
//!   evaluated by a ladder recursion and, independently, by the explicit
//!   terminating quadruple sum.
//! - [`lattice_ops`]: composable difference operators on functions over
//!   `N x N` (shifts, ladder operators, `Y_i`, the Hamiltonian, su(2)
//!   generators, gauge conjugation, the anisotropic Hamiltonian).
//! - [`spectra`]: wavefunctions, orthonormality, degeneracy and the su(2)
//!   multiplet structure, plus truncated-matrix diagnostics.
//! - [`continuum`]: the large-parameter scaling limit to the Hermite
//!   oscillator.

pub mod bivariate;
pub mod continuum;
mod error;
pub mod lattice_ops;
pub mod report;
pub mod spectra;
pub mod univariate;

pub use bivariate::{LatticePoint, ModeIndex, ModelParams};
pub use error::{Error, Result};
pub use lattice_ops::{LatticeFunction, LatticeOperator};
pub use report::Residual;
pub use spectra::{EnergyLabel, TruncationSpec};

pub use num_complex::Complex64;
