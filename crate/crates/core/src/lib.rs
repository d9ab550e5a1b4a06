//! Exact spectra of the quantum discrete nonlinear Schrödinger (DNLS) and
//! quantum Ablowitz-Ladik (AL) dimers, together with numerical checks of the
//! su(n) / su_q(n) dynamical symmetries of the corresponding chains.
//!
//! * [`qnumbers`]: symmetric and basic q-numbers, q-binomials, `γ -> q`.
//! * [`fock`]: Fock sectors, boson / q-boson / AL-oscillator operators,
//!   Chevalley generators and Casimirs.
//! * [`dimer`]: the two dimer Hamiltonians as symmetric tridiagonal matrices.
//! * [`spectral`]: Sturm-sequence bisection, recurrence eigenvectors and
//!   orthogonality / completeness checks.
//! * [`invariants`]: chain Hamiltonians and conservation checks.

pub mod dimer;
pub mod error;
pub mod fock;
pub mod invariants;
pub mod linalg;
pub mod qnumbers;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
