//! Monte Carlo wave-function simulation of the generalized Lindblad master
//! equation via a piecewise deterministic jump process.
//!
//! A trajectory carries `n` unnormalized component wave functions whose
//! squared norms always sum to one. Between jumps the components drift under
//! a non-Hermitian effective generator; at a jump all components are replaced
//! simultaneously. Averaging `|psi_i><psi_i|` over trajectories recovers the
//! component density matrices of the master equation.
//!
//! The crate also contains the two-band environment model used to validate
//! the scheme: its relaxation rates, correlation kernel, closed-form
//! time-convolutionless baselines and an exact single-excitation Schrödinger
//! solver.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensemble;
pub mod error;
pub mod exact;
pub mod numerics;
pub mod pdp;
pub mod two_band;

pub use error::{Error, Result};
