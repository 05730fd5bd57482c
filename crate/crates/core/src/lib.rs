//! Maths-type q-deformed coherent states for `q > 1`.
//!
//! The crate is organised bottom-up:
//!
//! - [`qmath`]: q-numbers, log-domain q-factorials, the deformed exponential
//!   `E_q`, Jackson's q-exponential and the q-difference operator.
//! - [`quadrature`]: adaptive integration on `[0, ∞)` used to check the
//!   power-moment problem solved by the coherent-state weight.
//! - [`fock`]: dense truncated Fock-space matrices, the brute-force oracle
//!   for every series formula.
//! - [`coherent`]: the states `|z⟩_q`, their weight function and the
//!   quantum-optics observables.
//! - [`oscillator`]: the deformed Heisenberg algebra with minimal position
//!   and momentum uncertainties.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
pub mod error;
pub mod fock;
pub mod oscillator;
pub mod qmath;
pub mod quadrature;

pub use error::{Error, Result};
pub use qmath::{LogValue, QParam};
