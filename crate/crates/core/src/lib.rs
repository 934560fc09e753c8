//! Steady states and heat currents of small open quantum systems coupled to
//! several bosonic reservoirs, in Redfield or Lindblad (secular) form.
//!
//! The main path is [`kernel::build_kernel`] per reservoir, then
//! [`steady::assemble_liouvillian`] and [`steady::solve_steady_state`], then
//! [`thermo::reservoir_current`]. [`pipeline::solve`] runs all of it in one call,
//! and [`models`] holds closed forms for the single- and coupled-qubit models.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod error;
pub mod kernel;
pub mod models;
pub mod pipeline;
pub mod steady;
pub mod system;
pub mod thermo;

pub use bath::{BathSpec, Channel, SpectralDensity};
pub use error::{Error, Result};
pub use kernel::{KernelMode, SuperKernel};
pub use steady::{DensityMatrix, Liouvillian};
pub use system::{CoupledDiag, SystemSpec};
