//! Layer-potential machinery for open dielectric channels.
//!
//! Two semi-infinite channels with elevated wavenumber k2 > k1 meet along
//! the line x1 = 0. The crate builds the outgoing fundamental solution of
//! Delta + k1^2 + q(x2) for each channel, assembles second-kind integral
//! equations for the transmission jumps on the interface, solves them, and
//! evaluates scattered fields and guided-mode scattering coefficients.
//!
//! Start from [`channel::ChannelSpec`] and [`channel::find_modes`], build a
//! [`greens::GreensBundle`], assemble with [`kernels::assemble`], solve with
//! [`solver::solve_direct`], and evaluate with [`field::evaluate_field`].
//! The `examples/` directory has one runnable program per capability.

pub mod channel;
pub mod error;
pub mod scaled;
pub mod special;

pub mod greens;
pub mod kernels;
pub mod quad;
pub mod solver;

pub mod field;
pub mod spectral;

pub mod cli;
pub mod config;
pub mod csvio;

pub use error::{Error, Result};
