//! Density of states and excited-state quantum phase transitions of the
//! Dicke and Tavis-Cummings atom-field models.
//!
//! The crate is organised along the computation pipeline:
//!
//! * [`model`] holds the shared parameters, energy scaling and critical
//!   couplings.
//! * [`landscape`] is the classical limit: Hamiltonian, flow, fixed points,
//!   energy surface and the ground-energy curve.
//! * [`dos`] evaluates the semiclassical density of states for both models,
//!   together with a Monte-Carlo phase-space estimate used as an oracle.
//! * [`tc`] diagonalizes the Tavis-Cummings model block by block in the
//!   conserved excitation number.
//! * [`dicke`] diagonalizes the Dicke model in the extended bosonic coherent
//!   basis with per-state convergence certificates.
//! * [`fock`] is a brute-force Fock-basis diagonalization of either model,
//!   kept deliberately simple so it can check the two routes above.
//! * [`analysis`] turns spectra into window-averaged level densities and
//!   compares them against the semiclassical curve.
//!
//! Work that parallelizes (grids, Monte-Carlo batches, TC blocks, parity
//! sectors) goes through [`Exec`]; with the `parallel` feature disabled every
//! path runs sequentially and gives identical results.

pub mod analysis;
pub mod dicke;
pub mod dos;
mod error;
mod exec;
pub mod fock;
pub mod landscape;
pub mod model;
pub mod quadrature;
pub mod spectrum;
pub mod tc;
pub mod tridiag;

pub use error::{Error, Result};
pub use exec::Exec;
pub use model::{critical_coupling, Model, ModelParams, ScaledEnergy};
pub use spectrum::{Level, Parity, SpectrumRecord};
