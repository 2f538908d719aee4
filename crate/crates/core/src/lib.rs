//! Polariton-mediated long-range energy transfer between donor and acceptor
//! molecules sharing a single cavity mode.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] describes the emitters and the cavity and assembles the
//!   single-excitation Tavis-Cummings Hamiltonian.
//! * [`polariton`] reduces the Hamiltonian to its three bright polaritons
//!   (LP, MP, UP) and their Hopfield coefficients.
//! * [`bath`] holds the vibrational spectral densities.
//! * [`dynamics`] builds the full (non-secular) Bloch-Redfield generator,
//!   Lindblad losses and the coherent cavity drive, and solves for the
//!   driven steady state.
//! * [`rates`] is the secular rate theory: closed-form transition rates
//!   between polaritons and dark manifolds and a kinetic network solver.
//! * [`config`] and [`sweep`] form the batch front-end used by the `xfer`
//!   binary.

pub mod bath;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod polariton;
pub mod rates;
pub mod sweep;

pub use error::{Error, Result};
