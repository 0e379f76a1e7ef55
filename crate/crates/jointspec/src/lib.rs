//! Joint spectra of commuting matrix tuples, Cayley-Hamilton annihilating
//! families, Berger-Coburn-Lebow isometry models and the algebraic varieties
//! their spectra trace out in the polydisk.
//!
//! Start from [`tuple_spectrum::CommutingTuple`] and
//! [`tuple_spectrum::joint_eigenvalues`], or see the runnable programs under
//! `examples/`.

pub mod bcl_model;
pub mod cayley_hamilton;
pub mod cli;
pub mod error;
pub mod grid;
pub mod ideal_support;
pub mod io;
pub mod plot;
pub mod matrix_core;
pub mod mpoly;
pub mod rational_symbols;
pub mod tuple_spectrum;

pub use error::{Error, Result};
