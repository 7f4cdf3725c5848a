//! Exact computations with filtered A-infinity algebras over the universal
//! Novikov ring: relation checking, homotopy transfer along decorated trees,
//! Maurer-Cartan deformations, interval models, bimodules, and discrete
//! Morse models of simplicial complexes.

pub mod ainfty;
pub mod bimodule;
pub mod cli;
pub mod complex;
pub mod error;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod morse;
pub mod novikov;
pub mod report;
pub mod samples;
pub mod transfer;

pub use error::{Error, Result};
