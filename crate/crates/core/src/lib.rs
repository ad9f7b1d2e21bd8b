//! Exact finite models of 2-term representations up to homotopy of finite
//! groupoids, weak representations on linear groupoid bundles, and
//! VB-groupoids, with every conversion between them executable and every
//! coherence law checkable by exact rational arithmetic.

pub mod error;
pub mod groupoid;
pub mod harness;
pub mod linalg;
pub mod report;
pub mod ruth;
pub mod semidirect;
pub mod cochain;
pub mod fixtures;
pub mod twoterm;
pub mod vb;
pub mod weak;
pub mod wrep;

pub use error::{Error, Result};
