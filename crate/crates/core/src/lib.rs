//! Exact constructions linking genus-2 curves, their Kummer quartics and the
//! elliptic K3 surfaces with `II*` and `III*` fibers.

pub mod algebra;
pub mod elliptic;
pub mod error;
pub mod invariants;
pub mod kummer;
pub mod lattices;
pub mod report;
pub mod shioda_inose;

pub use error::{Error, Result};
