//! Exact rational arithmetic, polynomial algebra and high-precision root finding.

pub mod linalg;
pub mod mpoly;
pub mod numeric;
pub mod rational;
pub mod roots;
pub mod upoly;

pub use linalg::QMatrix;
pub use mpoly::{vars, MPoly, RationalFunction, Vars};
pub use numeric::{BigComplex, BigFloat};
pub use rational::{int, rat, Rational};
pub use roots::complex_roots;
pub use upoly::{SquarefreeFactorization, UPoly};
