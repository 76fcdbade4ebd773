//! Exact computations with twists, quasitriangular and triangular
//! structures, weak R-matrices and twisted morphisms of finite-dimensional
//! bialgebras over ℚ and cyclotomic fields.

pub mod ansatz;
pub mod bialgebra;
pub mod document;
pub mod element;
pub mod error;
pub mod linalg;
pub mod map;
pub mod poly;
pub mod random;
mod rat;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod search;
pub mod solve;
pub mod twist;
pub mod twtr;
pub mod zoo;

pub use bialgebra::Bialgebra;
pub use element::TensorElement;
pub use error::{Error, Result};
pub use map::LinearMap;
pub use report::{Check, ValidationReport};
pub use scalar::{FieldSpec, Scalar};
