//! Validated Lie-algebra arithmetic: brackets, adjoint operators, Jordan
//! decomposition, nilradical and the semisimple adjoint map.

pub mod algebra;
pub mod jordan;
pub mod semisimple;

pub use algebra::{validate_algebra, LieAlgebra, Solvability, Subspace};
pub use jordan::{jordan_decompose, JordanDecomposition};
pub use semisimple::{nilradical, semisimple_adjoint, SemisimpleAdjoint};
