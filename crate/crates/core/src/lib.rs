//! Algebraic hulls of simply connected solvable Lie groups, their triangular
//! flat connections, and exponential iterated integrals along loops in the
//! associated solvmanifolds.

pub mod error;
pub mod hull;
pub mod lie;
pub mod linalg;
pub mod monodromy;
pub mod paths;
pub mod samples;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
