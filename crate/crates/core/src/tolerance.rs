/// Numerical thresholds used by every check. All are absolute unless noted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Per-entry threshold for algebraic identities (Jacobi, flatness, ...).
    pub alg: f64,
    /// Transport-level comparisons.
    pub num: f64,
    /// Identities that hold exactly up to rounding.
    pub exact: f64,
    /// Eigenvalue clustering radius, relative to `max(1, |A|)`.
    pub cluster_rel: f64,
    /// Rounding residual allowed when reading integer coordinates.
    pub int: f64,
    /// Cap on the truncated enveloping representation dimension.
    pub max_rep_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            alg: 1e-9,
            num: 1e-8,
            exact: 1e-10,
            cluster_rel: 1e-7,
            int: 1e-6,
            max_rep_dim: 512,
        }
    }
}
