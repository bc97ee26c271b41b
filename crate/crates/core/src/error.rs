use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("structure constant index out of range: ({i}, {j}, {k}) for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("antisymmetry violated at ({i}, {j}, {k}): residual {residual:e}")]
    AntisymmetryViolation { i: usize, j: usize, k: usize, residual: f64 },

    #[error("Jacobi identity violated on triple ({}, {}, {}): residual {residual:e}", .triple.0, .triple.1, .triple.2)]
    JacobiViolation { triple: (usize, usize, usize), residual: f64 },

    #[error("Lie algebra is not solvable (derived series stalls at dimension {stalled_dim})")]
    NotSolvable { stalled_dim: usize },

    #[error("Lie algebra is not nilpotent (lower central series stalls at dimension {stalled_dim})")]
    NotNilpotent { stalled_dim: usize },

    #[error("eigenvalue clusters separated by {gap:e}, below the ambiguity band {band:e}")]
    EigenClusterAmbiguity { gap: f64, band: f64 },

    #[error("generalized eigenvectors are numerically dependent (smallest singular value {sigma:e})")]
    DefectiveEigenbasis { sigma: f64 },

    #[error("truncated enveloping representation needs dimension {required}, cap is {cap}")]
    TruncationOverflow { required: usize, cap: usize },

    #[error("representation is not upper triangular: lower residual {residual:e}")]
    NotTriangular { residual: f64 },

    #[error("diagonal character is not an integer combination of the character basis: residual {residual:e}")]
    NotInLattice { residual: f64 },

    #[error("loop word endpoint misses its target by {residual:e}")]
    EndpointMismatch { residual: f64 },

    #[error("invalid semidirect model: {0}")]
    InvalidModel(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("unknown lattice generator `{0}`")]
    UnknownGenerator(String),
}

pub type Result<T> = std::result::Result<T, Error>;
