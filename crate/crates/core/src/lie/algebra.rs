use crate::error::{Error, Result};
use crate::linalg::{column_space, max_abs_vec, residual_outside, CMat, CVec, C64, ZERO};

/// Linear subspace of coordinate space, stored as an orthonormal column basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { basis: CMat::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { basis: CMat::identity(ambient, ambient) }
    }

    /// Span of the columns of `vectors`; rank is decided with `tol`.
    pub fn span(vectors: &CMat, tol: f64) -> Self {
        Subspace { basis: column_space(vectors, tol) }
    }

    pub fn from_vectors(ambient: usize, vectors: &[CVec], tol: f64) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::span(&CMat::from_columns(vectors), tol)
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthonormal basis vectors as columns.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<CVec> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Max-entry distance of `v` from the subspace.
    pub fn residual(&self, v: &CVec) -> f64 {
        residual_outside(&self.basis, v)
    }

    pub fn contains(&self, v: &CVec, tol: f64) -> bool {
        self.residual(v) < tol
    }

    /// Largest residual of `other`'s basis vectors outside `self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        other
            .basis
            .column_iter()
            .map(|c| self.residual(&c.into_owned()))
            .fold(0.0, f64::max)
    }

    pub fn sum(&self, other: &Subspace, tol: f64) -> Subspace {
        let mut cols = self.basis_vectors();
        cols.extend(other.basis_vectors());
        Subspace::from_vectors(self.ambient_dim(), &cols, tol)
    }
}

/// Position in the derived/lower-central hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solvability {
    Abelian,
    Nilpotent { class: usize },
    Solvable { derived_length: usize },
}

/// Finite-dimensional complex Lie algebra given by structure constants
/// `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    names: Vec<String>,
    table: Vec<C64>,
}

impl LieAlgebra {
    /// Builds an algebra from a dense table without validation.
    pub fn from_table(names: Vec<String>, table: Vec<C64>) -> Self {
        let n = names.len();
        assert_eq!(table.len(), n * n * n, "structure table must be dim^3");
        LieAlgebra { names, table }
    }

    /// Builds a table from sparse `(i, j, k, value)` entries. Missing mirror
    /// entries `(j, i, k)` are filled by antisymmetry; explicit mirrors are kept
    /// as given so that validation can reject inconsistent input.
    pub fn from_entries(names: Vec<String>, entries: &[(usize, usize, usize, C64)]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let mut table = vec![ZERO; n * n * n];
        let mut given = vec![false; n * n * n];
        for &(i, j, k, _) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::IndexOutOfRange { i, j, k, dim: n });
            }
        }
        for &(i, j, k, v) in entries {
            let idx = (i * n + j) * n + k;
            table[idx] = v;
            given[idx] = true;
        }
        for &(i, j, k, v) in entries {
            let mirror = (j * n + i) * n + k;
            if !given[mirror] {
                table[mirror] = -v;
            }
        }
        Ok(LieAlgebra { names, table })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[C64] {
        &self.table
    }

    #[inline]
    pub fn constant(&self, i: usize, j: usize, k: usize) -> C64 {
        let n = self.dim();
        self.table[(i * n + j) * n + k]
    }

    pub fn basis_vector(&self, i: usize) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[i] = C64::new(1.0, 0.0);
        v
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> CVec {
        let n = self.dim();
        CVec::from_fn(n, |k, _| self.constant(i, j, k))
    }

    pub fn bracket(&self, x: &CVec, y: &CVec) -> CVec {
        let n = self.dim();
        let mut out = CVec::zeros(n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == ZERO {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.constant(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of `Y -> [X, Y]` in basis coordinates (column `j` is `[X, e_j]`).
    pub fn adjoint(&self, x: &CVec) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += x[i] * self.constant(i, j, k);
                }
            }
        }
        m
    }

    pub fn adjoint_basis(&self, i: usize) -> CMat {
        self.adjoint(&self.basis_vector(i))
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|z| *z == ZERO)
    }

    /// Worst antisymmetry defect over the table.
    pub fn antisymmetry_residual(&self) -> ((usize, usize, usize), f64) {
        let n = self.dim();
        let mut worst = ((0, 0, 0), 0.0);
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let r = (self.constant(i, j, k) + self.constant(j, i, k)).norm();
                    if r > worst.1 {
                        worst = ((i, j, k), r);
                    }
                }
            }
        }
        worst
    }

    /// Cyclic Jacobi sum `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`.
    pub fn jacobi_sum(&self, i: usize, j: usize, k: usize) -> CVec {
        let ei = self.basis_vector(i);
        let ej = self.basis_vector(j);
        let ek = self.basis_vector(k);
        self.bracket(&ei, &self.bracket_basis(j, k))
            + self.bracket(&ej, &self.bracket_basis(k, i))
            + self.bracket(&ek, &self.bracket_basis(i, j))
    }

    /// Worst Jacobi residual over all basis triples `i < j < k`.
    pub fn jacobi_residual(&self) -> ((usize, usize, usize), f64) {
        let n = self.dim();
        let mut worst = ((0, 0, 0), 0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let r = max_abs_vec(&self.jacobi_sum(i, j, k));
                    if r > worst.1 {
                        worst = ((i, j, k), r);
                    }
                }
            }
        }
        worst
    }

    /// Span of `[a, b]` for `a` in `x`, `b` in `y`.
    pub fn bracket_span(&self, x: &Subspace, y: &Subspace, tol: f64) -> Subspace {
        let mut cols = Vec::new();
        for a in x.basis().column_iter() {
            let a = a.into_owned();
            for b in y.basis().column_iter() {
                cols.push(self.bracket(&a, &b.into_owned()));
            }
        }
        Subspace::from_vectors(self.dim(), &cols, tol)
    }

    pub fn derived_algebra(&self, tol: f64) -> Subspace {
        let full = Subspace::full(self.dim());
        self.bracket_span(&full, &full, tol)
    }

    /// `g, [g,g], [[g,g],[g,g]], ...` until it stabilizes.
    pub fn derived_series(&self, tol: f64) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim())];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(last, last, tol);
            let stalled = next.dim() == last.dim();
            let done = next.dim() == 0;
            series.push(next);
            if stalled || done {
                return series;
            }
        }
    }

    /// `C^1 = g, C^{k+1} = [g, C^k]` until it stabilizes.
    pub fn lower_central_series(&self, tol: f64) -> Vec<Subspace> {
        let full = Subspace::full(self.dim());
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(&full, last, tol);
            let stalled = next.dim() == last.dim();
            let done = next.dim() == 0;
            series.push(next);
            if stalled || done {
                return series;
            }
        }
    }

    /// Nilpotency class: the smallest `c` with `C^{c+1} = 0`.
    pub fn nilpotency_class(&self, tol: f64) -> Result<usize> {
        let series = self.lower_central_series(tol);
        let last = series.last().unwrap();
        if last.dim() != 0 {
            return Err(Error::NotNilpotent { stalled_dim: last.dim() });
        }
        Ok(series.len() - 1)
    }

    pub fn solvability(&self, tol: f64) -> Result<Solvability> {
        let derived = self.derived_series(tol);
        let last = derived.last().unwrap();
        if last.dim() != 0 {
            return Err(Error::NotSolvable { stalled_dim: last.dim() });
        }
        if derived.len() <= 2 {
            return Ok(Solvability::Abelian);
        }
        match self.nilpotency_class(tol) {
            Ok(class) => Ok(Solvability::Nilpotent { class }),
            Err(_) => Ok(Solvability::Solvable { derived_length: derived.len() - 1 }),
        }
    }

    /// Largest residual of `[e_i, v]` outside `sub` over basis `e_i` and `v` in `sub`.
    pub fn ideal_residual(&self, sub: &Subspace) -> f64 {
        let mut worst = 0.0f64;
        for v in sub.basis().column_iter() {
            let ad = self.adjoint(&v.into_owned());
            for j in 0..self.dim() {
                let col = -ad.column(j).into_owned();
                worst = worst.max(sub.residual(&col));
            }
        }
        worst
    }

    /// Checks antisymmetry, Jacobi and solvability.
    pub fn validate(&self, tol: f64) -> Result<Solvability> {
        let ((i, j, k), r) = self.antisymmetry_residual();
        if r > 0.0 {
            return Err(Error::AntisymmetryViolation { i, j, k, residual: r });
        }
        let (triple, r) = self.jacobi_residual();
        if r >= tol {
            return Err(Error::JacobiViolation { triple, residual: r });
        }
        self.solvability(tol)
    }
}

/// Validated construction from sparse constants; the input gate for everything
/// downstream.
pub fn validate_algebra(
    names: Vec<String>,
    entries: &[(usize, usize, usize, C64)],
    tol: f64,
) -> Result<(LieAlgebra, Solvability)> {
    let g = LieAlgebra::from_entries(names, entries)?;
    let class = g.validate(tol)?;
    Ok((g, class))
}

pub fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs, max_abs_diff, ONE};

    fn sol() -> LieAlgebra {
        LieAlgebra::from_entries(names(&["t", "x", "y"]), &[(0, 1, 1, ONE), (0, 2, 2, -ONE)]).unwrap()
    }

    #[test]
    fn abelian_is_valid() {
        let g = LieAlgebra::from_entries(names(&["a", "b", "c"]), &[]).unwrap();
        assert_eq!(g.validate(1e-9).unwrap(), Solvability::Abelian);
        assert!(max_abs(&g.adjoint(&CVec::from_element(3, c(0.3, 1.0)))) == 0.0);
    }

    #[test]
    fn sol_is_solvable_not_nilpotent() {
        // brute-force Jacobi over every ordered triple
        let g = sol();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(max_abs_vec(&g.jacobi_sum(i, j, k)) < 1e-15);
                }
            }
        }
        assert_eq!(g.validate(1e-9).unwrap(), Solvability::Solvable { derived_length: 2 });
    }

    #[test]
    fn jacobi_violation_reports_triple_and_residual() {
        let e = LieAlgebra::from_entries(
            names(&["t", "x", "y"]),
            &[(0, 1, 1, ONE), (1, 2, 1, ONE), (0, 2, 2, ONE)],
        )
        .unwrap();
        // hand evaluation: [T,[X,Y]] + [X,[Y,T]] + [Y,[T,X]] = X - X - X = -X
        let sum = e.jacobi_sum(0, 1, 2);
        assert!((sum[1] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(sum[0].norm() < 1e-15 && sum[2].norm() < 1e-15);
        match e.validate(1e-9) {
            Err(Error::JacobiViolation { triple, residual }) => {
                assert_eq!(triple, (0, 1, 2));
                assert!((residual - 1.0).abs() < 1e-15);
            }
            other => panic!("expected Jacobi violation, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_mirror_is_antisymmetry_violation() {
        let g = LieAlgebra::from_entries(names(&["a", "b"]), &[(0, 1, 1, ONE), (1, 0, 1, ONE)]).unwrap();
        assert!(matches!(g.validate(1e-9), Err(Error::AntisymmetryViolation { .. })));
        let d = LieAlgebra::from_entries(names(&["a", "b"]), &[(0, 0, 1, ONE)]).unwrap();
        assert!(matches!(d.validate(1e-9), Err(Error::AntisymmetryViolation { .. })));
    }

    #[test]
    fn out_of_range_index_rejected() {
        let r = LieAlgebra::from_entries(names(&["a", "b"]), &[(0, 2, 1, ONE)]);
        assert!(matches!(r, Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn sl2_is_not_solvable() {
        // [h,e]=2e, [h,f]=-2f, [e,f]=h
        let g = LieAlgebra::from_entries(
            names(&["h", "e", "f"]),
            &[(0, 1, 1, c(2.0, 0.0)), (0, 2, 2, c(-2.0, 0.0)), (1, 2, 0, ONE)],
        )
        .unwrap();
        assert!(matches!(g.validate(1e-9), Err(Error::NotSolvable { stalled_dim: 3 })));
    }

    #[test]
    fn adjoint_of_sol_t_is_diagonal() {
        let g = sol();
        let expected = CMat::from_diagonal(&CVec::from_vec(vec![c(0.0, 0.0), ONE, -ONE]));
        assert!(max_abs_diff(&g.adjoint_basis(0), &expected) == 0.0);
    }

    #[test]
    fn adjoint_of_sect4_t_is_jordan_block() {
        let ipi = c(0.0, std::f64::consts::PI);
        let g = LieAlgebra::from_entries(
            names(&["t", "z1", "z2"]),
            &[(0, 1, 1, ipi), (0, 2, 1, ONE), (0, 2, 2, ipi)],
        )
        .unwrap();
        let ad = g.adjoint_basis(0);
        let expected = CMat::from_row_slice(3, 3, &[ZERO, ZERO, ZERO, ZERO, ipi, ONE, ZERO, ZERO, ipi]);
        assert_eq!(ad, expected);
    }

    #[test]
    fn nilpotency_classes() {
        let heis = LieAlgebra::from_entries(names(&["x", "y", "z"]), &[(0, 1, 2, ONE)]).unwrap();
        assert_eq!(heis.nilpotency_class(1e-9).unwrap(), 2);
        let fil = LieAlgebra::from_entries(names(&["e1", "e2", "e3", "e4"]), &[(0, 1, 2, ONE), (0, 2, 3, ONE)]).unwrap();
        // C^2 = span{e3, e4}, C^3 = span{e4}, C^4 = 0
        assert_eq!(fil.nilpotency_class(1e-9).unwrap(), 3);
        let ab = LieAlgebra::from_entries(names(&["a"]), &[]).unwrap();
        assert_eq!(ab.nilpotency_class(1e-9).unwrap(), 1);
        assert!(matches!(sol().nilpotency_class(1e-9), Err(Error::NotNilpotent { stalled_dim: 2 })));
    }

    #[test]
    fn adjoint_is_linear() {
        let g = sol();
        let x = CVec::from_vec(vec![c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 1.0)]);
        let y = CVec::from_vec(vec![c(-0.3, 0.1), c(2.0, -1.0), c(0.0, 0.7)]);
        let a = c(0.7, -0.2);
        let lhs = g.adjoint(&(&x * a + &y));
        let rhs = g.adjoint(&x) * a + g.adjoint(&y);
        assert!(max_abs_diff(&lhs, &rhs) < 1e-14);
    }
}
