use nalgebra::Schur;

use crate::error::{Error, Result};
use crate::linalg::{
    is_nilpotent, lower_residual, matrix_power, max_abs, max_abs_diff, norm_inf, singular_values,
    smallest_right_singular, upper_residual, CMat, C64, ZERO,
};
use crate::tolerance::Tolerances;

/// Distinct clusters closer than this multiple of the clustering radius are
/// reported as ambiguous instead of being silently separated.
const AMBIGUITY_FACTOR: f64 = 10.0;

/// Eigenvalues of a square matrix. Triangular input is read off the diagonal
/// and nilpotent input returns zeros, which keeps defective spectra exact.
pub fn eigenvalues(a: &CMat, tol: &Tolerances) -> Vec<C64> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    if lower_residual(a) == 0.0 || upper_residual(a) == 0.0 {
        return a.diagonal().iter().copied().collect();
    }
    if is_nilpotent(a, tol.alg) {
        return vec![ZERO; n];
    }
    let schur = Schur::try_new(a.clone(), 1e-15, 10_000).unwrap_or_else(|| Schur::new(a.clone()));
    let (_, t) = schur.unpack();
    t.diagonal().iter().copied().collect()
}

/// One generalized eigenspace.
#[derive(Debug, Clone)]
pub struct SpectralCluster {
    /// Mean of the clustered eigenvalues.
    pub eigenvalue: C64,
    pub multiplicity: usize,
    /// Basis of the generalized eigenspace (columns).
    pub basis: CMat,
    /// Spectral projector onto this space along the others.
    pub projector: CMat,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub clusters: Vec<SpectralCluster>,
    /// Clustering radius actually used.
    pub radius: f64,
}

pub fn cluster_radius(a: &CMat, tol: &Tolerances) -> f64 {
    tol.cluster_rel * norm_inf(a).max(1.0)
}

/// Groups eigenvalues by single linkage at `radius`. Returns (mean, multiplicity)
/// per cluster, sorted by real then imaginary part.
pub fn cluster_eigenvalues(values: &[C64], radius: f64) -> Result<Vec<(C64, usize)>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() < radius {
                let (ri, rj) = (find(&mut label, i), find(&mut label, j));
                if ri != rj {
                    label[rj] = ri;
                }
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut label, i)).collect();
    let band = AMBIGUITY_FACTOR * radius;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (values[i] - values[j]).norm();
            if roots[i] != roots[j] && gap < band {
                return Err(Error::EigenClusterAmbiguity { gap, band });
            }
        }
    }
    let mut seen: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for i in 0..n {
        if seen.contains(&roots[i]) {
            continue;
        }
        seen.push(roots[i]);
        let members: Vec<C64> = (0..n).filter(|&j| roots[j] == roots[i]).map(|j| values[j]).collect();
        let mean = members.iter().sum::<C64>() / members.len() as f64;
        out.push((mean, members.len()));
    }
    out.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
    });
    Ok(out)
}

/// Generalized eigenspaces with their spectral projectors.
pub fn spectral_decomposition(a: &CMat, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let n = a.nrows();
    let radius = cluster_radius(a, tol);
    let clusters = cluster_eigenvalues(&eigenvalues(a, tol), radius)?;
    let scale = norm_inf(a).max(1.0);
    let mut bases = Vec::with_capacity(clusters.len());
    for &(mu, m) in &clusters {
        let shifted = (a - CMat::identity(n, n) * mu) / C64::new(scale, 0.0);
        let power = matrix_power(&shifted, m);
        bases.push(smallest_right_singular(&power, m));
    }
    let v = CMat::from_columns(
        &bases
            .iter()
            .flat_map(|b| b.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    let sigma = singular_values(&v).last().copied().unwrap_or(0.0);
    if sigma < 1e-8 {
        return Err(Error::DefectiveEigenbasis { sigma });
    }
    let v_inv = v.try_inverse().ok_or(Error::DefectiveEigenbasis { sigma })?;
    let mut offset = 0;
    let mut out = Vec::with_capacity(clusters.len());
    for ((mu, m), basis) in clusters.into_iter().zip(bases) {
        let rows = v_inv.rows(offset, m).into_owned();
        let projector = &basis * rows;
        offset += m;
        out.push(SpectralCluster { eigenvalue: mu, multiplicity: m, basis, projector });
    }
    Ok(SpectralDecomposition { clusters: out, radius })
}

/// Additive Jordan–Chevalley decomposition `A = S + N`.
#[derive(Debug, Clone)]
pub struct JordanDecomposition {
    pub semisimple: CMat,
    pub nilpotent: CMat,
}

/// Residuals of the defining identities, all max-entry magnitudes.
#[derive(Debug, Clone, Copy)]
pub struct JordanResiduals {
    pub sum: f64,
    pub commutator: f64,
    pub nilpotency: f64,
}

impl JordanResiduals {
    pub fn worst(&self) -> f64 {
        self.sum.max(self.commutator).max(self.nilpotency)
    }
}

impl JordanDecomposition {
    pub fn residuals(&self, a: &CMat) -> JordanResiduals {
        let n = a.nrows();
        let s = &self.semisimple;
        let nil = &self.nilpotent;
        JordanResiduals {
            sum: max_abs_diff(&(s + nil), a),
            commutator: max_abs(&(s * nil - nil * s)),
            nilpotency: max_abs(&matrix_power(nil, n)),
        }
    }
}

/// Splits `A` into commuting semisimple and nilpotent parts using spectral
/// projectors of the clustered generalized eigenspaces.
pub fn jordan_decompose(a: &CMat, tol: &Tolerances) -> Result<JordanDecomposition> {
    let n = a.nrows();
    let spectral = spectral_decomposition(a, tol)?;
    let mut s = CMat::zeros(n, n);
    for cl in &spectral.clusters {
        s += &cl.projector * cl.eigenvalue;
    }
    let nil = a - &s;
    Ok(JordanDecomposition { semisimple: s, nilpotent: nil })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn diagonal_matrix_is_its_own_semisimple_part() {
        let a = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 1.0), c(1.0, 0.0)]));
        let jd = jordan_decompose(&a, &tol()).unwrap();
        assert!(max_abs_diff(&jd.semisimple, &a) < 1e-12);
        assert!(max_abs(&jd.nilpotent) < 1e-12);
    }

    #[test]
    fn strictly_upper_matrix_is_nilpotent_part() {
        let a = CMat::from_row_slice(3, 3, &[ZERO, ONE, c(2.0, 0.0), ZERO, ZERO, c(0.0, 3.0), ZERO, ZERO, ZERO]);
        let jd = jordan_decompose(&a, &tol()).unwrap();
        assert!(max_abs(&jd.semisimple) < 1e-12);
        assert!(max_abs_diff(&jd.nilpotent, &a) < 1e-12);
    }

    #[test]
    fn jordan_block_with_imaginary_eigenvalue() {
        let ipi = c(0.0, std::f64::consts::PI);
        let a = CMat::from_row_slice(2, 2, &[ipi, ONE, ZERO, ipi]);
        let jd = jordan_decompose(&a, &tol()).unwrap();
        let s = CMat::identity(2, 2) * ipi;
        let n = CMat::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(max_abs_diff(&jd.semisimple, &s) < 1e-12);
        assert!(max_abs_diff(&jd.nilpotent, &n) < 1e-12);
        let r = jd.residuals(&a);
        assert!(r.worst() < 1e-12);
    }

    #[test]
    fn dense_diagonalizable_matrix() {
        // conjugate a diagonal matrix by a fixed well-conditioned basis change
        let p = CMat::from_row_slice(3, 3, &[
            ONE, c(0.5, 0.0), ZERO,
            c(0.2, 0.1), ONE, c(0.3, 0.0),
            ZERO, c(-0.4, 0.0), ONE,
        ]);
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0)]));
        let a = &p * d * p.clone().try_inverse().unwrap();
        let jd = jordan_decompose(&a, &tol()).unwrap();
        assert!(max_abs_diff(&jd.semisimple, &a) < 1e-10);
        assert!(max_abs(&jd.nilpotent) < 1e-10);
    }

    #[test]
    fn nearly_coincident_eigenvalues_are_flagged() {
        let a = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, c(1.0 + 5e-7, 0.0)]));
        assert!(matches!(jordan_decompose(&a, &tol()), Err(Error::EigenClusterAmbiguity { .. })));
    }

    #[test]
    fn random_upper_triangular_keeps_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let n = rng.gen_range(2..7);
            let mut a = CMat::zeros(n, n);
            for i in 0..n {
                // well separated diagonal with a repeated entry
                let v = if i == n - 1 { a[(0, 0)] } else { c(i as f64, rng.gen_range(-0.3..0.3)) };
                a[(i, i)] = v;
                for j in (i + 1)..n {
                    a[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            let jd = jordan_decompose(&a, &tol()).unwrap();
            assert!(jd.residuals(&a).worst() < 1e-9);
            let mut got = eigenvalues(&jd.semisimple, &tol());
            let mut want: Vec<C64> = a.diagonal().iter().copied().collect();
            let key = |z: &C64| (z.re * 1e6).round() as i64 * 1_000_000 + (z.im * 1e6).round() as i64;
            got.sort_by_key(key);
            want.sort_by_key(key);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() < 1e-9, "{g} vs {w}");
            }
        }
    }
}
