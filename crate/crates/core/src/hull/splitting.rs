//! Semisimple splitting `gbar = Im ad_s ⋉ nbar`.

use crate::error::Result;
use crate::lie::{semisimple_adjoint, LieAlgebra, SemisimpleAdjoint, Subspace};
use crate::linalg::{commutator, least_squares, max_abs_vec, rank, CMat, CVec, C64, ZERO};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone)]
pub struct SplitAlgebra {
    pub base: LieAlgebra,
    pub ad_s: SemisimpleAdjoint,
    /// Basis `D_1..D_q` of `Im ad_s`, as operators on `g`.
    pub derivations: Vec<CMat>,
    /// Column `i` holds the coordinates of `ad_s(e_i)` in the `D` basis (`q x n`).
    pub ad_s_coords: CMat,
    /// `nbar` in the basis `f_i = e_i - ad_s(e_i)`.
    pub nbar: LieAlgebra,
    /// `gbar = Im ad_s ⋉ g` in the basis `(D_1..D_q, e_1..e_n)`.
    pub gbar: LieAlgebra,
}

/// Worst residuals of the splitting identities.
#[derive(Debug, Clone, Copy)]
pub struct SplittingResiduals {
    pub nbar_class: Option<usize>,
    pub ideal: f64,
    pub derived_in_nbar: f64,
    /// `[f_i, f_j]` computed in `gbar` versus the `nbar` structure constants.
    pub closure: f64,
    pub gbar_jacobi: f64,
    pub direct_sum_rank: usize,
    pub embedding_rank: usize,
    pub im_ads_abelian: f64,
}

impl SplitAlgebra {
    pub fn q(&self) -> usize {
        self.derivations.len()
    }

    pub fn n(&self) -> usize {
        self.base.dim()
    }

    /// `f_i` as columns in `gbar` coordinates.
    pub fn nbar_in_gbar(&self) -> CMat {
        let (q, n) = (self.q(), self.n());
        CMat::from_fn(q + n, n, |r, i| {
            if r < q {
                -self.ad_s_coords[(r, i)]
            } else if r - q == i {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Embedding `i(X) = ad_s X + (X - ad_s X)` in `Im ad_s (+) nbar`
    /// coordinates: column `i` is `(ad_s coords of e_i, e_i)`.
    pub fn embedding(&self) -> CMat {
        let (q, n) = (self.q(), self.n());
        CMat::from_fn(q + n, n, |r, i| {
            if r < q {
                self.ad_s_coords[(r, i)]
            } else if r - q == i {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn residuals(&self, tol: &Tolerances) -> SplittingResiduals {
        let (q, n) = (self.q(), self.n());
        let f = self.nbar_in_gbar();
        let nbar_sub = Subspace::span(&f, tol.alg);
        let derived = self.gbar.derived_algebra(tol.alg);
        let mut closure = 0.0f64;
        for i in 0..n {
            let fi = f.column(i).into_owned();
            for j in (i + 1)..n {
                let fj = f.column(j).into_owned();
                let direct = self.gbar.bracket(&fi, &fj);
                let via_table = &f * self.nbar.bracket_basis(i, j);
                closure = closure.max(max_abs_vec(&(direct - via_table)));
            }
        }
        let mut im_abelian = 0.0f64;
        for a in 0..q {
            for b in (a + 1)..q {
                im_abelian = im_abelian.max(crate::linalg::max_abs(&commutator(
                    &self.derivations[a],
                    &self.derivations[b],
                )));
            }
        }
        let mut dsum = f.clone().insert_columns(0, q, ZERO);
        for a in 0..q {
            dsum[(a, a)] = C64::new(1.0, 0.0);
        }
        SplittingResiduals {
            nbar_class: self.nbar.nilpotency_class(tol.alg).ok(),
            ideal: self.gbar.ideal_residual(&nbar_sub),
            derived_in_nbar: nbar_sub.containment_residual(&derived),
            closure,
            gbar_jacobi: self.gbar.jacobi_residual().1,
            direct_sum_rank: rank(&dsum, tol.alg),
            embedding_rank: rank(&self.embedding(), tol.alg),
            im_ads_abelian: im_abelian,
        }
    }
}

/// Builds `nbar` and `gbar` from the semisimple adjoint map.
pub fn build_splitting(g: &LieAlgebra, tol: &Tolerances, seed: u64) -> Result<SplitAlgebra> {
    g.validate(tol.alg)?;
    let ad_s = semisimple_adjoint(g, tol, seed)?;
    Ok(splitting_from(g, ad_s))
}

pub fn splitting_from(g: &LieAlgebra, ad_s: SemisimpleAdjoint) -> SplitAlgebra {
    let n = g.dim();
    let derivations: Vec<CMat> = ad_s.complement.iter().map(|&i| ad_s.per_basis[i].clone()).collect();
    let q = derivations.len();

    // coordinates of ad_s(e_i) over the D basis, solved on the flattened operators
    let flat = ad_s.as_matrix();
    let d_cols = CMat::from_fn(n * n, q, |r, a| flat[(r, ad_s.complement[a])]);
    let mut coords = CMat::zeros(q, n);
    for i in 0..n {
        let (x, _) = least_squares(&d_cols, &flat.column(i).into_owned());
        coords.set_column(i, &x);
    }

    // nbar: [f_i, f_j] = [e_i, e_j] - S_i e_j + S_j e_i, which lies in the nilradical
    let mut nbar_table = vec![ZERO; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let v = g.bracket_basis(i, j) - ad_s.per_basis[i].column(j) + ad_s.per_basis[j].column(i);
            for k in 0..n {
                nbar_table[(i * n + j) * n + k] = v[k];
            }
        }
    }
    let nbar_names = g.names().iter().map(|s| format!("{s}'")).collect();
    let nbar = LieAlgebra::from_table(nbar_names, nbar_table);

    // gbar in (D, e) coordinates
    let m = q + n;
    let mut table = vec![ZERO; m * m * m];
    let mut put = |i: usize, j: usize, v: &CVec| {
        for k in 0..m {
            table[(i * m + j) * m + k] = v[k];
            table[(j * m + i) * m + k] = -v[k];
        }
    };
    for a in 0..q {
        for b in (a + 1)..q {
            let comm = commutator(&derivations[a], &derivations[b]);
            let flat_comm = CVec::from_iterator(n * n, comm.iter().copied());
            let (x, _) = least_squares(&d_cols, &flat_comm);
            let mut v = CVec::zeros(m);
            v.rows_mut(0, q).copy_from(&x);
            put(a, b, &v);
        }
        for j in 0..n {
            let mut v = CVec::zeros(m);
            v.rows_mut(q, n).copy_from(&derivations[a].column(j));
            put(a, q + j, &v);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = CVec::zeros(m);
            v.rows_mut(q, n).copy_from(&g.bracket_basis(i, j));
            put(q + i, q + j, &v);
        }
    }
    let mut gbar_names: Vec<String> = ad_s.complement.iter().map(|&i| format!("ad_s({})", g.names()[i])).collect();
    gbar_names.extend(g.names().iter().cloned());
    let gbar = LieAlgebra::from_table(gbar_names, table);

    SplitAlgebra { base: g.clone(), ad_s, derivations, ad_s_coords: coords, nbar, gbar }
}

/// Smallest `c` with the `(c+1)`-th lower central term zero.
pub fn nilpotency_class(n: &LieAlgebra, tol: &Tolerances) -> Result<usize> {
    n.nilpotency_class(tol.alg)
}
