//! Nilradical and the semisimple adjoint map, both read off the weight-space
//! decomposition of a Cartan subalgebra.
//!
//! For a regular element `R` the Fitting null component `h = g_0(ad R)` is a
//! Cartan subalgebra, `g = h (+) sum_{l != 0} g_l` with every non-zero weight
//! space inside `[g, g]`, and each `ad H` (`H` in `h`) acts on `g_l` with the
//! single eigenvalue `l(H)`. Writing `P_0` for the projector onto `h` and `P_l`
//! for the projectors onto the weight spaces, the characters of `g` are
//! `a_l(X) = l(P_0 X)` and
//!
//! ```text
//! ad_s(X) = sum_l a_l(X) P_l,      nilradical = { X : a_l(X) = 0 for all l }.
//! ```
//!
//! The regular element is drawn from the span of basis vectors complementary
//! to the nilradical, so that basis vectors lying in a Cartan subalgebra keep
//! `ad_s(e_i) = (ad e_i)_s`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lie::algebra::{LieAlgebra, Subspace};
use crate::lie::jordan::spectral_decomposition;
use crate::linalg::{
    commutator, is_nilpotent, max_abs, max_abs_diff, null_space, rank, CMat, CVec, C64, ZERO,
};
use crate::tolerance::Tolerances;

const MAX_ATTEMPTS: usize = 8;

/// Generalized eigenspace of `ad R` together with the character of `g` it carries.
#[derive(Debug, Clone)]
pub struct WeightSpace {
    pub basis: CMat,
    pub projector: CMat,
    /// Character values on the basis of `g` (a covector).
    pub character: CVec,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

#[derive(Debug, Clone)]
pub struct WeightDecomposition {
    pub regular: CVec,
    pub spaces: Vec<WeightSpace>,
    /// Index of the zero weight (the Cartan subalgebra).
    pub zero: usize,
}

impl WeightDecomposition {
    pub fn cartan(&self) -> &WeightSpace {
        &self.spaces[self.zero]
    }

    /// `k x dim` matrix whose rows are the characters.
    pub fn character_matrix(&self) -> CMat {
        let n = self.regular.len();
        CMat::from_fn(self.spaces.len(), n, |r, i| self.spaces[r].character[i])
    }
}

/// Weight decomposition relative to `ad R`. `R` should be regular.
pub fn weight_decomposition(g: &LieAlgebra, regular: &CVec, tol: &Tolerances) -> Result<WeightDecomposition> {
    let n = g.dim();
    let ad_r = g.adjoint(regular);
    let spectral = spectral_decomposition(&ad_r, tol)?;
    let zero = spectral
        .clusters
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.eigenvalue.norm().partial_cmp(&b.1.eigenvalue.norm()).unwrap())
        .map(|(i, _)| i)
        .expect("at least one cluster");
    let p0 = spectral.clusters[zero].projector.clone();
    let ads: Vec<CMat> = (0..n).map(|i| g.adjoint(&p0.column(i).into_owned())).collect();
    let spaces = spectral
        .clusters
        .into_iter()
        .enumerate()
        .map(|(idx, cl)| {
            let m = cl.multiplicity as f64;
            let character = if idx == zero {
                CVec::zeros(n)
            } else {
                CVec::from_fn(n, |i, _| (&cl.projector * &ads[i]).trace() / m)
            };
            WeightSpace { basis: cl.basis, projector: cl.projector, character }
        })
        .collect();
    Ok(WeightDecomposition { regular: regular.clone(), spaces, zero })
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> C64 {
    let r: f64 = rng.gen_range(0.5..1.5);
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, theta)
}

fn random_combination(n: usize, support: &[usize], rng: &mut ChaCha8Rng) -> CVec {
    let mut v = CVec::zeros(n);
    for &i in support {
        v[i] = random_coefficient(rng);
    }
    v
}

/// Nilradical as the common kernel of the characters.
fn nilradical_from(weights: &WeightDecomposition, tol: &Tolerances) -> Subspace {
    let chars = weights.character_matrix();
    let kernel = null_space(&chars, tol.alg * chars.ncols().max(1) as f64);
    Subspace::span(&kernel, tol.alg)
}

/// Basis indices whose vectors complete `sub` to the whole space (greedy).
fn complement_indices(sub: &Subspace, tol: f64) -> Vec<usize> {
    let n = sub.ambient_dim();
    let mut cols: Vec<CVec> = sub.basis_vectors();
    let mut chosen = Vec::new();
    for i in 0..n {
        let mut e = CVec::zeros(n);
        e[i] = C64::new(1.0, 0.0);
        let mut trial = cols.clone();
        trial.push(e.clone());
        if rank(&CMat::from_columns(&trial), tol) == trial.len() {
            cols.push(e);
            chosen.push(i);
        }
        if cols.len() == n {
            break;
        }
    }
    chosen
}

/// Semisimple parts of the adjoint action, extended linearly from a Cartan
/// subalgebra; vanishes on the nilradical.
#[derive(Debug, Clone)]
pub struct SemisimpleAdjoint {
    /// `ad_s(e_i)` for each basis vector.
    pub per_basis: Vec<CMat>,
    pub nilradical: Subspace,
    /// Basis indices spanning a complement of the nilradical.
    pub complement: Vec<usize>,
    pub weights: WeightDecomposition,
}

impl SemisimpleAdjoint {
    pub fn dim(&self) -> usize {
        self.per_basis.len()
    }

    pub fn apply(&self, x: &CVec) -> CMat {
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for (i, m) in self.per_basis.iter().enumerate() {
            if x[i] != ZERO {
                out += m * x[i];
            }
        }
        out
    }

    /// The map `X -> ad_s(X)` as an `n^2 x n` matrix.
    pub fn as_matrix(&self) -> CMat {
        let n = self.dim();
        CMat::from_fn(n * n, n, |r, i| self.per_basis[i][(r % n, r / n)])
    }

    pub fn kernel(&self, tol: &Tolerances) -> Subspace {
        let m = self.as_matrix();
        Subspace::span(&null_space(&m, tol.alg), tol.alg)
    }

    pub fn image_dim(&self, tol: &Tolerances) -> usize {
        rank(&self.as_matrix(), tol.alg)
    }

    /// Worst Leibniz defect `D[x,y] - [Dx,y] - [x,Dy]` over all `ad_s(e_i)`
    /// and basis pairs.
    pub fn derivation_residual(&self, g: &LieAlgebra) -> f64 {
        self.per_basis.iter().map(|d| derivation_residual(g, d)).fold(0.0, f64::max)
    }

    /// Worst `ad_s[e_i, e_j] - [ad_s e_i, ad_s e_j]`.
    pub fn homomorphism_residual(&self, g: &LieAlgebra) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = self.apply(&g.bracket_basis(i, j));
                let rhs = commutator(&self.per_basis[i], &self.per_basis[j]);
                worst = worst.max(max_abs_diff(&lhs, &rhs));
            }
        }
        worst
    }

    /// `ad_X - ad_s(X)` must be nilpotent and commute with `ad_s(X)`; worst
    /// commutator and nilpotency defects over basis vectors.
    pub fn jordan_residual(&self, g: &LieAlgebra, tol: &Tolerances) -> (f64, bool) {
        let mut worst = 0.0f64;
        let mut all_nilpotent = true;
        for (i, s) in self.per_basis.iter().enumerate() {
            let ad = g.adjoint_basis(i);
            let nil = &ad - s;
            if !self.complement.contains(&i) {
                // the decomposition is the Jordan one only on the Cartan part
                all_nilpotent &= is_nilpotent(&nil, tol.alg);
                continue;
            }
            worst = worst.max(max_abs(&commutator(s, &nil)));
            all_nilpotent &= is_nilpotent(&nil, tol.alg);
        }
        (worst, all_nilpotent)
    }
}

/// Leibniz residual of a linear operator on `g`.
pub fn derivation_residual(g: &LieAlgebra, d: &CMat) -> f64 {
    let n = g.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        let dei = d.column(i).into_owned();
        for j in (i + 1)..n {
            let dej = d.column(j).into_owned();
            let lhs = d * g.bracket_basis(i, j);
            let rhs = g.bracket(&dei, &g.basis_vector(j)) + g.bracket(&g.basis_vector(i), &dej);
            worst = worst.max(crate::linalg::max_abs_vec(&(lhs - rhs)));
        }
    }
    worst
}

/// Characters of a solvable algebra as an intrinsic weight decomposition,
/// using a generic element of the whole algebra.
fn generic_weights(g: &LieAlgebra, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<WeightDecomposition> {
    let n = g.dim();
    let all: Vec<usize> = (0..n).collect();
    let mut last_err = None;
    for _ in 0..MAX_ATTEMPTS {
        let r = random_combination(n, &all, rng);
        match weight_decomposition(g, &r, tol) {
            Ok(w) => return Ok(w),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

/// Nilradical `{X : ad_X nilpotent}` of a solvable algebra.
pub fn nilradical(g: &LieAlgebra, tol: &Tolerances, seed: u64) -> Result<Subspace> {
    g.solvability(tol.alg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = generic_weights(g, tol, &mut rng)?;
    Ok(nilradical_from(&weights, tol))
}

/// The semisimple adjoint map `X -> ad_s(X)`.
pub fn semisimple_adjoint(g: &LieAlgebra, tol: &Tolerances, seed: u64) -> Result<SemisimpleAdjoint> {
    g.solvability(tol.alg)?;
    let n = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generic = generic_weights(g, tol, &mut rng)?;
    let nil = nilradical_from(&generic, tol);
    let complement = complement_indices(&nil, tol.alg);
    let cartan_dim = generic.cartan().dim();

    let mut last_err: Option<Error> = None;
    for _ in 0..MAX_ATTEMPTS {
        let r = random_combination(n, &complement, &mut rng);
        let weights = match weight_decomposition(g, &r, tol) {
            Ok(w) => w,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        // a non-regular draw merges weight spaces and enlarges the null component
        if weights.cartan().dim() != cartan_dim || weights.spaces.len() != generic.spaces.len() {
            last_err = Some(Error::EigenClusterAmbiguity { gap: 0.0, band: 0.0 });
            continue;
        }
        let per_basis = (0..n)
            .map(|i| {
                let mut m = CMat::zeros(n, n);
                for ws in &weights.spaces {
                    let a = ws.character[i];
                    if a != ZERO {
                        m += &ws.projector * a;
                    }
                }
                m
            })
            .collect();
        return Ok(SemisimpleAdjoint { per_basis, nilradical: nil, complement, weights });
    }
    Err(last_err.unwrap())
}
