//! Faithful triangular representation of `gbar` by left multiplication on a
//! truncated universal enveloping algebra of `nbar`.
//!
//! Generators are chosen as a common eigenbasis of `Im ad_s` adapted to the
//! lower central series of `nbar`, so each generator has a character (its
//! `ad_s` eigenvalue) and a weight (deepest lower-central term containing it).
//! Left multiplication by a generator strictly raises the weighted degree of a
//! PBW monomial, which makes every matrix upper triangular once monomials are
//! listed by decreasing weighted degree. Derivations act diagonally.
//!
//! Truncation keeps monomials of plain degree at most the class `c` when
//! `c <= 2` (brackets are central, so the discarded part is a left ideal) and
//! of weighted degree at most `c` otherwise.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::hull::splitting::SplitAlgebra;
use crate::lie::LieAlgebra;
use crate::linalg::{
    column_space, commutator, lower_residual, max_abs, max_abs_diff, max_abs_vec, rank, CMat, CVec, C64, ONE, ZERO,
};
use crate::tolerance::Tolerances;

/// Sorted multiset of generator indices.
pub type Monomial = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    /// Plain PBW degree.
    Degree,
    /// Sum of lower-central weights.
    Weighted,
}

#[derive(Debug, Clone)]
pub struct EnvelopingTruncation {
    /// Generator vectors (columns) in `nbar` coordinates.
    pub generators: CMat,
    generators_inv: CMat,
    /// Lower-central weight of each generator.
    pub weights: Vec<usize>,
    /// `ad_s` eigenvalue of each generator, as a covector on `g`.
    pub characters: Vec<CVec>,
    pub class: usize,
    pub grading: Grading,
    /// Monomials in representation-basis order (unit last).
    pub monomials: Vec<Monomial>,
    /// Left multiplication by each generator.
    pub generator_reps: Vec<CMat>,
    /// `nbar` structure constants in the generator basis.
    pub generator_algebra: LieAlgebra,
}

#[derive(Debug, Clone, Copy)]
pub struct EnvelopingResiduals {
    pub homomorphism: f64,
    pub derivation: f64,
    pub faithful_on_unit: f64,
    pub lower_triangular: f64,
    pub gbar_rank: usize,
}

impl EnvelopingTruncation {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn unit_index(&self) -> usize {
        self.monomials.len() - 1
    }

    /// Generator-basis coordinates of an `nbar` vector.
    pub fn generator_coords(&self, x: &CVec) -> CVec {
        &self.generators_inv * x
    }

    /// Representation of an `nbar` element given in `nbar` coordinates.
    pub fn rep_nbar(&self, x: &CVec) -> CMat {
        let y = self.generator_coords(x);
        let r = self.dim();
        let mut out = CMat::zeros(r, r);
        for (p, m) in self.generator_reps.iter().enumerate() {
            if y[p] != ZERO {
                out += m * y[p];
            }
        }
        out
    }

    /// Diagonal action of a derivation with eigenvalue `values[p]` on generator `p`.
    pub fn rep_diagonal(&self, values: &[C64]) -> CMat {
        let diag = CVec::from_iterator(
            self.dim(),
            self.monomials.iter().map(|m| m.iter().map(|&p| values[p]).sum::<C64>()),
        );
        CMat::from_diagonal(&diag)
    }

    /// Eigenvalues of `ad_s(X)` on the generators.
    pub fn generator_eigenvalues(&self, x: &CVec) -> Vec<C64> {
        self.characters.iter().map(|ch| ch.dot(x)).collect()
    }

    /// Representation of `gbar` elements given as `(D coords, e coords)`.
    pub fn rep_gbar(&self, split: &SplitAlgebra, v: &CVec) -> CMat {
        let (q, n) = (split.q(), split.n());
        // gbar element sum_a d_a D_a + sum_i x_i e_i = (sum d_a D_a + ad_s x) + (x - ad_s x)
        let x = v.rows(q, n).into_owned();
        let mut values = self.generator_eigenvalues(&x);
        for a in 0..q {
            let da = v[a];
            if da == ZERO {
                continue;
            }
            let e = self.derivation_eigenvalues(&split.derivations[a]);
            for (val, ea) in values.iter_mut().zip(e) {
                *val += da * ea;
            }
        }
        self.rep_nbar(&x) + self.rep_diagonal(&values)
    }

    /// Eigenvalues of a derivation (in `nbar` coordinates) on the generators.
    pub fn derivation_eigenvalues(&self, d: &CMat) -> Vec<C64> {
        let image = &self.generators_inv * d * &self.generators;
        (0..self.generators.ncols()).map(|p| image[(p, p)]).collect()
    }

    pub fn residuals(&self, split: &SplitAlgebra, tol: &Tolerances) -> EnvelopingResiduals {
        let k = self.generators.ncols();
        let mut hom = 0.0f64;
        for p in 0..k {
            for q in (p + 1)..k {
                let br = self.generator_algebra.bracket_basis(p, q);
                let mut lhs = CMat::zeros(self.dim(), self.dim());
                for (s, m) in self.generator_reps.iter().enumerate() {
                    lhs += m * br[s];
                }
                let rhs = commutator(&self.generator_reps[p], &self.generator_reps[q]);
                hom = hom.max(max_abs_diff(&lhs, &rhs));
            }
        }
        let mut der = 0.0f64;
        for d in &split.derivations {
            let rep_d = self.rep_diagonal(&self.derivation_eigenvalues(d));
            for p in 0..k {
                let image = d * self.generators.column(p);
                let lhs = self.rep_nbar(&image);
                let rhs = commutator(&rep_d, &self.generator_reps[p]);
                der = der.max(max_abs_diff(&lhs, &rhs));
            }
        }
        let unit = self.unit_index();
        let index: HashMap<&Monomial, usize> = self.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut faithful = 0.0f64;
        for p in 0..k {
            let mut expected = CVec::zeros(self.dim());
            expected[index[&vec![p]]] = ONE;
            let got = self.generator_reps[p].column(unit).into_owned();
            faithful = faithful.max(max_abs_vec(&(got - expected)));
        }
        let mut lower = 0.0f64;
        for m in &self.generator_reps {
            lower = lower.max(lower_residual(m));
        }
        let dim_gbar = split.q() + split.n();
        let r2 = self.dim() * self.dim();
        let mut image = CMat::zeros(r2, dim_gbar);
        for b in 0..dim_gbar {
            let mut v = CVec::zeros(dim_gbar);
            v[b] = ONE;
            let m = self.rep_gbar(split, &v);
            image.set_column(b, &CVec::from_iterator(r2, m.iter().copied()));
        }
        EnvelopingResiduals {
            homomorphism: hom,
            derivation: der,
            faithful_on_unit: faithful,
            lower_triangular: lower,
            gbar_rank: rank(&image, tol.alg),
        }
    }
}

/// Chooses generators: the `nbar` coordinate basis when it is already an
/// eigenbasis adapted to the lower central series, otherwise one built from
/// the weight-space projectors.
fn choose_generators(split: &SplitAlgebra, tol: &Tolerances) -> (CMat, Vec<usize>, Vec<CVec>) {
    let n = split.n();
    let lcs = split.nbar.lower_central_series(tol.alg);
    let spaces = &split.ad_s.weights.spaces;
    let weight_of = |v: &CVec| -> usize {
        let mut w = 1;
        for (k, term) in lcs.iter().enumerate() {
            if term.dim() > 0 && term.contains(v, tol.alg) {
                w = k + 1;
            }
        }
        w
    };

    let mut identity_ok = true;
    let mut id_chars = Vec::with_capacity(n);
    for i in 0..n {
        let e = split.base.basis_vector(i);
        match spaces.iter().find(|ws| max_abs_vec(&(&ws.projector * &e - &e)) < tol.alg) {
            Some(ws) => id_chars.push(ws.character.clone()),
            None => {
                identity_ok = false;
                break;
            }
        }
    }
    if identity_ok {
        let weights: Vec<usize> = (0..n).map(|i| weight_of(&split.base.basis_vector(i))).collect();
        let homogeneous = lcs.iter().enumerate().all(|(k, term)| {
            weights.iter().filter(|&&w| w > k).count() == term.dim()
        });
        if homogeneous {
            return (CMat::identity(n, n), weights, id_chars);
        }
    }

    let mut cols: Vec<CVec> = Vec::new();
    let mut weights = Vec::new();
    let mut chars = Vec::new();
    for ws in spaces {
        let mut chosen = CMat::zeros(n, 0);
        for k in (0..lcs.len()).rev() {
            let term = &lcs[k];
            if term.dim() == 0 {
                continue;
            }
            let projected = column_space(&(&ws.projector * term.basis()), tol.alg);
            let residual = if chosen.ncols() == 0 {
                projected.clone()
            } else {
                let q = column_space(&chosen, tol.alg);
                &projected - &q * (q.adjoint() * &projected)
            };
            let fresh = column_space(&residual, tol.alg);
            for v in fresh.column_iter() {
                cols.push(v.into_owned());
                weights.push(k + 1);
                chars.push(ws.character.clone());
            }
            chosen = CMat::from_columns(&cols.iter().rev().take(chosen.ncols() + fresh.ncols()).cloned().collect::<Vec<_>>());
        }
    }
    (CMat::from_columns(&cols), weights, chars)
}

struct Straightener<'a> {
    algebra: &'a LieAlgebra,
    weights: &'a [usize],
    grading: Grading,
    level: usize,
    memo: HashMap<(usize, Monomial), Vec<(Monomial, C64)>>,
}

impl Straightener<'_> {
    fn grade(&self, m: &[usize]) -> usize {
        match self.grading {
            Grading::Degree => m.len(),
            Grading::Weighted => m.iter().map(|&p| self.weights[p]).sum(),
        }
    }

    /// `f_p * m` in PBW normal form, with monomials beyond the truncation dropped.
    fn left_mul(&mut self, p: usize, m: &[usize]) -> Vec<(Monomial, C64)> {
        let key = (p, m.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut acc: BTreeMap<Monomial, C64> = BTreeMap::new();
        if m.is_empty() || p <= m[0] {
            let mut out = Vec::with_capacity(m.len() + 1);
            out.push(p);
            out.extend_from_slice(m);
            if self.grade(&out) <= self.level {
                acc.insert(out, ONE);
            }
        } else {
            let head = m[0];
            let rest = &m[1..];
            // f_p f_head rest = f_head (f_p rest) + [f_p, f_head] rest
            for (mono, coef) in self.left_mul(p, rest) {
                for (mono2, coef2) in self.left_mul(head, &mono) {
                    *acc.entry(mono2).or_insert(ZERO) += coef * coef2;
                }
            }
            let br = self.algebra.bracket_basis(p, head);
            for (s, &b) in br.iter().enumerate() {
                if b.norm() < 1e-15 {
                    continue;
                }
                for (mono, coef) in self.left_mul(s, rest) {
                    *acc.entry(mono).or_insert(ZERO) += b * coef;
                }
            }
        }
        let out: Vec<(Monomial, C64)> = acc.into_iter().filter(|(_, v)| *v != ZERO).collect();
        self.memo.insert(key, out.clone());
        out
    }
}

fn enumerate_monomials(k: usize, grade_of: &dyn Fn(&[usize]) -> usize, level: usize, cap: usize) -> Result<Vec<Monomial>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Monomial> = vec![Vec::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for p in start..k {
                let mut cand = m.clone();
                cand.push(p);
                if grade_of(&cand) <= level {
                    next.push(cand);
                }
            }
        }
        out.extend(next.iter().cloned());
        if out.len() > cap {
            return Err(Error::TruncationOverflow { required: out.len(), cap });
        }
        frontier = next;
    }
    Ok(out)
}

pub fn build_enveloping_rep(split: &SplitAlgebra, tol: &Tolerances) -> Result<EnvelopingTruncation> {
    let class = split.nbar.nilpotency_class(tol.alg)?;
    let (generators, weights, characters) = choose_generators(split, tol);
    let k = generators.ncols();
    let generators_inv = generators.clone().try_inverse().expect("generator basis is invertible");

    let mut table = vec![ZERO; k * k * k];
    for p in 0..k {
        for q in 0..k {
            let v = split.nbar.bracket(&generators.column(p).into_owned(), &generators.column(q).into_owned());
            let y = &generators_inv * v;
            for s in 0..k {
                table[(p * k + q) * k + s] = y[s];
            }
        }
    }
    let names = (0..k).map(|p| format!("b{p}")).collect();
    let generator_algebra = LieAlgebra::from_table(names, table);

    let grading = if class <= 2 { Grading::Degree } else { Grading::Weighted };
    let grade_of = |m: &[usize]| -> usize {
        match grading {
            Grading::Degree => m.len(),
            Grading::Weighted => m.iter().map(|&p| weights[p]).sum(),
        }
    };
    let mut monomials = enumerate_monomials(k, &grade_of, class, tol.max_rep_dim)?;
    let wdeg = |m: &Monomial| -> usize { m.iter().map(|&p| weights[p]).sum() };
    monomials.sort_by(|a, b| wdeg(b).cmp(&wdeg(a)).then(b.len().cmp(&a.len())).then(a.cmp(b)));

    let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut st = Straightener {
        algebra: &generator_algebra,
        weights: &weights,
        grading,
        level: class,
        memo: HashMap::new(),
    };
    let r = monomials.len();
    let mut generator_reps = Vec::with_capacity(k);
    for p in 0..k {
        let mut m = CMat::zeros(r, r);
        for (col, mono) in monomials.iter().enumerate() {
            for (out, coef) in st.left_mul(p, mono) {
                let row = index[&out];
                m[(row, col)] += coef;
            }
        }
        generator_reps.push(m);
    }
    let rep = EnvelopingTruncation {
        generators,
        generators_inv,
        weights,
        characters,
        class,
        grading,
        monomials,
        generator_reps,
        generator_algebra,
    };
    let lower = rep.generator_reps.iter().map(lower_residual).fold(0.0, f64::max);
    if lower >= tol.alg {
        return Err(Error::NotTriangular { residual: lower });
    }
    Ok(rep)
}

/// Readable label of a monomial, e.g. `z1'^2 t'`.
pub fn monomial_label(m: &Monomial, names: &[String]) -> String {
    if m.is_empty() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let mut j = i;
        while j < m.len() && m[j] == m[i] {
            j += 1;
        }
        let name = &names[m[i]];
        parts.push(if j - i > 1 { format!("{name}^{}", j - i) } else { name.clone() });
        i = j;
    }
    parts.join(" ")
}

pub fn max_entry(m: &CMat) -> f64 {
    max_abs(m)
}
