//! Triangular flat connection form `psi*` on `g` and the character module `L`.

use crate::error::{Error, Result};
use crate::hull::enveloping::{build_enveloping_rep, monomial_label, EnvelopingTruncation};
use crate::hull::splitting::{build_splitting, SplitAlgebra};
use crate::lie::LieAlgebra;
use crate::linalg::{commutator, least_squares, lower_residual, max_abs_diff, max_abs_vec, rank, CMat, CVec, C64};
use crate::tolerance::Tolerances;

/// Largest denominator accepted when reading characters as rational
/// combinations of pivot characters.
const MAX_DENOMINATOR: i128 = 60;

#[derive(Debug, Clone)]
pub struct ConnectionForm {
    pub dim_rep: usize,
    /// `psi*(e_i)` for each basis vector of `g`.
    pub psi: Vec<CMat>,
    /// Covectors `omega_kk`, one per diagonal slot.
    pub diag_characters: Vec<CVec>,
    /// Z-basis of the module generated by the weights of `ad_s`.
    pub l_basis: Vec<CVec>,
    /// Integer coordinates of each diagonal character over `l_basis`.
    pub l_coords: Vec<Vec<i64>>,
    /// Worst rounding residual of `l_coords`.
    pub l_residual: f64,
    /// False when the weights are not rationally related; `l_basis` is then
    /// a generating set rather than a basis.
    pub l_is_basis: bool,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct ConnectionResiduals {
    pub flatness: f64,
    pub triangular: f64,
    /// `delta([e_i, e_j])` over L and all diagonal characters.
    pub closedness: f64,
    pub injective_rank: usize,
    pub l_rounding: f64,
}

impl ConnectionForm {
    pub fn dim(&self) -> usize {
        self.psi.len()
    }

    /// `psi*(X)` for a coordinate vector.
    pub fn apply(&self, x: &CVec) -> CMat {
        let r = self.dim_rep;
        let mut out = CMat::zeros(r, r);
        for (i, m) in self.psi.iter().enumerate() {
            if x[i] != C64::new(0.0, 0.0) {
                out += m * x[i];
            }
        }
        out
    }

    pub fn residuals(&self, g: &LieAlgebra) -> ConnectionResiduals {
        let n = self.dim();
        let mut flat = 0.0f64;
        let mut closed = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let br = g.bracket_basis(i, j);
                let lhs = self.apply(&br);
                flat = flat.max(max_abs_diff(&lhs, &commutator(&self.psi[i], &self.psi[j])));
                for d in self.l_basis.iter().chain(&self.diag_characters) {
                    closed = closed.max(d.dot(&br).norm());
                }
            }
        }
        let r2 = self.dim_rep * self.dim_rep;
        let flat_psi = CMat::from_fn(r2, n, |k, i| self.psi[i][(k % self.dim_rep, k / self.dim_rep)]);
        ConnectionResiduals {
            flatness: flat,
            triangular: self.psi.iter().map(lower_residual).fold(0.0, f64::max),
            closedness: closed,
            injective_rank: rank(&flat_psi, 1e-9),
            l_rounding: self.l_residual,
        }
    }

    /// Diagonal characters paired with their integer coordinates over `L`.
    pub fn diagonal_characters(&self, tol: &Tolerances) -> Result<Vec<(CVec, Vec<i64>)>> {
        if self.l_residual >= tol.int {
            return Err(Error::NotInLattice { residual: self.l_residual });
        }
        Ok(self.diag_characters.iter().cloned().zip(self.l_coords.iter().cloned()).collect())
    }
}

/// Everything built on the way to the connection form.
#[derive(Debug, Clone)]
pub struct Hull {
    pub split: SplitAlgebra,
    pub rep: EnvelopingTruncation,
    pub connection: ConnectionForm,
}

pub fn build_hull(g: &LieAlgebra, tol: &Tolerances, seed: u64) -> Result<Hull> {
    let split = build_splitting(g, tol, seed)?;
    let rep = build_enveloping_rep(&split, tol)?;
    let connection = connection_from(&split, &rep, tol)?;
    Ok(Hull { split, rep, connection })
}

pub fn build_connection_form(g: &LieAlgebra, tol: &Tolerances, seed: u64) -> Result<ConnectionForm> {
    Ok(build_hull(g, tol, seed)?.connection)
}

pub fn connection_from(split: &SplitAlgebra, rep: &EnvelopingTruncation, tol: &Tolerances) -> Result<ConnectionForm> {
    let n = split.n();
    let q = split.q();
    let psi: Vec<CMat> = (0..n)
        .map(|i| {
            let mut v = CVec::zeros(q + n);
            v[q + i] = C64::new(1.0, 0.0);
            rep.rep_gbar(split, &v)
        })
        .collect();
    let diag_characters: Vec<CVec> = rep
        .monomials
        .iter()
        .map(|m| m.iter().fold(CVec::zeros(n), |acc, &p| acc + &rep.characters[p]))
        .collect();

    let weights: Vec<CVec> = split
        .ad_s
        .weights
        .spaces
        .iter()
        .map(|ws| ws.character.clone())
        .collect();
    let module = character_module(&weights, tol);
    let mut l_coords = Vec::with_capacity(diag_characters.len());
    let mut l_residual = 0.0f64;
    if module.is_basis {
        let b = if module.basis.is_empty() { CMat::zeros(n, 0) } else { CMat::from_columns(&module.basis) };
        for ch in &diag_characters {
            let (coef, fit) = if b.ncols() == 0 { (CVec::zeros(0), max_abs_vec(ch)) } else { least_squares(&b, ch) };
            let mut ints = Vec::with_capacity(coef.len());
            for z in coef.iter() {
                let k = z.re.round();
                l_residual = l_residual.max((z - C64::new(k, 0.0)).norm());
                ints.push(k as i64);
            }
            l_residual = l_residual.max(fit);
            l_coords.push(ints);
        }
    } else {
        // coordinates over the generating set: multiplicities of each generator's weight
        for m in &rep.monomials {
            let mut ints = vec![0i64; module.basis.len()];
            for &p in m {
                if let Some(idx) = module.basis.iter().position(|b| max_abs_vec(&(b - &rep.characters[p])) < tol.alg) {
                    ints[idx] += 1;
                }
            }
            l_coords.push(ints);
        }
        for (ch, ints) in diag_characters.iter().zip(&l_coords) {
            let rebuilt = module
                .basis
                .iter()
                .zip(ints)
                .fold(CVec::zeros(n), |acc, (b, &k)| acc + b * C64::new(k as f64, 0.0));
            l_residual = l_residual.max(max_abs_vec(&(rebuilt - ch)));
        }
    }
    let names: Vec<String> = split.nbar.names().to_vec();
    let gen_names: Vec<String> = (0..rep.generators.ncols())
        .map(|p| {
            let col = rep.generators.column(p);
            let nz: Vec<usize> = (0..col.len()).filter(|&i| col[i].norm() > 1e-12).collect();
            if nz.len() == 1 && (col[nz[0]] - C64::new(1.0, 0.0)).norm() < 1e-12 {
                names[nz[0]].clone()
            } else {
                format!("b{p}")
            }
        })
        .collect();
    let form = ConnectionForm {
        dim_rep: rep.dim(),
        psi,
        diag_characters,
        l_basis: module.basis,
        l_coords,
        l_residual,
        l_is_basis: module.is_basis,
        labels: rep.monomials.iter().map(|m| monomial_label(m, &gen_names)).collect(),
    };
    let tri = form.psi.iter().map(lower_residual).fold(0.0, f64::max);
    if tri >= tol.alg {
        return Err(Error::NotTriangular { residual: tri });
    }
    Ok(form)
}

pub struct CharacterModule {
    pub basis: Vec<CVec>,
    pub is_basis: bool,
}

fn canonical_key(v: &CVec) -> (f64, f64) {
    v.iter().find(|z| z.norm() > 1e-12).map(|z| (z.re, z.im)).unwrap_or((0.0, 0.0))
}

fn canonical_cmp(a: &CVec, b: &CVec) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let (xz, yz) = (x.norm() <= 1e-12, y.norm() <= 1e-12);
        if xz && yz {
            continue;
        }
        if xz != yz {
            return if xz { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
        }
        break;
    }
    let (ka, kb) = (canonical_key(a), canonical_key(b));
    kb.0.partial_cmp(&ka.0)
        .unwrap()
        .then(kb.1.partial_cmp(&ka.1).unwrap())
}

/// Z-basis of the module generated by `weights` when they are rationally
/// related, otherwise the deduplicated nonzero weights.
pub fn character_module(weights: &[CVec], tol: &Tolerances) -> CharacterModule {
    let mut distinct: Vec<CVec> = Vec::new();
    for w in weights {
        if max_abs_vec(w) < tol.alg {
            continue;
        }
        if !distinct.iter().any(|d| max_abs_vec(&(d - w)) < tol.alg) {
            distinct.push(w.clone());
        }
    }
    distinct.sort_by(canonical_cmp);
    if distinct.is_empty() {
        return CharacterModule { basis: Vec::new(), is_basis: true };
    }

    let mut pivots: Vec<CVec> = Vec::new();
    for d in &distinct {
        let mut trial = pivots.clone();
        trial.push(d.clone());
        if rank(&CMat::from_columns(&trial), tol.alg) == trial.len() {
            pivots = trial;
        }
    }
    let p = CMat::from_columns(&pivots);
    let mut rational: Vec<Vec<(i128, i128)>> = Vec::with_capacity(distinct.len());
    for d in &distinct {
        let (coef, _) = least_squares(&p, d);
        let mut row = Vec::with_capacity(coef.len());
        for z in coef.iter() {
            if z.im.abs() > tol.int {
                return CharacterModule { basis: distinct, is_basis: false };
            }
            match to_rational(z.re, tol.int) {
                Some(r) => row.push(r),
                None => return CharacterModule { basis: distinct, is_basis: false },
            }
        }
        rational.push(row);
    }
    let denom = rational.iter().flatten().fold(1i128, |acc, &(_, d)| lcm(acc, d));
    let rows: Vec<Vec<i128>> = rational
        .iter()
        .map(|row| row.iter().map(|&(num, d)| num * (denom / d)).collect())
        .collect();
    let hnf = hermite_rows(rows, pivots.len());
    let basis = hnf
        .iter()
        .map(|row| {
            row.iter()
                .zip(&pivots)
                .fold(CVec::zeros(pivots[0].len()), |acc, (&k, v)| acc + v * C64::new(k as f64 / denom as f64, 0.0))
        })
        .collect();
    CharacterModule { basis, is_basis: true }
}

fn to_rational(x: f64, tol: f64) -> Option<(i128, i128)> {
    for d in 1..=MAX_DENOMINATOR {
        let num = (x * d as f64).round();
        if (x - num / d as f64).abs() < tol {
            let g = gcd(num as i128, d);
            return Some((num as i128 / g, d / g));
        }
    }
    None
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

/// Hermite normal form of the row lattice; returns the nonzero rows.
pub fn hermite_rows(mut rows: Vec<Vec<i128>>, cols: usize) -> Vec<Vec<i128>> {
    let mut top = 0;
    for c in 0..cols {
        if top >= rows.len() {
            break;
        }
        // Euclid on column c among rows top..
        loop {
            let pivot = (top..rows.len())
                .filter(|&r| rows[r][c] != 0)
                .min_by_key(|&r| rows[r][c].abs());
            let Some(pr) = pivot else { break };
            rows.swap(top, pr);
            let mut done = true;
            for r in (top + 1)..rows.len() {
                let f = rows[r][c] / rows[top][c];
                if f != 0 {
                    for k in 0..cols {
                        rows[r][k] -= f * rows[top][k];
                    }
                }
                if rows[r][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[top][c] == 0 {
            continue;
        }
        if rows[top][c] < 0 {
            for k in 0..cols {
                rows[top][k] = -rows[top][k];
            }
        }
        for r in 0..top {
            let f = rows[r][c].div_euclid(rows[top][c]);
            for k in 0..cols {
                rows[r][k] -= f * rows[top][k];
            }
        }
        top += 1;
    }
    rows.truncate(top);
    rows
}
