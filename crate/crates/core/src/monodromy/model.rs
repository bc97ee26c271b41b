//! `G = R^k ⋉_phi C^m` with `phi(t) = exp(sum t_a M_a)`.

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{commutator, expm, max_abs, max_abs_vec, phi1_apply, CMat, CVec, C64, ZERO};
use crate::paths::PathWord;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct SemidirectModel {
    pub k: usize,
    pub m: usize,
    pub dphi: Vec<CMat>,
    /// Basis names of the Lie algebra: `k` translation names then `m` vector names.
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub t: Vec<f64>,
    pub v: CVec,
}

impl GroupElement {
    pub fn identity(k: usize, m: usize) -> Self {
        GroupElement { t: vec![0.0; k], v: CVec::zeros(m) }
    }

    /// Max-entry distance to another element.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        let dt = self.t.iter().zip(&other.t).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        dt.max(max_abs_vec(&(&self.v - &other.v)))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.t.iter().all(|x| x.abs() <= tol) && max_abs_vec(&self.v) <= tol
    }
}

impl SemidirectModel {
    pub fn new(dphi: Vec<CMat>, names: Option<Vec<String>>) -> Result<Self> {
        let k = dphi.len();
        let m = dphi.first().map(|d| d.nrows()).unwrap_or(0);
        if dphi.iter().any(|d| d.nrows() != m || d.ncols() != m) {
            return Err(Error::InvalidModel("dphi matrices must all be m x m".into()));
        }
        let names = names.unwrap_or_else(|| default_names(k, m));
        if names.len() != k + m {
            return Err(Error::InvalidModel(format!("expected {} basis names, got {}", k + m, names.len())));
        }
        Ok(SemidirectModel { k, m, dphi, names })
    }

    pub fn dim(&self) -> usize {
        self.k + self.m
    }

    /// Checks that the `M_a` commute and the induced algebra is solvable.
    pub fn validate(&self, tol: &Tolerances) -> Result<LieAlgebra> {
        for a in 0..self.k {
            for b in (a + 1)..self.k {
                let r = max_abs(&commutator(&self.dphi[a], &self.dphi[b]));
                if r >= tol.alg {
                    return Err(Error::InvalidModel(format!("dphi {a} and {b} do not commute (residual {r:.3e})")));
                }
            }
        }
        let g = self.lie_algebra();
        g.validate(tol.alg)?;
        Ok(g)
    }

    /// `[t_a, z_j] = sum_i M_a[i, j] z_i`, everything else zero.
    pub fn lie_algebra(&self) -> LieAlgebra {
        let (k, m) = (self.k, self.m);
        let mut entries = Vec::new();
        for a in 0..k {
            for j in 0..m {
                for i in 0..m {
                    let v = self.dphi[a][(i, j)];
                    if v != ZERO {
                        entries.push((a, k + j, k + i, v));
                    }
                }
            }
        }
        LieAlgebra::from_entries(self.names.clone(), &entries).expect("indices are in range")
    }

    fn generator(&self, t: &[f64]) -> CMat {
        let mut out = CMat::zeros(self.m, self.m);
        for (a, &ta) in t.iter().enumerate() {
            out += &self.dphi[a] * C64::new(ta, 0.0);
        }
        out
    }

    pub fn phi(&self, t: &[f64]) -> CMat {
        expm(&self.generator(t))
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let t = x.t.iter().zip(&y.t).map(|(a, b)| a + b).collect();
        let v = &x.v + self.phi(&x.t) * &y.v;
        GroupElement { t, v }
    }

    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        let t: Vec<f64> = x.t.iter().map(|a| -a).collect();
        let v = -(self.phi(&t) * &x.v);
        GroupElement { t, v }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.k, self.m)
    }

    /// Splits an algebra vector into its real translation part and vector part.
    pub fn split_direction(&self, x: &CVec) -> Result<(Vec<f64>, CVec)> {
        if x.len() != self.dim() {
            return Err(Error::InvalidPath(format!("direction has {} coordinates, expected {}", x.len(), self.dim())));
        }
        let mut s = Vec::with_capacity(self.k);
        for a in 0..self.k {
            if x[a].im.abs() > 1e-12 {
                return Err(Error::InvalidPath(format!("translation coordinate {a} must be real")));
            }
            s.push(x[a].re);
        }
        Ok((s, x.rows(self.k, self.m).into_owned()))
    }

    /// Endpoint of `u -> exp(u X)` at `u = dt`.
    pub fn exp_endpoint(&self, x: &CVec, dt: f64) -> Result<GroupElement> {
        let (s, z) = self.split_direction(x)?;
        let t: Vec<f64> = s.iter().map(|a| a * dt).collect();
        let ms = self.generator(&t);
        let v = phi1_apply(&ms, &(z * C64::new(dt, 0.0)));
        Ok(GroupElement { t, v })
    }

    /// Ordered product of the segment endpoints.
    pub fn endpoint(&self, path: &PathWord) -> Result<GroupElement> {
        let mut g = self.identity();
        for seg in &path.segments {
            g = self.mul(&g, &self.exp_endpoint(&seg.direction, seg.duration)?);
        }
        Ok(g)
    }

    /// Algebra direction `(t, v)` with zero imaginary translation part.
    pub fn direction(&self, t: &[f64], v: &CVec) -> CVec {
        CVec::from_fn(self.dim(), |i, _| if i < self.k { C64::new(t[i], 0.0) } else { v[i - self.k] })
    }
}

fn default_names(k: usize, m: usize) -> Vec<String> {
    let mut out: Vec<String> = if k == 1 { vec!["t".into()] } else { (1..=k).map(|a| format!("t{a}")).collect() };
    out.extend((1..=m).map(|j| format!("z{j}")));
    out
}
