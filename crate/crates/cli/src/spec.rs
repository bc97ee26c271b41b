//! JSON spec files and their conversion to library inputs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use solvhull::lie::LieAlgebra;
use solvhull::linalg::{c, CMat, CVec, C64};
use solvhull::monodromy::{builtins, Example, GroupElement, Lattice, SemidirectModel};
use solvhull::paths::{PathWord, Segment};
use solvhull::{Error, Result, Tolerances};

/// `[re, im]`.
pub type Complex = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub paths: BTreeMap<String, Vec<SegmentSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub basis: Vec<String>,
    /// Entries `[i, j, k, re, im]` meaning `[e_i, e_j]` has `(re + i im) e_k`.
    pub structure: Vec<(usize, usize, usize, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub k: usize,
    pub m: usize,
    /// `k` matrices, each `m` rows of `m` complex entries.
    pub dphi: Vec<Vec<Vec<Complex>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub generators: BTreeMap<String, ElementSpec>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub t: Vec<f64>,
    pub v: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub direction: Vec<Complex>,
    pub dt: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub int: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rep_dim: Option<usize>,
}

fn cx(z: &Complex) -> C64 {
    c(z[0], z[1])
}

fn pair(z: &C64) -> Complex {
    [z.re, z.im]
}

fn cvec(v: &[Complex]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(cx))
}

/// Library inputs assembled from a spec.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub algebra: LieAlgebra,
    pub model: Option<SemidirectModel>,
    pub lattice: Option<Lattice>,
    pub paths: Vec<(String, PathWord)>,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl SpecFile {
    pub fn parse(text: &str) -> std::result::Result<SpecFile, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Canonical compact serialization (also the digest input).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(o) = &self.tolerances {
            t.alg = o.alg.unwrap_or(t.alg);
            t.num = o.num.unwrap_or(t.num);
            t.exact = o.exact.unwrap_or(t.exact);
            t.cluster_rel = o.cluster_rel.unwrap_or(t.cluster_rel);
            t.int = o.int.unwrap_or(t.int);
            t.max_rep_dim = o.max_rep_dim.unwrap_or(t.max_rep_dim);
        }
        t
    }

    /// Builds the algebra without validating it.
    pub fn algebra(&self) -> Result<LieAlgebra> {
        let a = &self.algebra;
        if a.dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if a.basis.len() != a.dim {
            return Err(Error::DimensionMismatch { expected: a.dim, found: a.basis.len() });
        }
        let entries: Vec<_> = a.structure.iter().map(|&(i, j, k, re, im)| (i, j, k, c(re, im))).collect();
        LieAlgebra::from_entries(a.basis.clone(), &entries)
    }

    pub fn model(&self) -> Result<Option<SemidirectModel>> {
        let Some(m) = &self.model else { return Ok(None) };
        if m.dphi.len() != m.k {
            return Err(Error::InvalidModel(format!("expected {} dphi matrices, got {}", m.k, m.dphi.len())));
        }
        let mut mats = Vec::with_capacity(m.k);
        for (a, rows) in m.dphi.iter().enumerate() {
            if rows.len() != m.m || rows.iter().any(|r| r.len() != m.m) {
                return Err(Error::InvalidModel(format!("dphi {a} is not {0} x {0}", m.m)));
            }
            mats.push(CMat::from_fn(m.m, m.m, |i, j| cx(&rows[i][j])));
        }
        if m.k + m.m != self.algebra.dim {
            return Err(Error::InvalidModel(format!(
                "model dimension {} does not match algebra dimension {}",
                m.k + m.m,
                self.algebra.dim
            )));
        }
        SemidirectModel::new(mats, Some(self.algebra.basis.clone())).map(Some)
    }

    pub fn lattice(&self, model: Option<&SemidirectModel>) -> Result<Option<Lattice>> {
        let Some(l) = &self.lattice else { return Ok(None) };
        let model = model.ok_or_else(|| Error::InvalidModel("a lattice needs a model".into()))?;
        let mut generators = Vec::with_capacity(l.generators.len());
        for (name, e) in &l.generators {
            if e.t.len() != model.k || e.v.len() != model.m {
                return Err(Error::InvalidModel(format!("generator `{name}` has the wrong shape")));
            }
            generators.push((name.clone(), GroupElement { t: e.t.clone(), v: cvec(&e.v) }));
        }
        let lattice = Lattice { generators, relations: l.relations.clone() };
        for r in &lattice.relations {
            lattice.parse_word(r)?;
        }
        Ok(Some(lattice))
    }

    pub fn paths(&self) -> Result<Vec<(String, PathWord)>> {
        let mut out = Vec::with_capacity(self.paths.len());
        for (name, segs) in &self.paths {
            let path = PathWord::new(segs.iter().map(|s| Segment::new(cvec(&s.direction), s.dt)).collect());
            path.validate(self.algebra.dim).map_err(|e| Error::InvalidPath(format!("`{name}`: {e}")))?;
            out.push((name.clone(), path));
        }
        Ok(out)
    }

    pub fn inputs(&self) -> Result<Inputs> {
        let algebra = self.algebra()?;
        let model = self.model()?;
        let lattice = self.lattice(model.as_ref())?;
        Ok(Inputs {
            algebra,
            lattice,
            model,
            paths: self.paths()?,
            tolerances: self.tolerances(),
            seed: self.seed.unwrap_or(0),
        })
    }

    pub fn from_example(ex: &Example) -> SpecFile {
        let g = &ex.algebra;
        let n = g.dim();
        let mut structure = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let z = g.constant(i, j, k);
                    if z.norm() != 0.0 {
                        structure.push((i, j, k, z.re, z.im));
                    }
                }
            }
        }
        let model = &ex.model;
        let dphi = model
            .dphi
            .iter()
            .map(|m| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect()).collect())
            .collect();
        let generators = ex
            .lattice
            .generators
            .iter()
            .map(|(name, e)| (name.clone(), ElementSpec { t: e.t.clone(), v: e.v.iter().map(pair).collect() }))
            .collect();
        let paths = ex
            .paths
            .iter()
            .map(|(name, p)| {
                let segs = p
                    .segments
                    .iter()
                    .map(|s| SegmentSpec { direction: s.direction.iter().map(pair).collect(), dt: s.duration })
                    .collect();
                (name.clone(), segs)
            })
            .collect();
        SpecFile {
            algebra: AlgebraSpec { dim: n, basis: g.names().to_vec(), structure },
            model: Some(ModelSpec { k: model.k, m: model.m, dphi }),
            lattice: Some(LatticeSpec { generators, relations: ex.lattice.relations.clone() }),
            paths,
            tolerances: None,
            seed: None,
        }
    }

    pub fn builtin(name: &str) -> Option<SpecFile> {
        builtins::by_name(name).map(|ex| SpecFile::from_example(&ex))
    }
}
