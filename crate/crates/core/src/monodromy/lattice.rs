//! Lattice generators, words in them, and loops representing lattice elements.

use crate::error::{Error, Result};
use crate::linalg::CVec;
use crate::monodromy::model::{GroupElement, SemidirectModel};
use crate::paths::{PathWord, Segment};

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub generators: Vec<(String, GroupElement)>,
    /// Words expected to evaluate to the identity.
    pub relations: Vec<String>,
}

/// One letter of a word: generator index and signed power.
pub type Letter = (usize, i64);

impl Lattice {
    pub fn index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Parses `a b1^-1 b2^3`. The empty string is the identity.
    pub fn parse_word(&self, word: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for token in word.split_whitespace() {
            let (name, power) = match token.split_once('^') {
                Some((n, p)) => {
                    let p: i64 = p.parse().map_err(|_| Error::MalformedWord(format!("bad exponent in `{token}`")))?;
                    (n, p)
                }
                None => (token, 1),
            };
            if name.is_empty() {
                return Err(Error::MalformedWord(format!("missing generator in `{token}`")));
            }
            out.push((self.index(name)?, power));
        }
        Ok(out)
    }

    pub fn evaluate(&self, model: &SemidirectModel, word: &[Letter]) -> GroupElement {
        let mut g = model.identity();
        for &(i, p) in word {
            let base = &self.generators[i].1;
            let step = if p < 0 { model.inverse(base) } else { base.clone() };
            for _ in 0..p.unsigned_abs() {
                g = model.mul(&g, &step);
            }
        }
        g
    }

    pub fn evaluate_str(&self, model: &SemidirectModel, word: &str) -> Result<GroupElement> {
        Ok(self.evaluate(model, &self.parse_word(word)?))
    }

    /// Concatenation of generator loops along a word.
    pub fn word_path(&self, model: &SemidirectModel, word: &[Letter], tol: f64) -> Result<PathWord> {
        let mut path = PathWord::empty();
        for &(i, p) in word {
            let base = loop_of(model, &self.generators[i].1, tol)?;
            let step = if p < 0 { base.inverse() } else { base };
            for _ in 0..p.unsigned_abs() {
                path = path.concat(&step);
            }
        }
        Ok(path)
    }

    /// Worst distance from the identity over the relation words.
    pub fn relation_residual(&self, model: &SemidirectModel) -> Result<f64> {
        let mut worst = 0.0f64;
        for r in &self.relations {
            let g = self.evaluate_str(model, r)?;
            worst = worst.max(g.distance(&model.identity()));
        }
        Ok(worst)
    }
}

/// Two-segment path from the identity to `gamma`: translate, then move in the
/// vector part. Checked against `gamma`.
pub fn loop_of(model: &SemidirectModel, gamma: &GroupElement, tol: f64) -> Result<PathWord> {
    let mut segments = Vec::new();
    if gamma.t.iter().any(|&x| x != 0.0) {
        segments.push(Segment::new(model.direction(&gamma.t, &CVec::zeros(model.m)), 1.0));
    }
    let neg: Vec<f64> = gamma.t.iter().map(|a| -a).collect();
    let w = model.phi(&neg) * &gamma.v;
    if w.iter().any(|z| z.norm() != 0.0) {
        segments.push(Segment::new(model.direction(&vec![0.0; model.k], &w), 1.0));
    }
    let path = PathWord::new(segments);
    let reached = model.endpoint(&path)?;
    let residual = reached.distance(gamma);
    if residual >= tol {
        return Err(Error::EndpointMismatch { residual });
    }
    Ok(path)
}
