use crate::error::{Error, Result};
use crate::linalg::{max_abs_vec, CVec};

/// Left-invariant exponential segment `u -> exp(u X)`, `u` in `[0, dt]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub direction: CVec,
    pub duration: f64,
}

impl Segment {
    pub fn new(direction: CVec, duration: f64) -> Self {
        Segment { direction, duration }
    }

    pub fn reversed(&self) -> Self {
        Segment { direction: self.direction.clone(), duration: -self.duration }
    }
}

/// A path as an ordered word of segments starting at the identity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathWord {
    pub segments: Vec<Segment>,
}

impl PathWord {
    pub fn new(segments: Vec<Segment>) -> Self {
        PathWord { segments }
    }

    pub fn empty() -> Self {
        PathWord::default()
    }

    pub fn single(direction: CVec, duration: f64) -> Self {
        PathWord { segments: vec![Segment::new(direction, duration)] }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Checks dimensions and finiteness.
    pub fn validate(&self, dim: usize) -> Result<()> {
        for (k, s) in self.segments.iter().enumerate() {
            if s.direction.len() != dim {
                return Err(Error::InvalidPath(format!(
                    "segment {k} has {} coordinates, expected {dim}",
                    s.direction.len()
                )));
            }
            if !s.duration.is_finite() || s.direction.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidPath(format!("segment {k} is not finite")));
            }
        }
        Ok(())
    }

    pub fn concat(&self, other: &PathWord) -> PathWord {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        PathWord { segments }
    }

    pub fn inverse(&self) -> PathWord {
        PathWord { segments: self.segments.iter().rev().map(Segment::reversed).collect() }
    }

    /// Splits segment `index` at `fraction` of its duration.
    pub fn subdivide(&self, index: usize, fraction: f64) -> PathWord {
        let mut segments = Vec::with_capacity(self.segments.len() + 1);
        for (k, s) in self.segments.iter().enumerate() {
            if k == index {
                let first = s.duration * fraction;
                segments.push(Segment::new(s.direction.clone(), first));
                segments.push(Segment::new(s.direction.clone(), s.duration - first));
            } else {
                segments.push(s.clone());
            }
        }
        PathWord { segments }
    }

    /// Removes adjacent pairs `(X, t)(X, -t)` until none remain.
    pub fn cancel_pairs(&self, tol: f64) -> PathWord {
        let mut out: Vec<Segment> = Vec::with_capacity(self.segments.len());
        for s in &self.segments {
            if let Some(last) = out.last() {
                if (last.duration + s.duration).abs() <= tol && max_abs_vec(&(&last.direction - &s.direction)) <= tol {
                    out.pop();
                    continue;
                }
            }
            out.push(s.clone());
        }
        PathWord { segments: out }
    }
}
