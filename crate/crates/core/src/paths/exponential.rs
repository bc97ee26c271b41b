//! Parallel transport and exponential iterated integrals.

use crate::error::{Error, Result};
use crate::hull::ConnectionForm;
use crate::lie::LieAlgebra;
use crate::linalg::{expm, CMat, CVec, C64, ONE, ZERO};
use crate::paths::integrals::pullback;
use crate::paths::word::PathWord;

/// `int e^{d_1} w_12 e^{d_2} ... w_{n-1,n} e^{d_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralWord {
    pub exponents: Vec<CVec>,
    pub letters: Vec<CVec>,
}

impl IntegralWord {
    pub fn new(exponents: Vec<CVec>, letters: Vec<CVec>) -> Result<Self> {
        if exponents.len() != letters.len() + 1 {
            return Err(Error::MalformedWord(format!(
                "{} exponents need {} letters, got {}",
                exponents.len(),
                exponents.len().saturating_sub(1),
                letters.len()
            )));
        }
        Ok(IntegralWord { exponents, letters })
    }

    /// Ordinary `int w_1 ... w_k` written with zero exponents.
    pub fn ordinary(letters: Vec<CVec>, dim: usize) -> Self {
        IntegralWord { exponents: vec![CVec::zeros(dim); letters.len() + 1], letters }
    }

    pub fn size(&self) -> usize {
        self.exponents.len()
    }

    /// Worst `|delta([e_i, e_j])|` over the exponents.
    pub fn closedness_residual(&self, g: &LieAlgebra) -> f64 {
        let n = g.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let br = g.bracket_basis(i, j);
                for d in &self.exponents {
                    worst = worst.max(d.dot(&br).norm());
                }
            }
        }
        worst
    }

    /// Bidiagonal connection value on a direction.
    pub fn connection(&self, x: &CVec) -> CMat {
        let n = self.size();
        let mut a = CMat::zeros(n, n);
        for (k, d) in self.exponents.iter().enumerate() {
            a[(k, k)] = d.dot(x);
        }
        for (k, w) in self.letters.iter().enumerate() {
            a[(k, k + 1)] = w.dot(x);
        }
        a
    }
}

/// Product of segment exponentials of an operator-valued form, first segment leftmost.
pub fn transport_with(path: &PathWord, size: usize, form: impl Fn(&CVec) -> CMat) -> CMat {
    let mut t = CMat::identity(size, size);
    for seg in &path.segments {
        let a = form(&seg.direction) * C64::new(seg.duration, 0.0);
        t *= expm(&a);
    }
    t
}

pub fn transport(cf: &ConnectionForm, path: &PathWord) -> CMat {
    transport_with(path, cf.dim_rep, |x| cf.apply(x))
}

/// Entry `(1, n)` of the transport of the bidiagonal connection.
pub fn exp_iterated_integral(word: &IntegralWord, path: &PathWord) -> C64 {
    let t = transport_with(path, word.size(), |x| word.connection(x));
    t[(0, word.size() - 1)]
}

#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: C64,
    /// Bound on the omitted terms.
    pub tail_bound: f64,
    /// `sum |dt| (max_k |d_k(X)| + max_k |w_k(X)|)`.
    pub norm_a: f64,
}

/// Complete homogeneous symmetric polynomials `h_0..h_depth` of `xs`.
fn complete_homogeneous(xs: &[C64], depth: usize) -> Vec<C64> {
    let mut h = vec![ZERO; depth + 1];
    h[0] = ONE;
    for &x in xs {
        for k in 1..=depth {
            h[k] = h[k] + x * h[k - 1];
        }
    }
    h
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Partial sum over `m_1 + ... + m_n <= depth` of
/// `int d_1^{m_1} w_12 d_2^{m_2} ... w_{n-1,n} d_n^{m_n}`.
pub fn exp_iterated_integral_series(word: &IntegralWord, path: &PathWord, depth: usize) -> SeriesValue {
    let n = word.size();
    // v[b][c]: prefix sums ending in block b having used c exponent letters
    let mut v = vec![vec![ZERO; depth + 1]; n];
    v[0][0] = ONE;
    let mut alpha = 0.0;
    let mut beta = 0.0;
    for seg in &path.segments {
        let dt = seg.duration;
        let d: Vec<C64> = word.exponents.iter().map(|w| pullback(w, seg)).collect();
        let w: Vec<C64> = word.letters.iter().map(|w| pullback(w, seg)).collect();
        alpha += dt.abs() * d.iter().map(|z| z.norm()).fold(0.0, f64::max);
        beta += dt.abs() * w.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut next = vec![vec![ZERO; depth + 1]; n];
        for b in 0..n {
            let mut letters = ONE;
            for b2 in b..n {
                if b2 > b {
                    letters *= w[b2 - 1];
                }
                if letters == ZERO {
                    break;
                }
                let h = complete_homogeneous(&d[b..=b2], depth);
                for c in 0..=depth {
                    let prev = v[b][c];
                    if prev == ZERO {
                        continue;
                    }
                    for k in 0..=(depth - c) {
                        let len = k + b2 - b;
                        let piece = h[k] * letters * (dt.powi(len as i32) / factorial(len));
                        next[b2][c + k] += prev * piece;
                    }
                }
            }
        }
        v = next;
    }
    let value = v[n - 1].iter().copied().sum();
    let norm_a = alpha + beta;
    let tail_bound = norm_a.powi(depth as i32 + 1) * norm_a.exp() / factorial(depth + 1);
    SeriesValue { value, tail_bound, norm_a }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, exp_divided_difference};
    use crate::paths::integrals::iterated_integral;
    use crate::paths::word::Segment;

    fn cv(xs: &[C64]) -> CVec {
        CVec::from_vec(xs.to_vec())
    }

    /// Enumerates every exponent distribution and sums ordinary integrals.
    fn brute_series(word: &IntegralWord, path: &PathWord, depth: usize) -> C64 {
        fn rec(word: &IntegralWord, path: &PathWord, b: usize, left: usize, forms: &mut Vec<CVec>) -> C64 {
            let n = word.size();
            let mut total = ZERO;
            for m in 0..=left {
                let base = forms.len();
                for _ in 0..m {
                    forms.push(word.exponents[b].clone());
                }
                if b + 1 == n {
                    total += if forms.is_empty() { ONE } else { iterated_integral(forms, path) };
                } else {
                    forms.push(word.letters[b].clone());
                    total += rec(word, path, b + 1, left - m, forms);
                }
                forms.truncate(base);
            }
            total
        }
        rec(word, path, 0, depth, &mut Vec::new())
    }

    fn sample() -> (IntegralWord, PathWord) {
        let word = IntegralWord::new(
            vec![cv(&[c(0.3, 0.2), ZERO]), cv(&[c(-0.5, 0.0), c(0.1, 0.0)]), cv(&[ZERO, c(0.0, 0.7)])],
            vec![cv(&[ONE, c(0.2, 0.0)]), cv(&[c(0.4, -0.1), ONE])],
        )
        .unwrap();
        let path = PathWord::new(vec![
            Segment::new(cv(&[ONE, c(0.5, 0.0)]), 0.8),
            Segment::new(cv(&[c(-0.2, 0.0), ONE]), -0.6),
            Segment::new(cv(&[c(0.7, 0.0), c(0.3, 0.0)]), 1.1),
        ]);
        (word, path)
    }

    #[test]
    fn series_dp_matches_enumeration() {
        let (word, path) = sample();
        for depth in 0..6 {
            let dp = exp_iterated_integral_series(&word, &path, depth).value;
            let bf = brute_series(&word, &path, depth);
            assert!((dp - bf).norm() < 1e-13, "depth {depth}: {dp} vs {bf}");
        }
    }

    #[test]
    fn series_converges_to_transport_within_bound() {
        let (word, path) = sample();
        let exact = exp_iterated_integral(&word, &path);
        let s = exp_iterated_integral_series(&word, &path, 25);
        assert!(s.norm_a <= 4.0);
        assert!((s.value - exact).norm() < 1e-12);
        for depth in [2, 4, 8] {
            let s = exp_iterated_integral_series(&word, &path, depth);
            assert!((s.value - exact).norm() <= s.tail_bound);
        }
    }

    #[test]
    fn pure_exponential_on_one_segment() {
        let word = IntegralWord::new(vec![cv(&[c(0.0, 1.0)])], vec![]).unwrap();
        let path = PathWord::single(cv(&[c(2.0, 0.0)]), 0.75);
        let want = c(0.0, 1.5).exp();
        assert!((exp_iterated_integral(&word, &path) - want).norm() < 1e-14);
        assert_eq!(exp_iterated_integral_series(&word, &path, 0).value, ONE);
    }

    #[test]
    fn two_exponents_give_divided_difference() {
        let word = IntegralWord::new(vec![cv(&[c(0.4, 0.0)]), cv(&[c(-1.0, 0.5)])], vec![cv(&[c(2.0, 0.0)])]).unwrap();
        let path = PathWord::single(cv(&[ONE]), 1.3);
        let (a, b) = (c(0.4 * 1.3, 0.0), c(-1.3, 0.65));
        let want = c(2.0 * 1.3, 0.0) * exp_divided_difference(a, b);
        assert!((exp_iterated_integral(&word, &path) - want).norm() < 1e-13);
        assert!((exp_iterated_integral_series(&word, &path, 40).value - want).norm() < 1e-13);
    }

    #[test]
    fn zero_exponents_recover_ordinary_integrals() {
        let (_, path) = sample();
        let letters = vec![cv(&[ONE, c(0.2, 0.0)]), cv(&[c(0.4, -0.1), ONE])];
        let word = IntegralWord::ordinary(letters.clone(), 2);
        let ord = iterated_integral(&letters, &path);
        assert!((exp_iterated_integral(&word, &path) - ord).norm() < 1e-13);
        // the series stops changing at depth 0 since every exponent vanishes
        let s0 = exp_iterated_integral_series(&word, &path, 0).value;
        let s5 = exp_iterated_integral_series(&word, &path, 5).value;
        assert_eq!(s0, s5);
    }

    #[test]
    fn malformed_word_is_rejected() {
        assert!(IntegralWord::new(vec![cv(&[ONE])], vec![cv(&[ONE])]).is_err());
    }
}
