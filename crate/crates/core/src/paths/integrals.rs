//! Chen iterated integrals of invariant 1-forms along segment words.

use crate::linalg::{CVec, C64, ONE, ZERO};
use crate::paths::word::{PathWord, Segment};

/// `omega(X)`: the constant pullback of an invariant form along a segment.
pub fn pullback(omega: &CVec, seg: &Segment) -> C64 {
    omega.dot(&seg.direction)
}

/// All prefix integrals `S[k] = int omega_1 .. omega_k`, `S[0] = 1`.
pub fn prefix_integrals(omegas: &[CVec], path: &PathWord) -> Vec<C64> {
    let n = omegas.len();
    let mut s = vec![ZERO; n + 1];
    s[0] = ONE;
    for seg in &path.segments {
        let a: Vec<C64> = omegas.iter().map(|w| pullback(w, seg)).collect();
        let dt = seg.duration;
        // Chen: S'[k] = sum_j S[j] * prod_{i=j+1..k} a_i * dt^(k-j) / (k-j)!
        let mut next = vec![ZERO; n + 1];
        for k in 0..=n {
            let mut piece = ONE;
            let mut acc = s[k];
            for j in (0..k).rev() {
                let len = (k - j) as f64;
                piece = piece * a[j] * (dt / len);
                acc += s[j] * piece;
            }
            next[k] = acc;
        }
        s = next;
    }
    s
}

/// `int_path omega_1 ... omega_n`, exact for segment words.
pub fn iterated_integral(omegas: &[CVec], path: &PathWord) -> C64 {
    prefix_integrals(omegas, path)[omegas.len()]
}

/// Discretized simplex integral: each segment is cut into equal steps and the
/// nested integrals are accumulated with the trapezoid rule.
pub fn iterated_integral_quadrature(omegas: &[CVec], path: &PathWord, subdivisions: usize) -> C64 {
    let n = omegas.len();
    let mut s = vec![ZERO; n + 1];
    s[0] = ONE;
    if path.is_empty() {
        return s[n];
    }
    let per_segment = (subdivisions / path.len()).max(1);
    for seg in &path.segments {
        let h = seg.duration / per_segment as f64;
        let f: Vec<C64> = omegas.iter().map(|w| pullback(w, seg) * h).collect();
        for _ in 0..per_segment {
            let old = s.clone();
            for k in 1..=n {
                s[k] = old[k] + f[k - 1] * (old[k - 1] + s[k - 1]) * 0.5;
            }
        }
    }
    s[n]
}

/// `|int w1 * int w2 - int w1 w2 - int w2 w1|`.
pub fn shuffle_check(omega1: &CVec, omega2: &CVec, path: &PathWord) -> f64 {
    let a = iterated_integral(std::slice::from_ref(omega1), path);
    let b = iterated_integral(std::slice::from_ref(omega2), path);
    let ab = iterated_integral(&[omega1.clone(), omega2.clone()], path);
    let ba = iterated_integral(&[omega2.clone(), omega1.clone()], path);
    (a * b - ab - ba).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn e(i: usize, n: usize) -> CVec {
        let mut v = CVec::zeros(n);
        v[i] = ONE;
        v
    }

    #[test]
    fn single_segment_is_simplex_volume() {
        let x = CVec::from_vec(vec![c(2.0, 0.0), c(0.0, 1.0)]);
        let path = PathWord::single(x, 1.5);
        let w = CVec::from_vec(vec![ONE, ONE]);
        let a = c(2.0, 1.0);
        for depth in 1..6 {
            let forms = vec![w.clone(); depth];
            let fact: f64 = (1..=depth).map(|k| k as f64).product();
            let want = a.powu(depth as u32) * 1.5f64.powi(depth as i32) / fact;
            assert!((iterated_integral(&forms, &path) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn pullback_ignores_duration() {
        let ipi_dt = CVec::from_vec(vec![c(0.0, std::f64::consts::PI), ZERO, ZERO]);
        let seg = Segment::new(e(0, 3), 2.0);
        assert_eq!(pullback(&ipi_dt, &seg), c(0.0, std::f64::consts::PI));
        assert_eq!(pullback(&e(0, 3), &Segment::new(e(1, 3), 1.0)), ZERO);
    }

    #[test]
    fn depth_two_over_two_segments_matches_hand_value() {
        // (x, 1) then (y, 1) with forms dx, dy: int dx dy = 1, int dy dx = 0
        let path = PathWord::new(vec![Segment::new(e(0, 2), 1.0), Segment::new(e(1, 2), 1.0)]);
        assert!((iterated_integral(&[e(0, 2), e(1, 2)], &path) - ONE).norm() < 1e-15);
        assert!(iterated_integral(&[e(1, 2), e(0, 2)], &path).norm() < 1e-15);
    }

    #[test]
    fn quadrature_is_exact_at_depth_one_and_converges() {
        let path = PathWord::new(vec![
            Segment::new(CVec::from_vec(vec![c(1.0, 0.5), c(-0.3, 0.0)]), 0.7),
            Segment::new(CVec::from_vec(vec![c(-0.2, 0.0), c(1.1, 0.0)]), -1.3),
        ]);
        let w = CVec::from_vec(vec![c(0.4, 0.0), c(0.9, -0.2)]);
        let exact = iterated_integral(std::slice::from_ref(&w), &path);
        assert!((iterated_integral_quadrature(std::slice::from_ref(&w), &path, 2) - exact).norm() < 1e-14);
        let forms = vec![w.clone(), e(0, 2), w.clone()];
        let exact3 = iterated_integral(&forms, &path);
        let coarse = (iterated_integral_quadrature(&forms, &path, 100) - exact3).norm();
        let fine = (iterated_integral_quadrature(&forms, &path, 1000) - exact3).norm();
        assert!(fine < coarse && fine < 1e-4, "{coarse} {fine}");
    }

    #[test]
    fn empty_path_gives_zero() {
        assert_eq!(iterated_integral(&[e(0, 1)], &PathWord::empty()), ZERO);
        assert_eq!(iterated_integral_quadrature(&[e(0, 1)], &PathWord::empty(), 10), ZERO);
    }

    #[test]
    fn shuffle_on_single_segment_and_symmetric_case() {
        let path = PathWord::single(CVec::from_vec(vec![c(0.3, 0.1), c(1.2, 0.0)]), 2.0);
        let w1 = CVec::from_vec(vec![ONE, c(0.5, 0.0)]);
        let w2 = CVec::from_vec(vec![c(-1.0, 2.0), ZERO]);
        assert!(shuffle_check(&w1, &w2, &path) < 1e-13);
        assert!(shuffle_check(&w1, &w1, &path) < 1e-13);
    }
}
