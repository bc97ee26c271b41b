//! Dense complex linear algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Maximum absolute row sum.
pub fn norm_inf(m: &CMat) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn matrix_power(a: &CMat, p: usize) -> CMat {
    let n = a.nrows();
    let mut acc = CMat::identity(n, n);
    for _ in 0..p {
        acc = &acc * a;
    }
    acc
}

/// `A` is nilpotent iff `A^dim` has every entry below `tol` in magnitude.
pub fn is_nilpotent(a: &CMat, tol: f64) -> bool {
    max_abs(&matrix_power(a, a.nrows())) < tol
}

/// Largest magnitude strictly below the diagonal.
pub fn lower_residual(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in (j + 1)..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

pub fn upper_residual(m: &CMat) -> f64 {
    lower_residual(&m.transpose())
}

/// Singular values (descending) with the full set of right singular vectors.
/// Rows are zero-padded so that a null space is always representable.
fn svd_full(m: &CMat) -> (Vec<f64>, CMat, CMat) {
    let (r, cdim) = m.shape();
    let padded = if r < cdim {
        let mut p = CMat::zeros(cdim, cdim);
        p.view_mut((0, 0), (r, cdim)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| sv[i]).collect();
    let u_sorted = CMat::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]);
    // rows of v_t are right singular vectors (conjugated)
    let v_sorted = CMat::from_fn(v_t.ncols(), order.len(), |i, j| v_t[(order[j], i)].conj());
    (sorted, u_sorted, v_sorted)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    svd_full(m).0
}

/// Numerical rank: singular values above `tol`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > tol).count()
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &CMat, tol: f64) -> CMat {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return CMat::zeros(n, 0);
    }
    let (sv, u, _) = svd_full(m);
    let k = sv.iter().filter(|&&s| s > tol).count();
    u.columns(0, k).into_owned().rows(0, n).into_owned()
}

/// Orthonormal basis of the null space of `m`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let cdim = m.ncols();
    if cdim == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(cdim, cdim);
    }
    let (sv, _, v) = svd_full(m);
    let k = sv.iter().filter(|&&s| s > tol).count();
    v.columns(k, cdim - k).into_owned()
}

/// The `count` right singular vectors with the smallest singular values.
pub fn smallest_right_singular(m: &CMat, count: usize) -> CMat {
    let cdim = m.ncols();
    let (_, _, v) = svd_full(m);
    v.columns(cdim - count, count).into_owned()
}

/// Max-entry distance of `v` from the span of the orthonormal columns of `q`.
pub fn residual_outside(q: &CMat, v: &CVec) -> f64 {
    if q.ncols() == 0 {
        return max_abs_vec(v);
    }
    let proj = q * (q.adjoint() * v);
    max_abs_vec(&(v - proj))
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal column bases. Returns 1 when dimensions differ.
pub fn subspace_distance(a: &CMat, b: &CMat) -> f64 {
    if a.ncols() != b.ncols() {
        return 1.0;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let n = a.nrows();
    let proj = CMat::identity(n, n) - a * a.adjoint();
    let resid = proj * b;
    singular_values(&resid).first().copied().unwrap_or(0.0).min(1.0)
}

/// Least-squares solution of `a x = b`, with the max residual of the fit.
pub fn least_squares(a: &CMat, b: &CVec) -> (CVec, f64) {
    if a.ncols() == 0 {
        return (CVec::zeros(0), max_abs_vec(b));
    }
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(b, 1e-13 * svd.singular_values.max().max(1.0))
        .expect("svd solve");
    let resid = max_abs_vec(&(a * &x - b));
    (x, resid)
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    m.clone().try_inverse()
}

/// Matrix exponential (scaling and squaring with Padé approximants).
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    if n == 2 && a[(1, 0)] == ZERO {
        return expm_upper_2x2(a[(0, 0)], a[(0, 1)], a[(1, 1)]);
    }
    if max_abs(a) == 0.0 {
        return CMat::identity(n, n);
    }
    a.exp()
}

/// Divided difference `(e^a - e^b)/(a - b)`, switching to its Taylor
/// expansion around the midpoint when `a` and `b` nearly coincide.
pub fn exp_divided_difference(a: C64, b: C64) -> C64 {
    let d = a - b;
    if d.norm() < 1e-6 {
        let m = (a + b) * 0.5;
        let h2 = (d * 0.5) * (d * 0.5);
        // e^m * sinh(h)/h with h = d/2
        m.exp() * (ONE + h2 / 6.0 + h2 * h2 / 120.0)
    } else {
        (a.exp() - b.exp()) / d
    }
}

/// Closed form of `exp([[a, w], [0, b]])`.
pub fn expm_upper_2x2(a: C64, w: C64, b: C64) -> CMat {
    CMat::from_row_slice(2, 2, &[a.exp(), w * exp_divided_difference(a, b), ZERO, b.exp()])
}

/// `phi_1(A) x = sum_j A^j x / (j+1)!`, evaluated through the exponential of
/// the augmented block matrix `[[A, x], [0, 0]]`.
pub fn phi1_apply(a: &CMat, x: &CVec) -> CVec {
    let n = a.nrows();
    let mut aug = CMat::zeros(n + 1, n + 1);
    aug.view_mut((0, 0), (n, n)).copy_from(a);
    aug.view_mut((0, n), (n, 1)).copy_from(x);
    let e = expm(&aug);
    e.view((0, n), (n, 1)).column(0).into_owned()
}
