//! Small dense complex matrices and the handful of kernels the rest of the
//! crate shares.

use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

pub type CMat = DMatrix<C64>;

#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn zeros(d: usize) -> CMat {
    CMat::zeros(d, d)
}

/// Builds a matrix from row-major real entries.
pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let d = rows.len();
    CMat::from_fn(d, rows[0].len(), |i, j| c64(rows[i][j], 0.0))
}

pub fn diag(entries: &[C64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn trace(a: &CMat) -> C64 {
    a.diagonal().iter().sum()
}

/// Trace of a product without forming it.
pub fn trace_of_product(a: &CMat, b: &CMat) -> C64 {
    let d = a.nrows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Operator 2-norm.
pub fn spectral_norm(a: &CMat) -> f64 {
    spectral_norm_slice(a.nrows(), a.as_slice())
}

/// Operator 2-norm of a column-major `d x d` block. Closed forms for `d <= 2`.
pub fn spectral_norm_slice(d: usize, a: &[C64]) -> f64 {
    match d {
        0 => 0.0,
        1 => a[0].norm(),
        2 => {
            // Largest eigenvalue of the Gram matrix [[p, r], [r̄, q]].
            let p = a[0].norm_sqr() + a[1].norm_sqr();
            let q = a[2].norm_sqr() + a[3].norm_sqr();
            let r = a[0].conj() * a[2] + a[1].conj() * a[3];
            let h = 0.5 * (p - q);
            (0.5 * (p + q) + h.hypot(r.norm())).sqrt()
        }
        _ => CMat::from_column_slice(d, d, a)
            .singular_values()
            .iter()
            .fold(0.0, |m, &s| m.max(s)),
    }
}

pub fn is_zero(a: &CMat) -> bool {
    a.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

/// Deviation of `a` from being anti-Hermitian.
pub fn anti_hermitian_defect(a: &CMat) -> f64 {
    max_abs(&(a + a.adjoint()))
}

/// Determinant by cofactor expansion; exact enough for the small sizes used here.
pub fn det(a: &CMat) -> C64 {
    a.clone().determinant()
}

pub fn inverse(a: &CMat) -> crate::Result<CMat> {
    a.clone().try_inverse().ok_or(crate::Error::Singular)
}
