//! Matrix exponential: scaling and squaring around diagonal Padé
//! approximants (degrees 3, 5, 7, 9, 13 with Higham's 1-norm thresholds).

use crate::matrix::{c64, CMat, C64};

const THETA: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
    (13, 5.371920351148152e0),
];

fn pade_coeffs(m: usize) -> &'static [f64] {
    match m {
        3 => &[120.0, 60.0, 12.0, 1.0],
        5 => &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => &[17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0],
        9 => &[
            17643225600.0,
            8821612800.0,
            2075673600.0,
            302702400.0,
            30270240.0,
            2162160.0,
            110880.0,
            3960.0,
            90.0,
            1.0,
        ],
        _ => &[
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ],
    }
}

fn norm1(a: &CMat) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `r_m(A) = (V − U)⁻¹ (V + U)` with `U` odd and `V` even in `A`.
fn pade(a: &CMat, m: usize) -> CMat {
    let b = pade_coeffs(m);
    let d = a.nrows();
    let a2 = a * a;
    let mut even = CMat::identity(d, d);
    let mut u = CMat::identity(d, d) * c64(b[1], 0.0);
    let mut v = CMat::identity(d, d) * c64(b[0], 0.0);
    for j in 1..=m / 2 {
        even = &even * &a2;
        v += &even * c64(b[2 * j], 0.0);
        if 2 * j < m {
            u += &even * c64(b[2 * j + 1], 0.0);
        }
    }
    let u = a * u;
    let p = &v + &u;
    let q = v - u;
    q.lu().solve(&p).expect("Padé denominator is nonsingular within the thresholds")
}

/// `sinh(s)/s`, stable near `s = 0`.
fn sinhc(s: C64) -> C64 {
    if s.norm() < 1e-4 {
        let s2 = s * s;
        c64(1.0, 0.0) + s2 / 6.0 + s2 * s2 / 120.0
    } else {
        s.sinh() / s
    }
}

/// `e^A` for `2 x 2` via `e^{τ}(cosh(s) I + sinh(s)/s (A − τ I))`, `τ = tr A / 2`, `s² = −det(A − τ I)`.
fn expm2(a: &CMat) -> CMat {
    let tau = (a[(0, 0)] + a[(1, 1)]) * 0.5;
    let b00 = a[(0, 0)] - tau;
    let s2 = b00 * b00 + a[(0, 1)] * a[(1, 0)];
    let s = s2.sqrt();
    let ch = s.cosh();
    let sh = sinhc(s);
    let et = tau.exp();
    CMat::from_row_slice(
        2,
        2,
        &[
            et * (ch + sh * b00),
            et * sh * a[(0, 1)],
            et * sh * a[(1, 0)],
            et * (ch - sh * b00),
        ],
    )
}

/// Matrix exponential.
pub fn mexp(a: &CMat) -> CMat {
    let d = a.nrows();
    if d == 1 {
        return CMat::from_element(1, 1, a[(0, 0)].exp());
    }
    if d == 2 && norm1(a) <= 8.0 {
        return expm2(a);
    }
    let n1 = norm1(a);
    for &(m, theta) in &THETA[..4] {
        if n1 <= theta {
            return pade(a, m);
        }
    }
    let s = if n1 > THETA[4].1 {
        (n1 / THETA[4].1).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * c64(0.5f64.powi(s), 0.0);
    let mut r = pade(&scaled, 13);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Padé path only, for cross-checking the closed form.
#[cfg(test)]
pub(crate) fn mexp_pade(a: &CMat) -> CMat {
    let n1 = norm1(a);
    let s = if n1 > THETA[4].1 {
        (n1 / THETA[4].1).log2().ceil() as i32
    } else {
        0
    };
    let mut r = pade(&(a * c64(0.5f64.powi(s), 0.0)), 13);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}
