//! Spectral routines built on the complex Schur form: eigenvalues,
//! diagonalization into the torus, and the principal matrix logarithm.

use nalgebra::Schur;

use super::expm::mexp;
use crate::error::{Error, Result};
use crate::matrix::{self, c64, CMat, C64};

/// Eigenvector condition numbers above this are treated as defective.
pub const MAX_CONDITION: f64 = 1e8;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_ITERS: usize = 10_000;

fn schur(m: &CMat) -> Result<(CMat, CMat)> {
    Schur::try_new(m.clone(), SCHUR_EPS, SCHUR_ITERS)
        .map(|s| s.unpack())
        .ok_or_else(|| Error::Invalid("Schur iteration did not converge".into()))
}

pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let (_, t) = schur(m)?;
    Ok(t.diagonal().iter().copied().collect())
}

/// `M = P D P⁻¹` with `D` diagonal.
#[derive(Clone, Debug)]
pub struct TorusConjugation {
    pub p: CMat,
    pub d: Vec<C64>,
    /// Spectral condition number of `P`; `1` when `P` is unitary.
    pub condition: f64,
}

impl TorusConjugation {
    pub fn d_matrix(&self) -> CMat {
        matrix::diag(&self.d)
    }

    pub fn reconstruct(&self) -> Result<CMat> {
        Ok(&self.p * self.d_matrix() * matrix::inverse(&self.p)?)
    }
}

/// Diagonalizes `M`. Normal matrices get the unitary Schur basis; otherwise
/// eigenvectors come from back-substitution on the triangular factor.
pub fn conjugate_to_torus(m: &CMat) -> Result<TorusConjugation> {
    let d = m.nrows();
    let (q, t) = schur(m)?;
    let scale = matrix::max_abs(&t).max(f64::MIN_POSITIVE);
    let off = (0..d)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .map(|(i, j)| t[(i, j)].norm())
        .fold(0.0, f64::max);
    let evs: Vec<C64> = t.diagonal().iter().copied().collect();
    if off <= 1e-11 * scale {
        return Ok(TorusConjugation {
            p: q,
            d: evs,
            condition: 1.0,
        });
    }
    let mut v = CMat::zeros(d, d);
    for j in 0..d {
        v[(j, j)] = c64(1.0, 0.0);
        for i in (0..j).rev() {
            let num: C64 = (i + 1..=j).map(|k| t[(i, k)] * v[(k, j)]).sum();
            let den = t[(i, i)] - t[(j, j)];
            if den.norm() <= 1e-13 * scale {
                if num.norm() <= 1e-11 * scale {
                    v[(i, j)] = c64(0.0, 0.0);
                } else {
                    return Err(Error::NonSemisimple {
                        condition: f64::INFINITY,
                    });
                }
            } else {
                v[(i, j)] = -num / den;
            }
        }
        let n = v.column(j).norm();
        v.column_mut(j).unscale_mut(n);
    }
    let p = q * v;
    let sv = p.singular_values();
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::NonSemisimple { condition });
    }
    Ok(TorusConjugation {
        p,
        d: evs,
        condition,
    })
}

/// Principal scalar log with arguments in `(−π, π]`.
fn principal_ln(z: C64) -> C64 {
    let l = z.ln();
    if l.im <= -std::f64::consts::PI + 1e-15 {
        c64(l.re, std::f64::consts::PI)
    } else {
        l
    }
}

/// Denman–Beavers iteration for the principal square root.
fn sqrtm_db(m: &CMat) -> Result<CMat> {
    let d = m.nrows();
    let mut y = m.clone();
    let mut z = CMat::identity(d, d);
    for _ in 0..100 {
        let yi = matrix::inverse(&y)?;
        let zi = matrix::inverse(&z)?;
        let y1 = (&y + zi) * c64(0.5, 0.0);
        let z1 = (&z + yi) * c64(0.5, 0.0);
        let change = matrix::max_diff(&y1, &y);
        y = y1;
        z = z1;
        if change <= 1e-15 * matrix::max_abs(&y).max(1.0) {
            break;
        }
    }
    Ok(y)
}

/// Principal matrix logarithm.
///
/// Away from the closed negative real axis: inverse scaling and squaring
/// (repeated square roots until `‖M − I‖ <= 1/4`, then a Taylor series).
/// With an eigenvalue on that axis, falls back to the eigenbasis, which
/// needs `M` diagonalizable.
pub fn mlog(m: &CMat) -> Result<CMat> {
    let d = m.nrows();
    let evs = eigenvalues(m)?;
    let scale = matrix::max_abs(m).max(1.0);
    if evs.iter().any(|z| z.norm() <= 1e-14 * scale) {
        return Err(Error::Singular);
    }
    let on_cut = evs
        .iter()
        .any(|z| z.re < 0.0 && z.im.abs() <= 1e-12 * z.norm());
    if on_cut {
        let tc = conjugate_to_torus(m).map_err(|e| match e {
            Error::NonSemisimple { condition } => Error::Branch(format!(
                "eigenvalue on the negative real axis and eigenvector condition {condition:e}"
            )),
            other => other,
        })?;
        let logs: Vec<C64> = tc.d.iter().map(|&z| principal_ln(z)).collect();
        return Ok(&tc.p * matrix::diag(&logs) * matrix::inverse(&tc.p)?);
    }
    let id = CMat::identity(d, d);
    let mut y = m.clone();
    let mut s = 0;
    while matrix::spectral_norm(&(&y - &id)) > 0.25 {
        y = sqrtm_db(&y)?;
        s += 1;
        if s > 60 {
            return Err(Error::Branch("square-root iteration did not reach I".into()));
        }
    }
    let x = &y - &id;
    let mut term = x.clone();
    let mut out = x.clone();
    for k in 2..=30 {
        term = &term * &x;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        out += &term * c64(sign / k as f64, 0.0);
    }
    Ok(out * c64(2f64.powi(s), 0.0))
}

/// `M ∈ exp(sl(2, ℂ))` iff `tr M ≠ −2` or `M = −I`.
pub fn in_exp_image_sl2(m: &CMat) -> Result<bool> {
    if m.nrows() != 2 || m.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            left: 2,
            right: m.nrows(),
        });
    }
    let dev = (matrix::det(m) - c64(1.0, 0.0)).norm();
    if dev > 1e-10 {
        return Err(Error::DetNotOne { deviation: dev });
    }
    let tr = matrix::trace(m);
    let minus_id = -CMat::identity(2, 2);
    Ok((tr + c64(2.0, 0.0)).norm() > 1e-9 || matrix::max_diff(m, &minus_id) <= 1e-9)
}

/// `exp ∘ log` round trip, used in tests.
pub fn exp_log_defect(m: &CMat) -> Result<f64> {
    Ok(matrix::max_diff(&mexp(&mlog(m)?), m))
}
