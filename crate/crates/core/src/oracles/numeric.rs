//! Closed-form and brute-force references that avoid the production kernels.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::laurent::LaurentMatrix;
use crate::matrix::{c64, CMat, C64};

type Plain = Vec<Vec<C64>>;

fn plain(m: &CMat) -> Plain {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn plain_mul(a: &Plain, b: &Plain) -> Plain {
    let n = a.len();
    let mut out = vec![vec![c64(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn plain_norm1(a: &Plain) -> f64 {
    let n = a.len();
    (0..n)
        .map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Taylor series with scaling and squaring; adequate for the small,
/// well-conditioned exponents these oracles see.
fn plain_exp(a: &Plain) -> Plain {
    let n = a.len();
    let norm = plain_norm1(a);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let f = 0.5f64.powi(s as i32);
    let a: Plain = a.iter().map(|r| r.iter().map(|v| v * f).collect()).collect();
    let mut out: Plain = (0..n)
        .map(|i| (0..n).map(|j| c64(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let mut term = out.clone();
    for k in 1..40 {
        term = plain_mul(&term, &a);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                out[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        out = plain_mul(&out, &out);
    }
    out
}

/// Transport of `dg = g·α dz` around the unit circle when all coefficients
/// of `α` commute: `exp(2πi·a_{−1})`. Non-commuting input is rejected.
pub fn oracle_abelian_monodromy(alpha: &LaurentMatrix) -> Result<CMat> {
    let coeffs: Vec<Plain> = alpha.terms().map(|(_, a)| plain(a)).collect();
    let scale = coeffs
        .iter()
        .flat_map(|m| m.iter().flatten())
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    for (i, a) in coeffs.iter().enumerate() {
        for b in &coeffs[i + 1..] {
            let ab = plain_mul(a, b);
            let ba = plain_mul(b, a);
            let dev = ab
                .iter()
                .flatten()
                .zip(ba.iter().flatten())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            if dev > 1e-13 * scale * scale {
                return Err(Error::Invalid(format!(
                    "coefficients do not commute (defect {dev:e})"
                )));
            }
        }
    }
    let res = plain(&alpha.coeff(-1));
    let gen: Plain = res
        .iter()
        .map(|r| r.iter().map(|v| v * c64(0.0, 2.0 * PI)).collect())
        .collect();
    let e = plain_exp(&gen);
    let n = e.len();
    Ok(CMat::from_fn(n, n, |i, j| e[i][j]))
}

fn is_alcove(theta: &[f64], tol: f64) -> bool {
    theta.windows(2).all(|w| w[0] >= w[1] - tol) && theta[0] - theta[theta.len() - 1] <= 2.0 * PI + tol
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn translations(n: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-radius..=radius).map(move |m| {
                    let mut w = v.clone();
                    w.push(m);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().sum::<i64>() == 0);
    out
}

/// Brute-force alcove representative of `i·diag(θ)` under permutations and
/// translations by `2π·m` with `Σm = 0`, `|m_j| ≤ radius`. Among alcove
/// candidates the lexicographically largest is returned. A winner touching
/// the search boundary reports [`Error::SearchRadius`].
pub fn oracle_alcove(theta: &[f64], radius: i64) -> Result<Vec<f64>> {
    let n = theta.len();
    let mut best: Option<(Vec<f64>, i64)> = None;
    for perm in permutations(n) {
        for m in translations(n, radius) {
            let cand: Vec<f64> = (0..n).map(|i| theta[perm[i]] + 2.0 * PI * m[i] as f64).collect();
            if !is_alcove(&cand, 1e-9) {
                continue;
            }
            let reach = m.iter().map(|v| v.abs()).max().unwrap_or(0);
            let better = match &best {
                None => true,
                Some((b, _)) => cand
                    .iter()
                    .zip(b)
                    .find(|(x, y)| (*x - *y).abs() > 1e-9)
                    .is_some_and(|(x, y)| x > y),
            };
            if better {
                best = Some((cand, reach));
            }
        }
    }
    match best {
        Some((v, reach)) if reach < radius => Ok(v),
        _ => Err(Error::SearchRadius { radius }),
    }
}

/// [`oracle_alcove`] with the radius doubled until the search is conclusive.
pub fn oracle_alcove_auto(theta: &[f64]) -> Vec<f64> {
    let span = theta.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let mut radius = (span / (2.0 * PI)).ceil() as i64 + 2;
    loop {
        match oracle_alcove(theta, radius) {
            Ok(v) => return v,
            Err(_) => radius *= 2,
        }
    }
}
