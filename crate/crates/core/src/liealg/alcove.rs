//! Alcove reduction in the diagonal torus of `su(n)`.
//!
//! Elements are `i·diag(θ)` with `Σθ = 0`. The affine Weyl group acts by
//! permutations and by integer translations `θ ↦ θ + 2π m` with `Σm = 0`.
//! The chosen fundamental domain is `θ_1 >= … >= θ_n`, `θ_1 − θ_n <= 2π`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::matrix::{self, c64, CMat};

/// Entries within this of a full period are folded back to zero.
const WRAP_TOL: f64 = 1e-12;

/// An element of the diagonal torus, stored by its angle vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionElement {
    pub theta: Vec<f64>,
    pub alcove_reduced: bool,
}

impl SectionElement {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        let s: f64 = theta.iter().sum();
        if s.abs() > 1e-9 {
            return Err(Error::NotInTorus(format!("angles sum to {s:e}")));
        }
        Ok(SectionElement {
            theta,
            alcove_reduced: false,
        })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    /// `X = i·diag(θ)`.
    pub fn matrix(&self) -> CMat {
        let d: Vec<_> = self.theta.iter().map(|&t| c64(0.0, t)).collect();
        matrix::diag(&d)
    }

    /// The constant loop `X / 2π`, whose transport over one period is `e^{iθ}`.
    pub fn loop_value(&self) -> CMat {
        self.matrix() / c64(TAU, 0.0)
    }

    pub fn is_in_alcove(&self, tol: f64) -> bool {
        let t = &self.theta;
        t.windows(2).all(|w| w[0] >= w[1] - tol) && t[0] - t[t.len() - 1] <= TAU + tol
    }

    pub fn max_diff(&self, other: &SectionElement) -> f64 {
        self.theta
            .iter()
            .zip(&other.theta)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// How a reduction was realized: `out[i] = θ[perm[i]] + 2π·shift[perm[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlcoveWitness {
    pub perm: Vec<usize>,
    pub shift: Vec<i64>,
}

/// Reduces an angle vector into the alcove.
pub fn alcove_reduce_theta(theta: &[f64]) -> Result<(SectionElement, AlcoveWitness)> {
    let n = theta.len();
    if n == 0 {
        return Err(Error::NotInTorus("empty angle vector".into()));
    }
    let s: f64 = theta.iter().sum();
    if s.abs() > 1e-9 * (1.0 + theta.iter().map(|t| t.abs()).sum::<f64>()) {
        return Err(Error::NotInTorus(format!("angles sum to {s:e}")));
    }
    let mut phi = Vec::with_capacity(n);
    let mut shift = Vec::with_capacity(n);
    for &t in theta {
        let mut q = (t / TAU).floor();
        let mut p = t - q * TAU;
        if p >= TAU - WRAP_TOL {
            p -= TAU;
            q += 1.0;
        }
        p = p.max(0.0);
        phi.push(p);
        shift.push(-(q as i64));
    }
    // Σφ = 2πK exactly in integers.
    let k = shift.iter().sum::<i64>().clamp(0, n as i64) as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| phi[b].total_cmp(&phi[a]).then(a.cmp(&b)));
    for &j in &order[..k] {
        phi[j] -= TAU;
        shift[j] -= 1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| phi[b].total_cmp(&phi[a]).then(a.cmp(&b)));
    let out: Vec<f64> = perm.iter().map(|&j| theta[j] + TAU * shift[j] as f64).collect();
    Ok((
        SectionElement {
            theta: out,
            alcove_reduced: true,
        },
        AlcoveWitness { perm, shift },
    ))
}

/// Reduces `X = i·diag(θ)`; rejects non-diagonal or non-anti-Hermitian input.
pub fn alcove_reduce(x: &CMat) -> Result<(SectionElement, AlcoveWitness)> {
    let n = x.nrows();
    let scale = matrix::max_abs(x).max(1.0);
    for i in 0..n {
        for j in 0..n {
            if i != j && x[(i, j)].norm() > 1e-12 * scale {
                return Err(Error::NotInTorus("matrix is not diagonal".into()));
            }
        }
        if x[(i, i)].re.abs() > 1e-12 * scale {
            return Err(Error::NotInTorus("diagonal is not imaginary".into()));
        }
    }
    let theta: Vec<f64> = (0..n).map(|i| x[(i, i)].im).collect();
    alcove_reduce_theta(&theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn reduce(t: &[f64]) -> Vec<f64> {
        alcove_reduce_theta(t).unwrap().0.theta
    }

    #[test]
    fn examples() {
        assert_eq!(reduce(&[0.0, 0.0]), vec![0.0, 0.0]);
        assert_eq!(reduce(&[0.3, -0.3]), vec![0.3, -0.3]);
        let r = reduce(&[TAU + 0.1, -TAU - 0.1]);
        assert!((r[0] - 0.1).abs() < 1e-14 && (r[1] + 0.1).abs() < 1e-14);
        let r = reduce(&[1.2 * PI, -1.2 * PI]);
        assert!((r[0] - 0.8 * PI).abs() < 1e-14 && (r[1] + 0.8 * PI).abs() < 1e-14);
    }

    #[test]
    fn witness_reproduces_output() {
        let t = [5.0, -11.0, 6.0];
        let (s, w) = alcove_reduce_theta(&t).unwrap();
        assert_eq!(w.shift.iter().sum::<i64>(), 0);
        for (i, &j) in w.perm.iter().enumerate() {
            assert!((s.theta[i] - (t[j] + TAU * w.shift[j] as f64)).abs() < 1e-12);
        }
        assert!(s.is_in_alcove(1e-12));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(alcove_reduce_theta(&[1.0, 0.5]).is_err());
        let x = matrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert!(alcove_reduce(&x).is_err());
        let h = matrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert!(alcove_reduce(&h).is_err());
    }

    #[test]
    fn idempotent() {
        let t = [2.0, 1.5, -0.5, -3.0];
        let a = reduce(&t);
        assert_eq!(reduce(&a), a);
    }
}
