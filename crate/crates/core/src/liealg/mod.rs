//! The `sl(n, ℂ)` / `su(n)` backend: bracket, trace form, Cartan data,
//! diagram automorphisms, matrix exp/log, torus conjugation and alcove
//! reduction.

mod alcove;
mod eigen;
mod expm;

pub use alcove::{alcove_reduce, alcove_reduce_theta, AlcoveWitness, SectionElement};
pub use eigen::{conjugate_to_torus, eigenvalues, exp_log_defect, in_exp_image_sl2, mlog, TorusConjugation};
pub use expm::mexp;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matrix::{self, c64, CMat, C64};

/// Tolerance for `|tr X|` in backend membership checks.
pub const TRACE_TOL: f64 = 1e-12;

/// The A-series backend `sl(n)` with invariant form `λ·tr(XY)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LieBackend {
    n: usize,
    lambda: f64,
}

impl LieBackend {
    pub fn sl(n: usize) -> Self {
        assert!(n >= 2, "sl(n) needs n >= 2");
        LieBackend { n, lambda: 1.0 }
    }

    pub fn with_lambda(n: usize, lambda: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("sl({n}) is not supported")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Invalid(format!("form normalization must be > 0, got {lambda}")));
        }
        Ok(LieBackend { n, lambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn series(&self) -> &'static str {
        "A"
    }

    pub fn bracket(&self, x: &CMat, y: &CMat) -> CMat {
        matrix::commutator(x, y)
    }

    /// `λ·tr(XY)`.
    pub fn trace_form(&self, x: &CMat, y: &CMat) -> C64 {
        matrix::trace_of_product(x, y) * self.lambda
    }

    pub fn check_member(&self, x: &CMat) -> Result<()> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: x.nrows(),
            });
        }
        let t = matrix::trace(x).norm();
        if t > TRACE_TOL {
            return Err(Error::NotInAlgebra(format!("trace {t:e} exceeds {TRACE_TOL:e}")));
        }
        Ok(())
    }

    /// Diagonal Cartan subalgebra of `su(n)`.
    pub fn cartan(&self) -> CartanData {
        let basis = (0..self.n - 1)
            .map(|j| {
                let mut d = vec![c64(0.0, 0.0); self.n];
                d[j] = c64(0.0, 1.0);
                d[j + 1] = c64(0.0, -1.0);
                matrix::diag(&d)
            })
            .collect();
        CartanData { basis }
    }

    /// Elementary matrix `E_ij`.
    pub fn elementary(&self, i: usize, j: usize) -> CMat {
        let mut e = matrix::zeros(self.n);
        e[(i, j)] = c64(1.0, 0.0);
        e
    }
}

/// Basis `i(E_jj − E_{j+1,j+1})` of the diagonal torus in `su(n)`.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub basis: Vec<CMat>,
}

impl CartanData {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Simple roots on `i·diag(θ)`: `θ_j − θ_{j+1}`, plus the affine root `2π − (θ_1 − θ_n)`.
    pub fn affine_root_values(theta: &[f64]) -> Vec<f64> {
        let mut v: Vec<f64> = theta.windows(2).map(|w| w[0] - w[1]).collect();
        v.push(2.0 * PI - (theta[0] - theta[theta.len() - 1]));
        v
    }
}

/// A diagram automorphism of `sl(n)` of order 1, 2 or 3.
///
/// Order 2 is `X ↦ −Xᵀ`. Order 3 is only offered on `sl(3)`, as conjugation
/// by the cyclic permutation matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    order: u32,
    n: usize,
}

impl DiagramAutomorphism {
    pub fn new(order: u32, n: usize) -> Result<Self> {
        match (order, n) {
            (1, _) | (2, _) | (3, 3) if n >= 2 => Ok(DiagramAutomorphism { order, n }),
            _ => Err(Error::UnsupportedAutomorphism { order, n }),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ω = e^{2πi/m}`.
    pub fn omega(&self) -> C64 {
        C64::from_polar(1.0, 2.0 * PI / self.order as f64)
    }

    /// `ω^e`, reduced modulo the order before evaluation.
    pub fn omega_pow(&self, e: i64) -> C64 {
        let m = self.order as i64;
        match (m, e.rem_euclid(m)) {
            (_, 0) => c64(1.0, 0.0),
            (2, _) => c64(-1.0, 0.0),
            (_, r) => C64::from_polar(1.0, 2.0 * PI * r as f64 / m as f64),
        }
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        match self.order {
            1 => x.clone(),
            2 => -x.transpose(),
            _ => {
                // C X C⁻¹ with C e_j = e_{j+1}: entry (i, j) moves to (i+1, j+1).
                let n = self.n;
                CMat::from_fn(n, n, |i, j| x[((i + n - 1) % n, (j + n - 1) % n)])
            }
        }
    }

    /// `σ^j(X)`.
    pub fn apply_pow(&self, x: &CMat, j: u32) -> CMat {
        (0..j % self.order).fold(x.clone(), |acc, _| self.apply(&acc))
    }
}

/// Applies `σ` after checking it matches the matrix size.
pub fn sigma_apply(aut: &DiagramAutomorphism, x: &CMat) -> Result<CMat> {
    if x.nrows() != aut.n {
        return Err(Error::UnsupportedAutomorphism {
            order: aut.order,
            n: x.nrows(),
        });
    }
    Ok(aut.apply(x))
}
