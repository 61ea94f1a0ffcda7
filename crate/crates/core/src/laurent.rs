//! Matrix-valued Laurent polynomials on the punctured plane.
//!
//! A [`LaurentMatrix`] stores the coefficients `a_k` of `f(z) = Σ a_k z^k` for
//! `k` in a contiguous window. Ring operations never truncate: windows grow as
//! needed so that algebraic identities hold on coefficients. Truncation only
//! happens through [`LaurentMatrix::truncate`] and the sampling refit.
//!
//! The graded norms live on the closed annuli `A_n = {e^{-n} <= |z| <= e^n}`.
//! By the maximum principle the sup norm over `A_n` is attained on the two
//! boundary circles, so only those are sampled.

use std::f64::consts::{E, PI};
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::matrix::{self, c64, CMat, C64};

/// How the derivation `d` acts on loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// `[d, f] = z f'(z)`: coefficients `k a_k`.
    #[default]
    Standard,
    /// `[d, f] = i z f'(z)`: coefficients `i k a_k`, the circle-parameter derivative.
    PaperLiteral,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Standard => "standard",
            Convention::PaperLiteral => "paper_literal",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Convention::Standard),
            "paper_literal" => Ok(Convention::PaperLiteral),
            other => Err(Error::Invalid(format!("unknown convention {other:?}"))),
        }
    }

    /// Multiplier applied to `k a_k`.
    fn factor(self) -> C64 {
        match self {
            Convention::Standard => c64(1.0, 0.0),
            Convention::PaperLiteral => c64(0.0, 1.0),
        }
    }
}

/// Annulus index and sampling density for the graded sup norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradingConfig {
    pub n: u32,
    pub boundary_samples: usize,
}

impl GradingConfig {
    pub const DEFAULT_SAMPLES: usize = 1024;
    pub const MIN_SAMPLES: usize = 64;

    pub fn new(n: u32) -> Self {
        GradingConfig {
            n,
            boundary_samples: Self::DEFAULT_SAMPLES,
        }
    }

    pub fn with_samples(n: u32, boundary_samples: usize) -> Result<Self> {
        if boundary_samples < Self::MIN_SAMPLES {
            return Err(Error::Invalid(format!(
                "boundary_samples must be >= {}, got {boundary_samples}",
                Self::MIN_SAMPLES
            )));
        }
        Ok(GradingConfig { n, boundary_samples })
    }

    /// Radii of `∂A_n`; a single circle when `n = 0`.
    pub fn radii(&self) -> Vec<f64> {
        if self.n == 0 {
            vec![1.0]
        } else {
            let r = (self.n as f64).exp();
            vec![r, 1.0 / r]
        }
    }
}

impl Default for GradingConfig {
    fn default() -> Self {
        GradingConfig::new(0)
    }
}

/// Sampled sup norm: `lower` is the maximum over the samples, `upper` adds the
/// Lipschitz slack between neighbouring samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupNorm {
    pub lower: f64,
    pub upper: f64,
}

impl SupNorm {
    pub fn value(&self) -> f64 {
        self.lower
    }
}

/// Sup and boundary `L¹` norms read off one pass over `∂A_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryNorms {
    pub sup: SupNorm,
    /// `max` over the boundary circles of `(1/2π) ∫ |f(r e^{iθ})| dθ`.
    pub l1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffFlavor {
    L1,
    LInf,
}

/// Rigorous enclosure of the Fréchet distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricInterval {
    pub lower: f64,
    pub upper: f64,
}

/// Equispaced samples `f(r e^{2πij/N})`, `j = 0..N`, starting at angle 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleSamples {
    pub radius: f64,
    pub values: Vec<CMat>,
}

impl CircleSamples {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, j: usize) -> C64 {
        C64::from_polar(self.radius, 2.0 * PI * j as f64 / self.len() as f64)
    }

    /// Samples any matrix-valued function on the circle of the given radius.
    pub fn from_fn(radius: f64, count: usize, f: impl Fn(C64) -> CMat) -> Self {
        let values = (0..count)
            .map(|j| f(C64::from_polar(radius, 2.0 * PI * j as f64 / count as f64)))
            .collect();
        CircleSamples { radius, values }
    }

    /// Normalized discrete Fourier coefficients `V_k = (1/N) Σ_j v_j e^{-2πijk/N}`,
    /// returned as one matrix per frequency `0..N`.
    pub fn fourier(&self) -> Vec<CMat> {
        let n = self.len();
        let d = self.values[0].nrows();
        let fft = plan(n, false);
        let mut out = vec![CMat::zeros(d, d); n];
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for e in 0..d * d {
            for (j, v) in self.values.iter().enumerate() {
                buf[j] = v.as_slice()[e];
            }
            fft.process(&mut buf);
            for (k, o) in out.iter_mut().enumerate() {
                o.as_mut_slice()[e] = buf[k] / n as f64;
            }
        }
        out
    }

    /// Derivative in the angle, `d/dθ`, by spectral differentiation. Exact for
    /// trigonometric polynomials below the Nyquist frequency.
    pub fn angular_derivative(&self) -> Vec<CMat> {
        let n = self.len();
        let d = self.values[0].nrows();
        let fwd = plan(n, false);
        let inv = plan(n, true);
        let mut out = vec![CMat::zeros(d, d); n];
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for e in 0..d * d {
            for (j, v) in self.values.iter().enumerate() {
                buf[j] = v.as_slice()[e];
            }
            fwd.process(&mut buf);
            for (m, b) in buf.iter_mut().enumerate() {
                let k = if 2 * m < n {
                    m as f64
                } else if 2 * m == n {
                    0.0
                } else {
                    m as f64 - n as f64
                };
                *b *= c64(0.0, k / n as f64);
            }
            inv.process(&mut buf);
            for (j, o) in out.iter_mut().enumerate() {
                o.as_mut_slice()[e] = buf[j];
            }
        }
        out
    }
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// Result of [`LaurentMatrix::fit_from_samples`].
#[derive(Clone, Debug)]
pub struct Fit {
    pub value: LaurentMatrix,
    /// Largest Frobenius misfit over all sample points.
    pub residual: f64,
}

impl Fit {
    pub fn require(self, tolerance: f64) -> Result<LaurentMatrix> {
        if self.residual > tolerance {
            Err(Error::FitResidual {
                residual: self.residual,
                tolerance,
            })
        } else {
            Ok(self.value)
        }
    }
}

/// `f(z) = Σ_{k = k_min}^{k_max} a_k z^k` with `d x d` complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix {
    dim: usize,
    k_min: i32,
    coeffs: Vec<CMat>,
}

impl LaurentMatrix {
    pub fn zero(dim: usize) -> Self {
        LaurentMatrix {
            dim,
            k_min: 0,
            coeffs: vec![CMat::zeros(dim, dim)],
        }
    }

    pub fn constant(a: CMat) -> Self {
        Self::monomial(a, 0)
    }

    pub fn identity(dim: usize) -> Self {
        Self::constant(matrix::identity(dim))
    }

    /// `a z^k`.
    pub fn monomial(a: CMat, k: i32) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "coefficients must be square");
        let dim = a.nrows();
        LaurentMatrix {
            dim,
            k_min: k,
            coeffs: vec![a],
        }
        .canonical()
    }

    /// Scalar (`1 x 1`) Laurent polynomial from `(degree, coefficient)` pairs.
    pub fn scalar(terms: &[(i32, C64)]) -> Self {
        terms.iter().fold(Self::zero(1), |acc, &(k, c)| {
            acc.add(&Self::monomial(CMat::from_element(1, 1, c), k))
                .expect("same dimension")
        })
    }

    pub fn from_coeffs(dim: usize, k_min: i32, coeffs: Vec<CMat>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if coeffs.is_empty() {
            return Err(Error::Invalid("empty coefficient window".into()));
        }
        for a in &coeffs {
            if a.nrows() != dim || a.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: a.nrows().max(a.ncols()),
                });
            }
        }
        Ok(LaurentMatrix { dim, k_min, coeffs }.canonical())
    }

    /// Trims exactly-zero end coefficients; the zero element becomes `k_min = k_max = 0`.
    fn canonical(mut self) -> Self {
        let first = self.coeffs.iter().position(|a| !matrix::is_zero(a));
        match first {
            None => Self::zero(self.dim),
            Some(lo) => {
                let hi = self.coeffs.iter().rposition(|a| !matrix::is_zero(a)).unwrap();
                self.coeffs.truncate(hi + 1);
                self.coeffs.drain(..lo);
                self.k_min += lo as i32;
                self
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.k_min + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// `a_k`, zero outside the window.
    pub fn coeff(&self, k: i32) -> CMat {
        self.coeff_ref(k)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.dim, self.dim))
    }

    pub fn coeff_ref(&self, k: i32) -> Option<&CMat> {
        if k < self.k_min || k > self.k_max() {
            None
        } else {
            Some(&self.coeffs[(k - self.k_min) as usize])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && matrix::is_zero(&self.coeffs[0])
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &CMat)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, a)| (self.k_min + i as i32, a))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        } else {
            Ok(())
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&CMat, &CMat) -> CMat) -> Result<Self> {
        self.check_dim(other)?;
        let lo = self.k_min.min(other.k_min);
        let hi = self.k_max().max(other.k_max());
        let zero = CMat::zeros(self.dim, self.dim);
        let coeffs = (lo..=hi)
            .map(|k| {
                op(
                    self.coeff_ref(k).unwrap_or(&zero),
                    other.coeff_ref(k).unwrap_or(&zero),
                )
            })
            .collect();
        Ok(LaurentMatrix {
            dim: self.dim,
            k_min: lo,
            coeffs,
        }
        .canonical())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|_, a| -a)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|_, a| a * s)
    }

    /// Applies `op(k, a_k)` to every coefficient.
    pub fn map(&self, op: impl Fn(i32, &CMat) -> CMat) -> Self {
        let coeffs: Vec<CMat> = self.terms().map(|(k, a)| op(k, a)).collect();
        let dim = coeffs[0].nrows();
        LaurentMatrix {
            dim,
            k_min: self.k_min,
            coeffs,
        }
        .canonical()
    }

    /// Pointwise product, by coefficient convolution.
    pub fn lmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![CMat::zeros(self.dim, self.dim); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if matrix::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(LaurentMatrix {
            dim: self.dim,
            k_min: self.k_min + other.k_min,
            coeffs,
        }
        .canonical())
    }

    /// `c · f(z)` for a constant matrix `c`.
    pub fn left_mul_const(&self, c: &CMat) -> Self {
        self.map(|_, a| c * a)
    }

    /// `f(z) · c` for a constant matrix `c`.
    pub fn right_mul_const(&self, c: &CMat) -> Self {
        self.map(|_, a| a * c)
    }

    /// `z^s f(z)`.
    pub fn shift_degree(&self, s: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentMatrix {
            dim: self.dim,
            k_min: self.k_min + s,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `df/dz`: `a_k z^k ↦ k a_k z^{k-1}`.
    pub fn lderiv(&self) -> Self {
        self.map(|k, a| a * c64(k as f64, 0.0)).shift_degree(-1)
    }

    /// The derivation `d` acting on a loop under the given convention.
    pub fn d_action(&self, convention: Convention) -> Self {
        let f = convention.factor();
        self.map(|k, a| a * (f * k as f64))
    }

    /// `a_{-1}`.
    pub fn residue(&self) -> CMat {
        self.coeff(-1)
    }

    /// `f(zw)`: `a_k ↦ a_k w^k`.
    pub fn shift_arg(&self, w: C64) -> Result<Self> {
        if w == C64::new(0.0, 0.0) {
            return Err(Error::ZeroArgument);
        }
        Ok(self.map(|k, a| a * w.powi(k)))
    }

    pub fn transpose(&self) -> Self {
        self.map(|_, a| a.transpose())
    }

    /// Coefficientwise `a_k ↦ op(a_k)` followed by the reflection `k ↦ -k`.
    pub fn reflect_with(&self, op: impl Fn(&CMat) -> CMat) -> Self {
        let mut coeffs: Vec<CMat> = self.coeffs.iter().map(op).collect();
        coeffs.reverse();
        LaurentMatrix {
            dim: self.dim,
            k_min: -self.k_max(),
            coeffs,
        }
        .canonical()
    }

    /// Keeps only degrees in `[k_min, k_max]`.
    pub fn truncate(&self, k_min: i32, k_max: i32) -> Self {
        let zero = CMat::zeros(self.dim, self.dim);
        if k_min > k_max {
            return Self::zero(self.dim);
        }
        let coeffs = (k_min..=k_max)
            .map(|k| self.coeff_ref(k).unwrap_or(&zero).clone())
            .collect();
        LaurentMatrix {
            dim: self.dim,
            k_min,
            coeffs,
        }
        .canonical()
    }

    /// Zeroes coefficients whose max-abs entry is below `tol`.
    pub fn chop(&self, tol: f64) -> Self {
        self.map(|_, a| {
            if matrix::max_abs(a) < tol {
                CMat::zeros(a.nrows(), a.ncols())
            } else {
                a.clone()
            }
        })
    }

    /// Scalar subspace `Hol^{k,l}`: keeps degrees `j ≡ l (mod k)`, the part with
    /// `f(ωz) = ω^l f(z)` for `ω = e^{2πi/k}`.
    pub fn hol_kl_project(&self, k: u32, l: i32) -> Self {
        let k = k as i32;
        self.map(|j, a| {
            if (j - l).rem_euclid(k) == 0 {
                a.clone()
            } else {
                CMat::zeros(a.nrows(), a.ncols())
            }
        })
    }

    /// Entry `(i, j)` as a scalar Laurent polynomial.
    pub fn entry(&self, i: usize, j: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| CMat::from_element(1, 1, a[(i, j)]))
            .collect();
        LaurentMatrix {
            dim: 1,
            k_min: self.k_min,
            coeffs,
        }
        .canonical()
    }

    /// Assembles a `d x d` loop from scalar entries (row-major).
    pub fn from_entries(dim: usize, entries: &[LaurentMatrix]) -> Result<Self> {
        if entries.len() != dim * dim || entries.iter().any(|e| e.dim != 1) {
            return Err(Error::Invalid("expected d² scalar entries".into()));
        }
        let lo = entries.iter().map(|e| e.k_min).min().unwrap();
        let hi = entries.iter().map(|e| e.k_max()).max().unwrap();
        let coeffs = (lo..=hi)
            .map(|k| {
                CMat::from_fn(dim, dim, |i, j| {
                    entries[i * dim + j]
                        .coeff_ref(k)
                        .map(|a| a[(0, 0)])
                        .unwrap_or_default()
                })
            })
            .collect();
        Ok(LaurentMatrix {
            dim,
            k_min: lo,
            coeffs,
        }
        .canonical())
    }

    /// Pointwise trace, a scalar Laurent polynomial.
    pub fn trace(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| CMat::from_element(1, 1, matrix::trace(a)))
            .collect();
        LaurentMatrix {
            dim: 1,
            k_min: self.k_min,
            coeffs,
        }
        .canonical()
    }

    /// Largest entry-wise coefficient difference.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        match self.sub(other) {
            Ok(d) => d.max_coeff_abs(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(matrix::max_abs).fold(0.0, f64::max)
    }

    /// Evaluates `f(z)` into a column-major buffer of length `d²`, Horner in
    /// `z` for the non-negative part and in `1/z` for the negative part.
    pub fn evaluate_into(&self, z: C64, out: &mut [C64]) {
        let d2 = self.dim * self.dim;
        debug_assert_eq!(out.len(), d2);
        let k_min = self.k_min;
        let k_max = self.k_max();
        let w = z.inv();
        for (e, o) in out.iter_mut().enumerate() {
            let mut total = C64::new(0.0, 0.0);
            if k_max >= 0 {
                let lo = k_min.max(0);
                let mut acc = C64::new(0.0, 0.0);
                for k in (lo..=k_max).rev() {
                    acc = acc * z + self.coeffs[(k - k_min) as usize].as_slice()[e];
                }
                total += if lo > 0 { acc * z.powi(lo) } else { acc };
            }
            if k_min < 0 {
                let hi = k_max.min(-1);
                let mut acc = C64::new(0.0, 0.0);
                for j in (-hi..=-k_min).rev() {
                    acc = acc * w + self.coeffs[(-j - k_min) as usize].as_slice()[e];
                }
                total += acc * w.powi(-hi);
            }
            *o = total;
        }
        let _ = d2;
    }

    pub fn evaluate(&self, z: C64) -> Result<CMat> {
        if z == C64::new(0.0, 0.0) {
            return Err(Error::ZeroArgument);
        }
        let mut out = CMat::zeros(self.dim, self.dim);
        self.evaluate_into(z, out.as_mut_slice());
        Ok(out)
    }

    /// Samples on the circle of radius `r`.
    pub fn sample_circle(&self, radius: f64, count: usize) -> CircleSamples {
        CircleSamples::from_fn(radius, count, |z| {
            self.evaluate(z).expect("radius is positive")
        })
    }

    /// `Σ |k| ‖a_k‖ r^{k-1}`, a Lipschitz constant of `z ↦ ‖f(z)‖` on `|z| = r`.
    fn lipschitz_on_circle(&self, r: f64) -> f64 {
        self.terms()
            .filter(|(k, _)| *k != 0)
            .map(|(k, a)| (k.abs() as f64) * matrix::spectral_norm(a) * r.powi(k - 1))
            .sum()
    }

    /// Sup and boundary `L¹` norms over `∂A_n`.
    pub fn boundary_norms(&self, cfg: &GradingConfig) -> BoundaryNorms {
        let n = cfg.boundary_samples;
        let mut buf = vec![C64::new(0.0, 0.0); self.dim * self.dim];
        let mut sup_lower: f64 = 0.0;
        let mut sup_upper: f64 = 0.0;
        let mut l1: f64 = 0.0;
        for r in cfg.radii() {
            let mut max: f64 = 0.0;
            let mut sum = 0.0;
            for j in 0..n {
                let z = C64::from_polar(r, 2.0 * PI * j as f64 / n as f64);
                self.evaluate_into(z, &mut buf);
                let s = matrix::spectral_norm_slice(self.dim, &buf);
                max = max.max(s);
                sum += s;
            }
            let slack = self.lipschitz_on_circle(r) * PI * r / n as f64;
            sup_lower = sup_lower.max(max);
            sup_upper = sup_upper.max(max + slack);
            l1 = l1.max(sum / n as f64);
        }
        BoundaryNorms {
            sup: SupNorm {
                lower: sup_lower,
                upper: sup_upper,
            },
            l1,
        }
    }

    /// `‖f‖_n = sup_{A_n} ‖f(z)‖₂`, estimated on the boundary circles.
    pub fn norm_sup(&self, cfg: &GradingConfig) -> SupNorm {
        self.boundary_norms(cfg).sup
    }

    /// Coefficient gradings on the paired sequence `b_k = max(‖a_k‖, ‖a_{-k}‖)`, `k >= 0`.
    pub fn norm_coeff(&self, n: u32, flavor: CoeffFlavor) -> f64 {
        let kmax = self.k_max().abs().max(self.k_min.abs());
        let w = n as f64;
        let terms = (0..=kmax).map(|k| {
            let b = self
                .coeff_ref(k)
                .map(matrix::spectral_norm)
                .unwrap_or(0.0)
                .max(self.coeff_ref(-k).map(matrix::spectral_norm).unwrap_or(0.0));
            (w * k as f64).exp() * b
        });
        match flavor {
            CoeffFlavor::L1 => terms.sum(),
            CoeffFlavor::LInf => terms.fold(0.0, f64::max),
        }
    }

    /// Fits a Laurent polynomial on the window `[k_min, k_max]` to samples on
    /// two circles, by least squares over both sample sets.
    ///
    /// On each circle the discrete Fourier coefficient `V_k` estimates
    /// `a_k r^k`; with `N_c` samples per circle the least-squares solution is
    /// `a_k = Σ_c N_c r_c^k V_{c,k} / Σ_c N_c r_c^{2k}`, which weights each
    /// degree towards the circle where it is largest.
    pub fn fit_from_samples(
        outer: &CircleSamples,
        inner: &CircleSamples,
        window: (i32, i32),
    ) -> Result<Fit> {
        let (k_min, k_max) = window;
        if k_min > k_max {
            return Err(Error::Invalid("empty window".into()));
        }
        let width = (k_max - k_min + 1) as usize;
        let needed = 2 * width;
        for s in [outer, inner] {
            if s.len() < needed {
                return Err(Error::Underdetermined {
                    samples: s.len(),
                    needed,
                });
            }
        }
        let dim = outer.values[0].nrows();
        if inner.values[0].nrows() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: inner.values[0].nrows(),
            });
        }
        let circles = [(outer, outer.fourier()), (inner, inner.fourier())];
        let mut coeffs = Vec::with_capacity(width);
        for k in k_min..=k_max {
            let mut num = CMat::zeros(dim, dim);
            let mut den = 0.0;
            for (s, v) in &circles {
                let n = s.len();
                let rk = s.radius.powi(k);
                let idx = (k.rem_euclid(n as i32)) as usize;
                num += &v[idx] * c64(n as f64 * rk, 0.0);
                den += n as f64 * rk * rk;
            }
            coeffs.push(num / c64(den, 0.0));
        }
        let value = LaurentMatrix {
            dim,
            k_min,
            coeffs,
        }
        .canonical();
        let mut residual: f64 = 0.0;
        let mut buf = CMat::zeros(dim, dim);
        for s in [outer, inner] {
            for (j, v) in s.values.iter().enumerate() {
                value.evaluate_into(s.point(j), buf.as_mut_slice());
                residual = residual.max(matrix::frobenius(&(&buf - v)));
            }
        }
        Ok(Fit { value, residual })
    }
}

/// `‖f‖_{L¹ⁿ}` by trapezoidal quadrature on `∂A_n`.
pub fn norm_boundary_l1(f: &LaurentMatrix, cfg: &GradingConfig) -> f64 {
    f.boundary_norms(cfg).l1
}

/// `d(f, g) = Σ_n 2^{-n} ‖f-g‖_n / (1 + ‖f-g‖_n)`, summed over `n < n_terms`
/// and enclosed with the tail bound `2^{-(n_terms-1)}`.
pub fn frechet_metric(
    f: &LaurentMatrix,
    g: &LaurentMatrix,
    n_terms: u32,
    boundary_samples: usize,
) -> Result<MetricInterval> {
    if n_terms == 0 {
        return Err(Error::Invalid("n_terms must be positive".into()));
    }
    let h = f.sub(g)?;
    let mut lower = 0.0;
    let mut upper = 0.0;
    for n in 0..n_terms {
        let cfg = GradingConfig::with_samples(n, boundary_samples)?;
        let s = h.norm_sup(&cfg);
        let w = 0.5f64.powi(n as i32);
        lower += w * s.lower / (1.0 + s.lower);
        upper += w * s.upper / (1.0 + s.upper);
    }
    let tail = 0.5f64.powi(n_terms as i32 - 1);
    Ok(MetricInterval {
        lower,
        upper: (upper + tail).min(2.0),
    })
}

/// The tame constant of `d/dz` from `A_{n+1}` to `A_n`: `e^{n+1}/(e-1)`.
pub fn derivative_tame_constant(n: u32) -> f64 {
    E.powi(n as i32 + 1) / (E - 1.0)
}
