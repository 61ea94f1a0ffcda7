//! Loops in `SL(n, ℂ)` with Laurent-polynomial entries, the pointwise
//! exponential, the logarithmic derivative `g⁻¹ dg/dz`, and transport of
//! `dg = g·α dz` around the unit circle.
//!
//! Transport is right-multiplicative throughout: on the arc `z = e^{it}` the
//! equation reads `dg/dt = g·α(e^{it})·i e^{it}`, and the monodromy is
//! `M = g(0)⁻¹ g(2π)`. This is the ordering under which `δ(g) = g⁻¹ dg` is
//! inverted by integration and `g·u = g u g⁻¹ − g′ g⁻¹` is covariant.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::laurent::{CircleSamples, LaurentMatrix};
use crate::liealg::{mexp, LieBackend};
use crate::loopalg::LoopAlgebraElement;
use crate::matrix::{self, c64, CMat, C64};

/// Coefficient tolerance for `det g ≡ 1`.
pub const DET_TOL: f64 = 1e-11;
/// `‖M − I‖` below this counts as trivial monodromy.
pub const INTEGRABILITY_TOL: f64 = 1e-8;
/// Step cap for the doubling loop in [`monodromy`].
pub const MAX_STEPS: usize = 1 << 20;
/// Convergence threshold between successive extrapolated transports.
pub const MONODROMY_TOL: f64 = 1e-10;

/// `det` of a square array of scalar Laurent polynomials, by cofactor expansion.
fn det_entries(entries: &[LaurentMatrix], d: usize) -> LaurentMatrix {
    match d {
        1 => entries[0].clone(),
        2 => entries[0]
            .lmul(&entries[3])
            .and_then(|a| a.sub(&entries[1].lmul(&entries[2])?))
            .expect("scalar entries"),
        _ => {
            let mut acc = LaurentMatrix::zero(1);
            for j in 0..d {
                if entries[j].is_zero() {
                    continue;
                }
                let minor = minor_entries(entries, d, 0, j);
                let term = entries[j]
                    .lmul(&det_entries(&minor, d - 1))
                    .expect("scalar entries");
                acc = if j % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                }
                .expect("scalar entries");
            }
            acc
        }
    }
}

fn minor_entries(entries: &[LaurentMatrix], d: usize, row: usize, col: usize) -> Vec<LaurentMatrix> {
    let mut out = Vec::with_capacity((d - 1) * (d - 1));
    for i in (0..d).filter(|&i| i != row) {
        for j in (0..d).filter(|&j| j != col) {
            out.push(entries[i * d + j].clone());
        }
    }
    out
}

fn split_entries(m: &LaurentMatrix) -> Vec<LaurentMatrix> {
    let d = m.dim();
    (0..d * d).map(|e| m.entry(e / d, e % d)).collect()
}

/// `det f(z)` as an exact scalar Laurent polynomial.
pub fn det_laurent(m: &LaurentMatrix) -> LaurentMatrix {
    det_entries(&split_entries(m), m.dim())
}

/// Adjugate `adj(f)(z)` with `f·adj(f) = det(f)·I`.
pub fn adjugate(m: &LaurentMatrix) -> LaurentMatrix {
    let d = m.dim();
    if d == 1 {
        return LaurentMatrix::identity(1);
    }
    let entries = split_entries(m);
    let mut adj = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            // adj[i][j] = (−1)^{i+j} det(minor removing row j, column i)
            let c = det_entries(&minor_entries(&entries, d, j, i), d - 1);
            adj.push(if (i + j) % 2 == 0 { c } else { c.neg() });
        }
    }
    LaurentMatrix::from_entries(d, &adj).expect("d² scalar entries")
}

/// A loop with `det ≡ 1`, certified on coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopGroupElement {
    mat: LaurentMatrix,
    det_certified: bool,
}

impl LoopGroupElement {
    pub fn new(mat: LaurentMatrix) -> Result<Self> {
        let dev = det_deviation(&mat);
        if dev > DET_TOL {
            return Err(Error::DetNotOne { deviation: dev });
        }
        Ok(LoopGroupElement {
            mat,
            det_certified: true,
        })
    }

    pub fn identity(d: usize) -> Self {
        LoopGroupElement {
            mat: LaurentMatrix::identity(d),
            det_certified: true,
        }
    }

    pub fn constant(g: CMat) -> Result<Self> {
        Self::new(LaurentMatrix::constant(g))
    }

    pub fn mat(&self) -> &LaurentMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn det_certified(&self) -> bool {
        self.det_certified
    }

    pub fn evaluate(&self, z: C64) -> Result<CMat> {
        self.mat.evaluate(z)
    }

    /// Pointwise product, re-certified.
    pub fn gmul(&self, other: &Self) -> Result<Self> {
        if !self.det_certified || !other.det_certified {
            return Err(Error::NotCertified);
        }
        Self::new(self.mat.lmul(&other.mat)?)
    }

    /// Inverse through the adjugate.
    pub fn ginv(&self) -> Result<Self> {
        if !self.det_certified {
            return Err(Error::NotCertified);
        }
        Ok(LoopGroupElement {
            mat: adjugate(&self.mat),
            det_certified: true,
        })
    }

    /// `δ(g) = g⁻¹ g′`, exact on coefficients.
    pub fn log_derivative(&self) -> Result<LoopAlgebraElement> {
        let inv = self.ginv()?;
        let delta = inv.mat.lmul(&self.mat.lderiv())?;
        let d = self.dim();
        let tr = delta.trace();
        let dev = tr.max_coeff_abs();
        if dev > 1e-9 * (1.0 + delta.max_coeff_abs()) {
            return Err(Error::InvariantViolated { deviation: dev });
        }
        // Strip the roundoff-level trace so the result is an exact sl(n) element.
        let correction = LaurentMatrix::from_coeffs(
            d,
            tr.k_min(),
            tr.coeffs()
                .iter()
                .map(|t| matrix::identity(d) * (t[(0, 0)] / d as f64))
                .collect(),
        )?;
        LoopAlgebraElement::new(delta.sub(&correction)?, LieBackend::sl(d))
    }
}

/// Largest coefficient of `det(m) − 1`.
pub fn det_deviation(m: &LaurentMatrix) -> f64 {
    det_laurent(m).max_coeff_diff(&LaurentMatrix::identity(1))
}

/// Output of [`gexp`].
#[derive(Clone, Debug)]
pub struct GexpResult {
    pub value: LaurentMatrix,
    pub fit_residual: f64,
    /// Fit residual plus the misfit at points between the fitted samples.
    pub error_estimate: f64,
}

/// Options for the pointwise exponential.
#[derive(Clone, Copy, Debug)]
pub struct GexpOptions {
    pub window: (i32, i32),
    /// Circles `|z| = e^{±radius_log}`.
    pub radius_log: f64,
    pub samples: usize,
    pub tolerance: f64,
}

impl Default for GexpOptions {
    fn default() -> Self {
        GexpOptions {
            window: (-8, 8),
            radius_log: 1.0,
            samples: 64,
            tolerance: 1e-9,
        }
    }
}

/// `z ↦ exp(f(z))`, refit into a Laurent window.
pub fn gexp(f: &LaurentMatrix, opts: &GexpOptions) -> Result<GexpResult> {
    let width = (opts.window.1 - opts.window.0 + 1) as usize;
    let samples = opts.samples.max(2 * width);
    let r = opts.radius_log.exp();
    let point = |z: C64| mexp(&f.evaluate(z).expect("nonzero radius"));
    let outer = CircleSamples::from_fn(r, samples, point);
    let inner = CircleSamples::from_fn(1.0 / r, samples, point);
    let fit = LaurentMatrix::fit_from_samples(&outer, &inner, opts.window)?;
    let mut mid: f64 = 0.0;
    let mut buf = CMat::zeros(f.dim(), f.dim());
    for radius in [r, 1.0 / r] {
        for j in 0..samples {
            let z = C64::from_polar(radius, TAU * (j as f64 + 0.5) / samples as f64);
            fit.value.evaluate_into(z, buf.as_mut_slice());
            mid = mid.max(matrix::frobenius(&(&buf - point(z))));
        }
    }
    let error_estimate = fit.residual + mid;
    if error_estimate > opts.tolerance {
        return Err(Error::Truncation {
            residual: error_estimate,
            tolerance: opts.tolerance,
        });
    }
    Ok(GexpResult {
        value: fit.value,
        fit_residual: fit.residual,
        error_estimate,
    })
}

/// Transport of `dg = g·α dz` once around `|z| = 1`.
#[derive(Clone, Debug)]
pub struct MonodromyResult {
    pub transport: CMat,
    pub residue_coeff: CMat,
    pub integrable: bool,
    pub step_count: usize,
    pub error_estimate: f64,
}

/// The circle-parameter generator `α(e^{it})·i e^{it}`.
fn arc_generator(alpha: &LaurentMatrix) -> impl Fn(f64) -> CMat + '_ {
    move |t: f64| {
        let z = C64::from_polar(1.0, t);
        alpha.evaluate(z).expect("unit circle") * (z * c64(0.0, 1.0))
    }
}

/// Ordered product `Π_j exp(h A(t_{j+1/2}))`, left to right in increasing `t`.
fn midpoint_product(gen: &dyn Fn(f64) -> CMat, d: usize, steps: usize) -> CMat {
    let h = TAU / steps as f64;
    let mut m = CMat::identity(d, d);
    for j in 0..steps {
        let a = gen((j as f64 + 0.5) * h) * c64(h, 0.0);
        m *= mexp(&a);
    }
    m
}

/// Monodromy by midpoint exponential products with Richardson extrapolation,
/// doubling the step count until two extrapolants agree.
pub fn monodromy(alpha: &LaurentMatrix, steps: usize) -> Result<MonodromyResult> {
    if steps < 256 {
        return Err(Error::Invalid(format!("steps must be >= 256, got {steps}")));
    }
    let d = alpha.dim();
    let gen = arc_generator(alpha);
    let mut n = steps;
    let mut coarse = midpoint_product(&gen, d, n);
    let mut fine = midpoint_product(&gen, d, 2 * n);
    let extrapolate = |c: &CMat, f: &CMat| (f * c64(4.0, 0.0) - c) / c64(3.0, 0.0);
    let mut prev = extrapolate(&coarse, &fine);
    loop {
        n *= 2;
        if 2 * n > MAX_STEPS {
            let next = extrapolate(&coarse, &fine);
            return Err(Error::NonConvergence {
                steps: 2 * n,
                last: next.clone(),
                previous: prev.clone(),
                change: matrix::max_abs(&(&next - &prev)),
            });
        }
        coarse = fine;
        fine = midpoint_product(&gen, d, 2 * n);
        let next = extrapolate(&coarse, &fine);
        let change = matrix::spectral_norm(&(&next - &prev));
        if change < MONODROMY_TOL * matrix::spectral_norm(&next).max(1.0) {
            let id = CMat::identity(d, d);
            let integrable = matrix::spectral_norm(&(&next - &id)) <= INTEGRABILITY_TOL;
            return Ok(MonodromyResult {
                transport: next,
                residue_coeff: alpha.residue(),
                integrable,
                step_count: 2 * n,
                error_estimate: change,
            });
        }
        prev = next;
    }
}

/// One fourth-order Magnus step for `Y′ = Y A(t)` on `[t, t + h]`.
pub(crate) fn magnus4_right(gen: &dyn Fn(f64) -> CMat, y: &CMat, t: f64, h: f64) -> CMat {
    const C: f64 = 0.288_675_134_594_812_9; // √3/6
    let a1 = gen(t + h * (0.5 - C));
    let a2 = gen(t + h * (0.5 + C));
    let omega = (&a1 + &a2) * c64(0.5 * h, 0.0)
        + matrix::commutator(&a1, &a2) * c64(h * h * C * 0.5, 0.0);
    y * mexp(&omega)
}

/// Values of `Y` at `t_j = 2πj/N`, `j = 0..=N`, with `sub` Magnus steps per interval.
pub(crate) fn magnus_samples(
    gen: &dyn Fn(f64) -> CMat,
    y0: &CMat,
    n: usize,
    sub: usize,
) -> Vec<CMat> {
    let h = TAU / (n * sub) as f64;
    let mut out = Vec::with_capacity(n + 1);
    let mut y = y0.clone();
    out.push(y.clone());
    for j in 0..n {
        for s in 0..sub {
            let t = (j * sub + s) as f64 * h;
            y = magnus4_right(gen, &y, t, h);
        }
        out.push(y.clone());
    }
    out
}

/// A solution of `g⁻¹ dg = α dz`, sampled at `e^{2πij/N}`.
#[derive(Clone, Debug)]
pub struct IntegratedLoop {
    pub samples: CircleSamples,
    /// `‖g(2π) − g(0)‖`.
    pub closure_defect: f64,
    pub monodromy: MonodromyResult,
}

impl IntegratedLoop {
    /// Refits the samples into a Laurent window on the unit circle.
    pub fn refit(&self, window: (i32, i32)) -> Result<crate::laurent::Fit> {
        LaurentMatrix::fit_from_samples(&self.samples, &self.samples, window)
    }
}

/// Integrates `α` from `g(1) = g0`, or reports the obstruction.
pub fn integrate_form(alpha: &LaurentMatrix, g0: &CMat, steps: usize) -> Result<IntegratedLoop> {
    matrix::inverse(g0)?;
    let mono = monodromy(alpha, steps.max(256))?;
    if !mono.integrable {
        let id = CMat::identity(alpha.dim(), alpha.dim());
        return Err(Error::MonodromyObstruction {
            defect: matrix::spectral_norm(&(&mono.transport - id)),
            transport: mono.transport,
        });
    }
    let gen = arc_generator(alpha);
    let n = steps.max(1);
    let mut sub = 1;
    let mut coarse = magnus_samples(&gen, g0, n, sub);
    let extrapolated = loop {
        sub *= 2;
        let fine = magnus_samples(&gen, g0, n, sub);
        let rich: Vec<CMat> = fine
            .iter()
            .zip(&coarse)
            .map(|(f, c)| (f * c64(16.0, 0.0) - c) / c64(15.0, 0.0))
            .collect();
        let change = fine
            .iter()
            .zip(&coarse)
            .map(|(f, c)| matrix::max_diff(f, c))
            .fold(0.0, f64::max);
        if change < 1e-9 || n * sub >= MAX_STEPS {
            break rich;
        }
        coarse = fine;
    };
    let closure_defect = matrix::spectral_norm(&(&extrapolated[n] - &extrapolated[0]));
    let mut values = extrapolated;
    values.pop();
    Ok(IntegratedLoop {
        samples: CircleSamples { radius: 1.0, values },
        closure_defect,
        monodromy: mono,
    })
}
