//! The loop algebra: `sl(n)`-valued Laurent polynomials with the pointwise
//! bracket, optional twist by a diagram automorphism, and the compact real
//! form `a_k = −ā_{−k}ᵀ`.

use crate::error::{Error, Result};
use crate::laurent::{self, GradingConfig, LaurentMatrix};
use crate::liealg::{DiagramAutomorphism, LieBackend, TRACE_TOL};
use crate::matrix::{self, c64, CMat, C64};

/// Tolerance for the twist and reality invariants.
pub const FLAG_TOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq)]
pub struct LoopAlgebraElement {
    value: LaurentMatrix,
    backend: LieBackend,
    twist: Option<DiagramAutomorphism>,
    real_form: bool,
}

/// One row of a tame-estimate audit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TameRow {
    pub n: u32,
    pub lhs: f64,
    pub bound: f64,
    pub ratio: f64,
}

impl TameRow {
    pub fn new(n: u32, lhs: f64, bound: f64) -> Self {
        let ratio = if lhs == 0.0 { 0.0 } else { lhs / bound };
        TameRow { n, lhs, bound, ratio }
    }

    pub fn violates(&self, slack: f64) -> bool {
        self.ratio > 1.0 + slack || self.ratio.is_nan()
    }
}

impl LoopAlgebraElement {
    /// Untwisted, non-real element; checks that every coefficient is traceless.
    pub fn new(value: LaurentMatrix, backend: LieBackend) -> Result<Self> {
        if value.dim() != backend.n() {
            return Err(Error::DimensionMismatch {
                left: backend.n(),
                right: value.dim(),
            });
        }
        for (k, a) in value.terms() {
            let t = matrix::trace(a).norm();
            if t > TRACE_TOL * (1.0 + matrix::max_abs(a)) {
                return Err(Error::NotInAlgebra(format!(
                    "coefficient of z^{k} has trace {t:e}"
                )));
            }
        }
        Ok(LoopAlgebraElement {
            value,
            backend,
            twist: None,
            real_form: false,
        })
    }

    pub fn zero(backend: LieBackend) -> Self {
        LoopAlgebraElement {
            value: LaurentMatrix::zero(backend.n()),
            backend,
            twist: None,
            real_form: false,
        }
    }

    pub fn monomial(a: CMat, k: i32, backend: LieBackend) -> Result<Self> {
        Self::new(LaurentMatrix::monomial(a, k), backend)
    }

    pub fn constant(a: CMat, backend: LieBackend) -> Result<Self> {
        Self::monomial(a, 0, backend)
    }

    /// Sets the twist flag after checking `σ(a_k) = ω^k a_k`.
    pub fn with_twist(mut self, aut: DiagramAutomorphism) -> Result<Self> {
        self.check_aut(&aut)?;
        let dev = twist_defect(&self.value, &aut);
        if dev > FLAG_TOL {
            return Err(Error::InvariantViolated { deviation: dev });
        }
        self.twist = Some(aut);
        Ok(self)
    }

    /// Sets the real-form flag after checking `a_k = −ā_{−k}ᵀ`.
    pub fn with_real_form(mut self) -> Result<Self> {
        let dev = reality_defect(&self.value);
        if dev > FLAG_TOL {
            return Err(Error::InvariantViolated { deviation: dev });
        }
        self.real_form = true;
        Ok(self)
    }

    /// Reassembles from parts, validating every declared flag.
    pub fn from_parts(
        value: LaurentMatrix,
        backend: LieBackend,
        twist: Option<DiagramAutomorphism>,
        real_form: bool,
    ) -> Result<Self> {
        let mut out = Self::new(value, backend)?;
        if let Some(aut) = twist {
            out = out.with_twist(aut)?;
        }
        if real_form {
            out = out.with_real_form()?;
        }
        Ok(out)
    }

    pub fn value(&self) -> &LaurentMatrix {
        &self.value
    }

    pub fn into_value(self) -> LaurentMatrix {
        self.value
    }

    pub fn backend(&self) -> &LieBackend {
        &self.backend
    }

    pub fn twist(&self) -> Option<DiagramAutomorphism> {
        self.twist
    }

    pub fn real_form(&self) -> bool {
        self.real_form
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check_aut(&self, aut: &DiagramAutomorphism) -> Result<()> {
        if aut.n() != self.backend.n() {
            return Err(Error::UnsupportedAutomorphism {
                order: aut.order(),
                n: self.backend.n(),
            });
        }
        Ok(())
    }

    fn check_backend(&self, other: &Self) -> Result<()> {
        if self.backend != other.backend {
            return Err(Error::BackendMismatch(format!(
                "{:?} vs {:?}",
                self.backend, other.backend
            )));
        }
        Ok(())
    }

    /// Result of a bilinear operation keeps only the flags both inputs share.
    fn combine(&self, other: &Self, value: LaurentMatrix) -> Self {
        LoopAlgebraElement {
            value,
            backend: self.backend,
            twist: if self.twist == other.twist { self.twist } else { None },
            real_form: self.real_form && other.real_form,
        }
    }

    /// Same flags as `self`, new value. Callers guarantee the flags still hold.
    pub(crate) fn with_value(&self, value: LaurentMatrix) -> Self {
        LoopAlgebraElement {
            value,
            backend: self.backend,
            twist: self.twist,
            real_form: self.real_form,
        }
    }

    pub(crate) fn drop_real_form(mut self) -> Self {
        self.real_form = false;
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_backend(other)?;
        Ok(self.combine(other, self.value.add(&other.value)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_backend(other)?;
        Ok(self.combine(other, self.value.sub(&other.value)?))
    }

    /// Scalar multiple; the real form survives only real scalars.
    pub fn scale(&self, s: C64) -> Self {
        LoopAlgebraElement {
            value: self.value.scale(s),
            backend: self.backend,
            twist: self.twist,
            real_form: self.real_form && s.im == 0.0,
        }
    }

    /// `[f, g]_0(z) = [f(z), g(z)]`.
    pub fn lbracket(&self, other: &Self) -> Result<Self> {
        self.check_backend(other)?;
        let a = self.value.lmul(&other.value)?;
        let b = other.value.lmul(&self.value)?;
        Ok(self.combine(other, a.sub(&b)?))
    }

    /// `P(a_k) = (1/m) Σ_j ω^{−jk} σ^j(a_k)`.
    pub fn twist_project(&self, aut: DiagramAutomorphism) -> Result<Self> {
        self.check_aut(&aut)?;
        let m = aut.order();
        let value = self.value.map(|k, a| {
            let mut acc = CMat::zeros(a.nrows(), a.ncols());
            let mut s = a.clone();
            for j in 0..m {
                if j > 0 {
                    s = aut.apply(&s);
                }
                acc += &s * aut.omega_pow(-(j as i64) * k as i64);
            }
            acc / c64(m as f64, 0.0)
        });
        Ok(LoopAlgebraElement {
            value,
            backend: self.backend,
            twist: Some(aut),
            real_form: self.real_form,
        })
    }

    /// `a_k ↦ (a_k − ā_{−k}ᵀ)/2`.
    pub fn reality_project(&self) -> Self {
        let star = self.value.reflect_with(|a| a.adjoint());
        let value = self
            .value
            .sub(&star)
            .expect("same dimension")
            .scale(c64(0.5, 0.0));
        LoopAlgebraElement {
            value,
            backend: self.backend,
            twist: self.twist,
            real_form: true,
        }
    }

    pub fn evaluate(&self, z: C64) -> Result<CMat> {
        self.value.evaluate(z)
    }

    pub fn norm_sup(&self, cfg: &GradingConfig) -> f64 {
        self.value.norm_sup(cfg).lower
    }

    /// `H⁰` pairing `Σ_k λ·tr(a_k b_{−k})`.
    pub fn pairing(&self, other: &Self) -> Result<C64> {
        self.check_backend(other)?;
        Ok(h0_pairing(&self.value, &other.value) * self.backend.lambda())
    }
}

/// `Σ_k tr(a_k b_{−k})`, without the form normalization.
pub fn h0_pairing(f: &LaurentMatrix, g: &LaurentMatrix) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for (k, a) in f.terms() {
        if let Some(b) = g.coeff_ref(-k) {
            s += matrix::trace_of_product(a, b);
        }
    }
    s
}

/// `max_k ‖σ(a_k) − ω^k a_k‖`.
pub fn twist_defect(f: &LaurentMatrix, aut: &DiagramAutomorphism) -> f64 {
    f.terms()
        .map(|(k, a)| matrix::max_diff(&aut.apply(a), &(a * aut.omega_pow(k as i64))))
        .fold(0.0, f64::max)
}

/// `max_k ‖a_k + ā_{−k}ᵀ‖`.
pub fn reality_defect(f: &LaurentMatrix) -> f64 {
    let star = f.reflect_with(|a| a.adjoint());
    f.add(&star).map(|d| d.max_coeff_abs()).unwrap_or(f64::INFINITY)
}

/// Audits `‖f′‖_n <= scale · e^{n+1}/(e−1) · ‖f‖_{n+1}` over a range of `n`.
pub fn tame_report_deriv(
    f: &LaurentMatrix,
    ns: impl IntoIterator<Item = u32>,
    boundary_samples: usize,
    constant_scale: f64,
) -> Result<Vec<TameRow>> {
    let df = f.lderiv();
    let mut rows = Vec::new();
    for n in ns {
        let lhs = df
            .norm_sup(&GradingConfig::with_samples(n, boundary_samples)?)
            .lower;
        let rhs = f
            .norm_sup(&GradingConfig::with_samples(n + 1, boundary_samples)?)
            .lower;
        let bound = constant_scale * laurent::derivative_tame_constant(n) * rhs;
        rows.push(TameRow::new(n, lhs, bound));
    }
    if rows.is_empty() {
        return Err(Error::Invalid("empty n range".into()));
    }
    Ok(rows)
}
