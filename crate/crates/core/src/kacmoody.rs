//! The affine extension `L ⊕ ℂc ⊕ ℂd`: residue cocycle, bracket, invariant
//! form and the tame estimate for `ad`.
//!
//! Under [`Convention::Standard`] the derivation acts as `z d/dz` and the
//! cocycle carries sign `−1`; this is the unique sign making the form with
//! `⟨c, d⟩ = 1` invariant. [`Convention::PaperLiteral`] uses `iz d/dz` with
//! sign `+1`; it satisfies Jacobi but the form is not invariant, so it is only
//! meant for norm estimates.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::laurent::{Convention, GradingConfig, LaurentMatrix};
use crate::liealg::LieBackend;
use crate::loopalg::{LoopAlgebraElement, TameRow};
use crate::matrix::{self, c64, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleSign {
    Plus,
    Minus,
}

impl CocycleSign {
    pub fn value(self) -> f64 {
        match self {
            CocycleSign::Plus => 1.0,
            CocycleSign::Minus => -1.0,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            1 => Ok(CocycleSign::Plus),
            -1 => Ok(CocycleSign::Minus),
            _ => Err(Error::Invalid(format!("cocycle sign must be ±1, got {v}"))),
        }
    }

    /// The sign fixed for each convention.
    pub fn pinned(convention: Convention) -> Self {
        match convention {
            Convention::Standard => CocycleSign::Minus,
            Convention::PaperLiteral => CocycleSign::Plus,
        }
    }
}

/// `f + r_c c + r_d d`.
#[derive(Clone, Debug, PartialEq)]
pub struct KacMoodyVector {
    pub loop_part: LoopAlgebraElement,
    pub r_c: C64,
    pub r_d: C64,
    pub convention: Convention,
}

impl KacMoodyVector {
    pub fn new(loop_part: LoopAlgebraElement, r_c: C64, r_d: C64, convention: Convention) -> Self {
        KacMoodyVector {
            loop_part,
            r_c,
            r_d,
            convention,
        }
    }

    pub fn from_loop(loop_part: LoopAlgebraElement, convention: Convention) -> Self {
        Self::new(loop_part, C64::new(0.0, 0.0), C64::new(0.0, 0.0), convention)
    }

    pub fn zero(backend: LieBackend, convention: Convention) -> Self {
        Self::from_loop(LoopAlgebraElement::zero(backend), convention)
    }

    pub fn c(backend: LieBackend, convention: Convention) -> Self {
        Self::new(
            LoopAlgebraElement::zero(backend),
            c64(1.0, 0.0),
            c64(0.0, 0.0),
            convention,
        )
    }

    pub fn d(backend: LieBackend, convention: Convention) -> Self {
        Self::new(
            LoopAlgebraElement::zero(backend),
            c64(0.0, 0.0),
            c64(1.0, 0.0),
            convention,
        )
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch {
                left: self.convention,
                right: other.convention,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(KacMoodyVector {
            loop_part: self.loop_part.add(&other.loop_part)?,
            r_c: self.r_c + other.r_c,
            r_d: self.r_d + other.r_d,
            convention: self.convention,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        KacMoodyVector {
            loop_part: self.loop_part.scale(s),
            r_c: self.r_c * s,
            r_d: self.r_d * s,
            convention: self.convention,
        }
    }

    /// Largest deviation over loop coefficients and both scalar parts.
    pub fn max_abs(&self) -> f64 {
        self.loop_part
            .value()
            .max_coeff_abs()
            .max(self.r_c.norm())
            .max(self.r_d.norm())
    }
}

/// Bracket and form for a fixed convention and cocycle sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KacMoody {
    pub convention: Convention,
    pub sign: CocycleSign,
}

impl KacMoody {
    pub fn new(convention: Convention) -> Self {
        KacMoody {
            convention,
            sign: CocycleSign::pinned(convention),
        }
    }

    pub fn with_sign(convention: Convention, sign: CocycleSign) -> Self {
        KacMoody { convention, sign }
    }

    fn check(&self, x: &KacMoodyVector) -> Result<()> {
        if x.convention != self.convention {
            return Err(Error::ConventionMismatch {
                left: self.convention,
                right: x.convention,
            });
        }
        Ok(())
    }

    /// `s·Res(λ·tr(f g′)) = s·Σ_k k·λ·tr(a_{−k} b_k)`.
    pub fn cocycle(&self, f: &LoopAlgebraElement, g: &LoopAlgebraElement) -> Result<C64> {
        if f.backend() != g.backend() {
            return Err(Error::BackendMismatch("cocycle operands".into()));
        }
        Ok(cocycle_raw(f.value(), g.value()) * (self.sign.value() * f.backend().lambda()))
    }

    /// The derivation `[d, f]`, with the real-form flag kept only when the
    /// derivation preserves it.
    pub fn derive(&self, f: &LoopAlgebraElement) -> LoopAlgebraElement {
        let out = f.with_value(f.value().d_action(self.convention));
        match self.convention {
            Convention::PaperLiteral => out,
            Convention::Standard => out.drop_real_form(),
        }
    }

    /// `[f + r_c c + r_d d, g + s_c c + s_d d] = [f,g]_0 + r_d D g − s_d D f + ω(f,g) c`.
    pub fn bracket(&self, x: &KacMoodyVector, y: &KacMoodyVector) -> Result<KacMoodyVector> {
        self.check(x)?;
        self.check(y)?;
        let mut lp = x.loop_part.lbracket(&y.loop_part)?;
        if y.r_d != C64::new(0.0, 0.0) {
            lp = lp.add(&self.derive(&x.loop_part).scale(-y.r_d))?;
        }
        if x.r_d != C64::new(0.0, 0.0) {
            lp = lp.add(&self.derive(&y.loop_part).scale(x.r_d))?;
        }
        let r_c = self.cocycle(&x.loop_part, &y.loop_part)?;
        Ok(KacMoodyVector {
            loop_part: lp,
            r_c,
            r_d: C64::new(0.0, 0.0),
            convention: self.convention,
        })
    }

    /// `⟨f, g⟩₀ + r_c s_d + r_d s_c`.
    pub fn form(&self, x: &KacMoodyVector, y: &KacMoodyVector) -> Result<C64> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.loop_part.pairing(&y.loop_part)? + x.r_c * y.r_d + x.r_d * y.r_c)
    }

    /// `‖f‖_n + (|r_c|² + |r_d|²)^{1/2}`.
    pub fn norm(&self, x: &KacMoodyVector, cfg: &GradingConfig) -> f64 {
        x.loop_part.norm_sup(cfg) + (x.r_c.norm_sqr() + x.r_d.norm_sqr()).sqrt()
    }

    /// Audits `‖[x, y]‖_n <= scale · 6π e^{2n+1} ‖x‖_{n+1} ‖y‖_{n+1}`.
    pub fn ad_tame_report(
        &self,
        x: &KacMoodyVector,
        y: &KacMoodyVector,
        ns: impl IntoIterator<Item = u32>,
        boundary_samples: usize,
        constant_scale: f64,
    ) -> Result<Vec<TameRow>> {
        let b = self.bracket(x, y)?;
        let mut rows = Vec::new();
        for n in ns {
            let lhs = self.norm(&b, &GradingConfig::with_samples(n, boundary_samples)?);
            let next = GradingConfig::with_samples(n + 1, boundary_samples)?;
            let bound = constant_scale
                * ad_tame_constant(n)
                * self.norm(x, &next)
                * self.norm(y, &next);
            rows.push(TameRow::new(n, lhs, bound));
        }
        if rows.is_empty() {
            return Err(Error::Invalid("empty n range".into()));
        }
        Ok(rows)
    }
}

impl Default for KacMoody {
    fn default() -> Self {
        KacMoody::new(Convention::Standard)
    }
}

/// `Σ_k k·tr(a_{−k} b_k)`, without sign or normalization.
pub fn cocycle_raw(f: &LaurentMatrix, g: &LaurentMatrix) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for (k, b) in g.terms() {
        if k == 0 {
            continue;
        }
        if let Some(a) = f.coeff_ref(-k) {
            s += matrix::trace_of_product(a, b) * k as f64;
        }
    }
    s
}

/// `6π e^{2n+1}`.
pub fn ad_tame_constant(n: u32) -> f64 {
    6.0 * PI * E.powi(2 * n as i32 + 1)
}
