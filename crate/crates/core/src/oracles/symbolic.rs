//! Exact Laurent polynomials over the Gaussian rationals `ℚ(i)`.
//!
//! Nothing here touches the floating-point kernels of the crate: matrices are
//! row-major `Vec`s, products are schoolbook loops, and conversion to
//! [`LaurentMatrix`] is the only lossy step.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::laurent::{Convention, LaurentMatrix};
use crate::matrix::{c64, CMat};

/// `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn int(re: i64, im: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::int(0, 0)
    }

    pub fn one() -> Self {
        Self::int(1, 0)
    }

    pub fn i() -> Self {
        Self::int(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(f, "{}{}{}i", self.re, sign, self.im.abs())
        }
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

/// Square matrix over `ℚ(i)`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMat {
    pub dim: usize,
    pub entries: Vec<GaussRat>,
}

impl SymMat {
    pub fn zero(dim: usize) -> Self {
        SymMat {
            dim,
            entries: vec![GaussRat::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = GaussRat::one();
        }
        m
    }

    /// From integer rows.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let dim = rows.len();
        SymMat {
            dim,
            entries: rows
                .iter()
                .flat_map(|r| r.iter().map(|&v| GaussRat::int(v, 0)))
                .collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRat {
        &self.entries[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussRat::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &Self, f: impl Fn(&GaussRat, &GaussRat) -> GaussRat) -> Self {
        assert_eq!(self.dim, o.dim);
        SymMat {
            dim: self.dim,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        SymMat {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.dim;
        let mut out = Self::zero(d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = GaussRat::zero();
                for k in 0..d {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                out.entries[i * d + j] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> GaussRat {
        (0..self.dim).fold(GaussRat::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn to_cmat(&self) -> CMat {
        CMat::from_fn(self.dim, self.dim, |i, j| {
            let (re, im) = self.get(i, j).to_f64();
            c64(re, im)
        })
    }
}

/// Sparse exact Laurent polynomial `Σ a_k z^k` with `SymMat` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicLaurent {
    pub dim: usize,
    pub terms: BTreeMap<i32, SymMat>,
}

impl SymbolicLaurent {
    pub fn zero(dim: usize) -> Self {
        SymbolicLaurent {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(a: SymMat, k: i32) -> Self {
        let mut out = Self::zero(a.dim);
        out.push(k, a);
        out
    }

    fn push(&mut self, k: i32, a: SymMat) {
        let entry = self.terms.entry(k).or_insert_with(|| SymMat::zero(a.dim));
        *entry = entry.add(&a);
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i32) -> SymMat {
        self.terms.get(&k).cloned().unwrap_or_else(|| SymMat::zero(self.dim))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, a) in &o.terms {
            out.push(*k, a.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&GaussRat::int(-1, 0)))
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, a) in &self.terms {
            out.push(*k, a.scale(s));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (j, a) in &self.terms {
            for (k, b) in &o.terms {
                out.push(j + k, a.mul(b));
            }
        }
        out
    }

    /// `d/dz`.
    pub fn deriv(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, a) in &self.terms {
            if *k != 0 {
                out.push(k - 1, a.scale(&GaussRat::int(*k as i64, 0)));
            }
        }
        out
    }

    /// `z d/dz` (standard) or `iz d/dz` (literal).
    pub fn d_action(&self, convention: Convention) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, a) in &self.terms {
            let f = match convention {
                Convention::Standard => GaussRat::int(*k as i64, 0),
                Convention::PaperLiteral => GaussRat::int(0, *k as i64),
            };
            out.push(*k, a.scale(&f));
        }
        out
    }

    pub fn to_laurent(&self) -> LaurentMatrix {
        self.terms
            .iter()
            .fold(LaurentMatrix::zero(self.dim), |acc, (k, a)| {
                acc.add(&LaurentMatrix::monomial(a.to_cmat(), *k))
                    .expect("same dimension")
            })
    }
}

/// `f + r_c c + r_d d` with exact parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymKacMoody {
    pub loop_part: SymbolicLaurent,
    pub r_c: GaussRat,
    pub r_d: GaussRat,
}

impl SymKacMoody {
    pub fn from_loop(loop_part: SymbolicLaurent) -> Self {
        SymKacMoody {
            loop_part,
            r_c: GaussRat::zero(),
            r_d: GaussRat::zero(),
        }
    }

    pub fn c(dim: usize) -> Self {
        SymKacMoody {
            loop_part: SymbolicLaurent::zero(dim),
            r_c: GaussRat::one(),
            r_d: GaussRat::zero(),
        }
    }

    pub fn d(dim: usize) -> Self {
        SymKacMoody {
            loop_part: SymbolicLaurent::zero(dim),
            r_c: GaussRat::zero(),
            r_d: GaussRat::one(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        SymKacMoody {
            loop_part: self.loop_part.add(&o.loop_part),
            r_c: &self.r_c + &o.r_c,
            r_d: &self.r_d + &o.r_d,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.loop_part.is_zero() && self.r_c.is_zero() && self.r_d.is_zero()
    }
}

/// Pointwise commutator.
pub fn oracle_bracket(f: &SymbolicLaurent, g: &SymbolicLaurent) -> SymbolicLaurent {
    f.mul(g).sub(&g.mul(f))
}

/// `s·λ·Res_{z=0} tr(f(z) g′(z))`, read off the `z^{-1}` coefficient.
pub fn oracle_cocycle(
    f: &SymbolicLaurent,
    g: &SymbolicLaurent,
    sign: i64,
    lambda: &GaussRat,
) -> GaussRat {
    let res = f.mul(&g.deriv()).coeff(-1).trace();
    &(&res * lambda) * &GaussRat::int(sign, 0)
}

/// The extended bracket with derivation per `convention` and cocycle sign `sign`.
pub fn oracle_km_bracket(
    x: &SymKacMoody,
    y: &SymKacMoody,
    convention: Convention,
    sign: i64,
    lambda: &GaussRat,
) -> SymKacMoody {
    let mut lp = oracle_bracket(&x.loop_part, &y.loop_part);
    lp = lp.add(&y.loop_part.d_action(convention).scale(&x.r_d));
    lp = lp.sub(&x.loop_part.d_action(convention).scale(&y.r_d));
    SymKacMoody {
        loop_part: lp,
        r_c: oracle_cocycle(&x.loop_part, &y.loop_part, sign, lambda),
        r_d: GaussRat::zero(),
    }
}

/// `λ·[z⁰] tr(f(z) g(z)) + r_c s_d + r_d s_c`.
pub fn oracle_km_form(x: &SymKacMoody, y: &SymKacMoody, lambda: &GaussRat) -> GaussRat {
    let l = &x.loop_part.mul(&y.loop_part).coeff(0).trace() * lambda;
    let cross = &(&x.r_c * &y.r_d) + &(&x.r_d * &y.r_c);
    &l + &cross
}

/// `sl(2)` test vectors: `E, F, H` at degrees `−2..=2`, plus `c` and `d`.
pub fn sl2_monomial_basis() -> Vec<SymKacMoody> {
    let gens = [
        SymMat::from_ints(&[&[0, 1], &[0, 0]]),
        SymMat::from_ints(&[&[0, 0], &[1, 0]]),
        SymMat::from_ints(&[&[1, 0], &[0, -1]]),
    ];
    let mut out = Vec::new();
    for k in -2..=2 {
        for g in &gens {
            out.push(SymKacMoody::from_loop(SymbolicLaurent::monomial(g.clone(), k)));
        }
    }
    out.push(SymKacMoody::c(2));
    out.push(SymKacMoody::d(2));
    out
}

/// The cocycle sign for the standard convention, found by checking which
/// sign makes `⟨[x,y],w⟩ + ⟨y,[x,w]⟩ = 0` hold exactly with `⟨c, d⟩ = 1`
/// over all triples of `sl(2)` monomials together with `c` and `d`.
pub fn pin_sign() -> Option<i64> {
    let basis = sl2_monomial_basis();
    let lambda = GaussRat::one();
    let passes = |s: i64| {
        basis.iter().all(|x| {
            basis.iter().all(|y| {
                basis.iter().all(|w| {
                    let xy = oracle_km_bracket(x, y, Convention::Standard, s, &lambda);
                    let xw = oracle_km_bracket(x, w, Convention::Standard, s, &lambda);
                    let total = &oracle_km_form(&xy, w, &lambda) + &oracle_km_form(y, &xw, &lambda);
                    total.is_zero()
                })
            })
        })
    };
    match (passes(1), passes(-1)) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

/// Whether the literal convention admits any sign making the form invariant.
pub fn literal_convention_invariant_sign() -> Option<i64> {
    let basis = sl2_monomial_basis();
    let lambda = GaussRat::one();
    let passes = |s: i64| {
        basis.iter().all(|x| {
            basis.iter().all(|y| {
                basis.iter().all(|w| {
                    let xy = oracle_km_bracket(x, y, Convention::PaperLiteral, s, &lambda);
                    let xw = oracle_km_bracket(x, w, Convention::PaperLiteral, s, &lambda);
                    (&oracle_km_form(&xy, w, &lambda) + &oracle_km_form(y, &xw, &lambda)).is_zero()
                })
            })
        })
    };
    [1, -1].into_iter().find(|&s| passes(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> SymMat {
        SymMat::from_ints(&[&[0, 1], &[0, 0]])
    }
    fn f() -> SymMat {
        SymMat::from_ints(&[&[0, 0], &[1, 0]])
    }
    fn h() -> SymMat {
        SymMat::from_ints(&[&[1, 0], &[0, -1]])
    }

    #[test]
    fn cocycle_example() {
        let ez = SymbolicLaurent::monomial(e(), 1);
        let fz = SymbolicLaurent::monomial(f(), -1);
        assert_eq!(oracle_cocycle(&ez, &fz, 1, &GaussRat::one()), GaussRat::int(-1, 0));
    }

    #[test]
    fn bracket_with_self_vanishes() {
        let g = SymbolicLaurent::monomial(e(), 2).add(&SymbolicLaurent::monomial(h(), -1));
        assert!(oracle_bracket(&g, &g).is_zero());
    }

    #[test]
    fn jacobi_on_monomials() {
        let basis = sl2_monomial_basis();
        let one = GaussRat::one();
        for conv in [Convention::Standard, Convention::PaperLiteral] {
            for x in &basis {
                for y in &basis {
                    for z in &basis {
                        let br = |a: &SymKacMoody, b: &SymKacMoody| oracle_km_bracket(a, b, conv, -1, &one);
                        let total = br(&br(x, y), z).add(&br(&br(y, z), x)).add(&br(&br(z, x), y));
                        assert!(total.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn sign_is_pinned() {
        assert_eq!(pin_sign(), Some(-1));
        assert_eq!(literal_convention_invariant_sign(), None);
    }

    #[test]
    fn expansion_of_square_over_z() {
        // (z + 1)^2 / z = z + 2 + 1/z
        let one = SymMat::identity(1);
        let zp1 = SymbolicLaurent::monomial(one.clone(), 1).add(&SymbolicLaurent::monomial(one.clone(), 0));
        let f = zp1.mul(&zp1).mul(&SymbolicLaurent::monomial(one.clone(), -1));
        assert_eq!(f.coeff(-1), one);
        assert_eq!(f.coeff(0), one.scale(&GaussRat::int(2, 0)));
    }
}
