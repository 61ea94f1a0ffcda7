//! Deterministic random generators.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)` and consumes
//! the stream in a fixed order (degree ascending, then row-major entries, real
//! part before imaginary part), so `(seed, spec)` pins the output bit for bit
//! on every platform.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kacmoody::KacMoodyVector;
use crate::laurent::{Convention, LaurentMatrix};
use crate::liealg::{DiagramAutomorphism, LieBackend, SectionElement};
use crate::loopalg::LoopAlgebraElement;
use crate::loopgroup::LoopGroupElement;
use crate::matrix::{self, c64, CMat, C64};

pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// What to draw: `sl(n)` loops on degrees `window.0..=window.1` with entries
/// uniform in the square `[−scale, scale]²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub n: usize,
    pub window: (i32, i32),
    pub scale: f64,
    #[serde(default)]
    pub twist: Option<u32>,
    #[serde(default)]
    pub real_form: bool,
}

impl FixtureSpec {
    pub fn new(n: usize, window: (i32, i32), scale: f64) -> Self {
        FixtureSpec {
            n,
            window,
            scale,
            twist: None,
            real_form: false,
        }
    }

    pub fn twisted(mut self, order: u32) -> Self {
        self.twist = Some(order);
        self
    }

    pub fn real(mut self) -> Self {
        self.real_form = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub seed: u64,
    pub spec: FixtureSpec,
    pub count: usize,
}

impl Fixture {
    pub fn elements(&self) -> Result<Vec<LoopAlgebraElement>> {
        let mut r = rng(self.seed);
        (0..self.count).map(|_| random_loop(&mut r, &self.spec)).collect()
    }
}

pub fn random_c64(r: &mut impl Rng, scale: f64) -> C64 {
    let re = r.random_range(-1.0..=1.0) * scale;
    let im = r.random_range(-1.0..=1.0) * scale;
    c64(re, im)
}

pub fn random_matrix(r: &mut impl Rng, d: usize, scale: f64) -> CMat {
    let mut m = matrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = random_c64(r, scale);
        }
    }
    m
}

pub fn random_traceless(r: &mut impl Rng, d: usize, scale: f64) -> CMat {
    let m = random_matrix(r, d, scale);
    let t = matrix::trace(&m) / c64(d as f64, 0.0);
    m - matrix::identity(d) * t
}

/// Any Laurent matrix (not necessarily traceless).
pub fn random_laurent(r: &mut impl Rng, d: usize, window: (i32, i32), scale: f64) -> LaurentMatrix {
    let coeffs = (window.0..=window.1).map(|_| random_matrix(r, d, scale)).collect();
    LaurentMatrix::from_coeffs(d, window.0, coeffs).expect("window is ordered")
}

/// A random loop, projected onto the twisted and/or compact subspace if asked.
pub fn random_loop(r: &mut impl Rng, spec: &FixtureSpec) -> Result<LoopAlgebraElement> {
    let backend = LieBackend::with_lambda(spec.n, 1.0)?;
    let coeffs = (spec.window.0..=spec.window.1)
        .map(|_| random_traceless(r, spec.n, spec.scale))
        .collect();
    let value = LaurentMatrix::from_coeffs(spec.n, spec.window.0, coeffs)?;
    let mut x = LoopAlgebraElement::new(value, backend)?;
    if let Some(order) = spec.twist {
        x = x.twist_project(DiagramAutomorphism::new(order, spec.n)?)?;
    }
    if spec.real_form {
        x = x.reality_project();
    }
    Ok(x)
}

pub fn random_km(r: &mut impl Rng, spec: &FixtureSpec, convention: Convention) -> Result<KacMoodyVector> {
    let f = random_loop(r, spec)?;
    let r_c = random_c64(r, spec.scale);
    let r_d = random_c64(r, spec.scale);
    Ok(KacMoodyVector::new(f, r_c, r_d, convention))
}

/// Unit vector in `ℂ^d`.
pub fn random_unit(r: &mut impl Rng, d: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| random_c64(r, 1.0)).collect();
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn projection(v: &[C64]) -> CMat {
    let d = v.len();
    CMat::from_fn(d, d, |i, j| v[i] * v[j].conj())
}

/// `P + z^{±1}(I − P)` for the rank-one projection onto `v`.
pub fn elementary_loop(v: &[C64], power: i32) -> LaurentMatrix {
    let p = projection(v);
    let q = matrix::identity(v.len()) - &p;
    LaurentMatrix::constant(p)
        .add(&LaurentMatrix::monomial(q, power))
        .expect("same dimension")
}

/// Based loop `p_a q_b p_c q_d` in `SU(2)` on the unit circle, where
/// `p_v = P_v + z(I − P_v)` and `q_v = P_v + z⁻¹(I − P_v)`. Window `[−2, 2]`,
/// determinant one, value `I` at `z = 1`.
pub fn random_based_su2_loop(r: &mut impl Rng) -> Result<LoopGroupElement> {
    let mut acc = LaurentMatrix::identity(2);
    for power in [1, -1, 1, -1] {
        let v = random_unit(r, 2);
        acc = acc.lmul(&elementary_loop(&v, power))?;
    }
    LoopGroupElement::new(acc.chop(1e-15))
}

/// Strictly triangular Laurent matrix with entries on `window`.
fn random_nilpotent(r: &mut impl Rng, d: usize, upper: bool, window: (i32, i32), scale: f64) -> LaurentMatrix {
    let mut entries = vec![LaurentMatrix::zero(1); d * d];
    for i in 0..d {
        for j in 0..d {
            if (upper && j > i) || (!upper && i > j) {
                let terms: Vec<(i32, C64)> = (window.0..=window.1).map(|k| (k, random_c64(r, scale))).collect();
                entries[i * d + j] = LaurentMatrix::scalar(&terms);
            }
        }
    }
    LaurentMatrix::from_entries(d, &entries).expect("d*d entries")
}

/// `(I + N₁)(I + L)(I + N₂)` with `N` strictly upper and `L` strictly lower
/// triangular, entries on `[−1, 1]`. The result has determinant exactly one
/// and window at most `[−3, 3]`.
pub fn random_unipotent_product(r: &mut impl Rng, d: usize, scale: f64) -> Result<LoopGroupElement> {
    let id = LaurentMatrix::identity(d);
    let mut acc = id.clone();
    for upper in [true, false, true] {
        let n = random_nilpotent(r, d, upper, (-1, 1), scale);
        acc = acc.lmul(&id.add(&n)?)?;
    }
    LoopGroupElement::new(acc)
}

/// Angles strictly inside the fundamental alcove of `su(n)`.
pub fn random_alcove_angles(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut u: Vec<f64> = (0..n).map(|_| r.random_range(0.02..0.98) * 2.0 * PI).collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mean = u.iter().sum::<f64>() / n as f64;
    u.iter().map(|x| x - mean).collect()
}

pub fn random_section(r: &mut impl Rng, n: usize) -> Result<SectionElement> {
    SectionElement::new(random_alcove_angles(r, n))
}

/// Whether a spec has a usable window and scale.
pub fn validate_spec(spec: &FixtureSpec) -> Result<()> {
    if spec.window.0 > spec.window.1 {
        return Err(Error::Invalid(format!("empty window {:?}", spec.window)));
    }
    if !(spec.scale.is_finite() && spec.scale >= 0.0) {
        return Err(Error::Invalid(format!("bad coefficient scale {}", spec.scale)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loopalg::{reality_defect, twist_defect};

    #[test]
    fn same_seed_same_elements() {
        let f = Fixture {
            seed: 7,
            spec: FixtureSpec::new(3, (-2, 2), 1.0).twisted(2).real(),
            count: 5,
        };
        let a = f.elements().unwrap();
        let b = f.elements().unwrap();
        assert_eq!(a, b);
        let aut = DiagramAutomorphism::new(2, 3).unwrap();
        for x in &a {
            assert!(twist_defect(x.value(), &aut) < 1e-13);
            assert!(reality_defect(x.value()) < 1e-13);
        }
    }

    #[test]
    fn based_loops_are_unitary_and_based() {
        let mut r = rng(3);
        for _ in 0..10 {
            let g = random_based_su2_loop(&mut r).unwrap();
            assert!(g.mat().k_min() >= -2 && g.mat().k_max() <= 2);
            let one = g.evaluate(c64(1.0, 0.0)).unwrap();
            assert!(matrix::max_diff(&one, &matrix::identity(2)) < 1e-13);
            let z = C64::from_polar(1.0, 0.7);
            let m = g.evaluate(z).unwrap();
            let uu = &m * m.adjoint();
            assert!(matrix::max_diff(&uu, &matrix::identity(2)) < 1e-13);
        }
    }

    #[test]
    fn unipotent_products_have_det_one() {
        let mut r = rng(11);
        let g = random_unipotent_product(&mut r, 3, 0.3).unwrap();
        assert!(g.det_certified());
        assert!(g.mat().k_min() >= -3 && g.mat().k_max() <= 3);
    }

    #[test]
    fn alcove_angles_are_interior() {
        let mut r = rng(5);
        for n in 2..5 {
            let s = random_section(&mut r, n).unwrap();
            assert!(s.is_in_alcove(0.0));
        }
    }
}
