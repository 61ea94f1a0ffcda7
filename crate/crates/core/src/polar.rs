//! Gauge action of loops on connections `u(t) dt`, normalization of compact
//! connections to constant diagonal ones, and the Adjoint action of the
//! extended group on `L ⊕ ℂc ⊕ ℂd`.
//!
//! Derivatives here are taken in the circle parameter, `D_t = iz d/dz`.
//! The transport of `u` is the right-multiplicative `H′ = H u`, `H(0) = I`;
//! with `K = H g⁻¹` one gets `K′ = K (g·u)` for
//! `g·u = g u g⁻¹ − (D_t g) g⁻¹`, so monodromies of gauge-equivalent
//! connections are conjugate (equal for based `g`).

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::kacmoody::KacMoodyVector;
use crate::laurent::{CircleSamples, Convention, LaurentMatrix};
use crate::liealg::{
    alcove_reduce_theta, conjugate_to_torus, eigenvalues, AlcoveWitness, SectionElement,
};
use crate::loopalg::{h0_pairing, reality_defect, LoopAlgebraElement};
use crate::loopgroup::{magnus_samples, monodromy, LoopGroupElement};
use crate::matrix::{self, c64, CMat, C64};

/// Largest reality defect accepted as a compact-valued connection.
pub const COMPACT_TOL: f64 = 1e-9;

/// `D_t g · g⁻¹` for a certified loop.
pub fn maurer_cartan_t(g: &LoopGroupElement) -> Result<LaurentMatrix> {
    let inv = g.ginv()?;
    g.mat()
        .d_action(Convention::PaperLiteral)
        .lmul(inv.mat())
}

/// `g·u = g u g⁻¹ − (D_t g) g⁻¹`, exact on coefficients.
pub fn gauge_action(g: &LoopGroupElement, u: &LoopAlgebraElement) -> Result<LoopAlgebraElement> {
    let inv = g.ginv()?;
    let conj = g.mat().lmul(u.value())?.lmul(inv.mat())?;
    let value = conj.sub(&maurer_cartan_t(g)?)?;
    let out = LoopAlgebraElement::new(strip_trace(&value)?, *u.backend())?;
    if u.real_form() {
        if let Ok(real) = out.clone().with_real_form() {
            return Ok(real);
        }
    }
    Ok(out)
}

/// Removes the roundoff-level trace left by products of certified loops.
fn strip_trace(f: &LaurentMatrix) -> Result<LaurentMatrix> {
    let d = f.dim();
    let scale = 1.0 + f.max_coeff_abs();
    let tr = f.trace();
    let dev = tr.max_coeff_abs();
    if dev > 1e-9 * scale {
        return Err(Error::InvariantViolated { deviation: dev });
    }
    let corr = f.map(|k, _| matrix::identity(d) * (tr.coeff(k)[(0, 0)] / d as f64));
    f.sub(&corr)
}

/// Gauge action on sampled data: `g u g⁻¹ − g′ g⁻¹` with `g′` from
/// spectral differentiation of the periodic samples.
pub fn gauge_action_sampled(g: &CircleSamples, u: &[CMat]) -> Result<Vec<CMat>> {
    let dg = g.angular_derivative();
    g.values
        .iter()
        .zip(u)
        .zip(&dg)
        .map(|((gj, uj), dj)| {
            let inv = matrix::inverse(gj)?;
            Ok(gj * uj * &inv - dj * &inv)
        })
        .collect()
}

/// Output of [`normalize_to_section`].
#[derive(Clone, Debug)]
pub struct GaugeResult {
    pub section: SectionElement,
    /// The gauge loop `g(t_j)` at `t_j = 2πj/N`.
    pub gauge: CircleSamples,
    /// `max(closure defect, H⁰ distance of g·u to the section)`.
    pub residual: f64,
    pub closure_defect: f64,
    pub monodromy_eigenvalues: Vec<C64>,
    pub witness: AlcoveWitness,
}

/// Angles of a unitary diagonal, shifted by whole periods so they sum to zero.
fn balanced_angles(d: &[C64]) -> Vec<f64> {
    let mut theta: Vec<f64> = d.iter().map(|z| z.arg()).collect();
    let k = (theta.iter().sum::<f64>() / TAU).round() as i64;
    let mut order: Vec<usize> = (0..theta.len()).collect();
    order.sort_by(|&a, &b| theta[b].total_cmp(&theta[a]));
    if k > 0 {
        for &j in order.iter().take(k as usize) {
            theta[j] -= TAU;
        }
    } else if k < 0 {
        for &j in order.iter().rev().take((-k) as usize) {
            theta[j] += TAU;
        }
    }
    let mean = theta.iter().sum::<f64>() / theta.len() as f64;
    theta.iter_mut().for_each(|t| *t -= mean);
    theta
}

/// Gauges a compact connection `u` to a constant element of the alcove.
///
/// The transport `H′ = H u` gives `M = H(2π) = P D P⁻¹`. With
/// `D = exp(2π X̃)` the loop `exp(−t X̃) P⁻¹ H(t)` is periodic and gauges `u`
/// to `X̃`; a torus loop and a permutation then move `X̃` into the alcove.
pub fn normalize_to_section(u: &LoopAlgebraElement, steps: usize) -> Result<GaugeResult> {
    if u.twist().is_some_and(|a| a.order() > 1) {
        return Err(Error::Invalid(
            "normalization of twisted connections is not supported".into(),
        ));
    }
    let dev = reality_defect(u.value());
    if dev > COMPACT_TOL {
        return Err(Error::NotCompact { deviation: dev });
    }
    if steps < 16 {
        return Err(Error::Invalid(format!("steps must be >= 16, got {steps}")));
    }
    let n = u.backend().n();
    let f = u.value();
    let gen = |t: f64| f.evaluate(C64::from_polar(1.0, t)).expect("unit circle");
    let h = magnus_samples(&gen, &CMat::identity(n, n), steps, 1);
    let m = &h[steps];
    let tc = conjugate_to_torus(m)?;
    let mut p = tc.p.clone();
    let fix = matrix::det(&p).inv();
    for i in 0..n {
        p[(i, 0)] *= fix;
    }
    let p_inv = matrix::inverse(&p)?;
    let theta_t = balanced_angles(&tc.d);
    let (section, witness) = alcove_reduce_theta(&theta_t)?;

    // W[i][perm[i]] = 1, with one sign flipped for odd permutations.
    let mut w = CMat::zeros(n, n);
    for (i, &j) in witness.perm.iter().enumerate() {
        w[(i, j)] = c64(1.0, 0.0);
    }
    if matrix::det(&w).re < 0.0 {
        for j in 0..n {
            w[(0, j)] = -w[(0, j)];
        }
    }
    let rates: Vec<f64> = (0..n)
        .map(|j| witness.shift[j] as f64 + theta_t[j] / TAU)
        .collect();
    let gauge_at = |t: f64, hj: &CMat| {
        let phase: Vec<C64> = rates.iter().map(|r| C64::from_polar(1.0, -r * t)).collect();
        &w * matrix::diag(&phase) * &p_inv * hj
    };
    let values: Vec<CMat> = (0..steps)
        .map(|j| gauge_at(TAU * j as f64 / steps as f64, &h[j]))
        .collect();
    let closure_defect = matrix::spectral_norm(&(gauge_at(TAU, &h[steps]) - &values[0]));
    let gauge = CircleSamples {
        radius: 1.0,
        values,
    };
    let u_samples: Vec<CMat> = (0..steps).map(|j| gen(TAU * j as f64 / steps as f64)).collect();
    let gauged = gauge_action_sampled(&gauge, &u_samples)?;
    let x = section.loop_value();
    let rms = (gauged
        .iter()
        .map(|v| matrix::frobenius(&(v - &x)).powi(2))
        .sum::<f64>()
        / steps as f64)
        .sqrt();
    let mut evs = tc.d.clone();
    sort_by_arg(&mut evs);
    Ok(GaugeResult {
        section,
        gauge,
        residual: rms.max(closure_defect),
        closure_defect,
        monodromy_eigenvalues: evs,
        witness,
    })
}

fn sort_by_arg(v: &mut [C64]) {
    v.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
}

/// Eigenvalues of the transport of `u dt`, sorted by argument.
pub fn orbit_invariants(u: &LoopAlgebraElement, steps: usize) -> Result<Vec<C64>> {
    // u dt = (u / iz) dz on the unit circle.
    let alpha = u.value().shift_degree(-1).scale(c64(0.0, -1.0));
    let m = monodromy(&alpha, steps)?;
    let mut evs = eigenvalues(&m.transport)?;
    sort_by_arg(&mut evs);
    Ok(evs)
}

/// Distance between two eigenvalue multisets, matched greedily.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// An element `(g, w_c, w_d)` of the extended loop group.
#[derive(Clone, Debug, PartialEq)]
pub struct KacMoodyGroupElement {
    pub g: LoopGroupElement,
    pub w_c: C64,
    pub w_d: C64,
}

impl KacMoodyGroupElement {
    pub fn new(g: LoopGroupElement, w_c: C64, w_d: C64) -> Result<Self> {
        if w_d == C64::new(0.0, 0.0) {
            return Err(Error::ZeroArgument);
        }
        Ok(KacMoodyGroupElement { g, w_c, w_d })
    }

    pub fn from_loop(g: LoopGroupElement) -> Self {
        KacMoodyGroupElement {
            g,
            w_c: c64(1.0, 0.0),
            w_d: c64(1.0, 0.0),
        }
    }

    /// `(g₁(z) g₂(z w₁), w_c₁ w_c₂, w_d₁ w_d₂)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let shifted = LoopGroupElement::new(other.g.mat().shift_arg(self.w_d)?)?;
        Ok(KacMoodyGroupElement {
            g: self.g.gmul(&shifted)?,
            w_c: self.w_c * other.w_c,
            w_d: self.w_d * other.w_d,
        })
    }
}

/// Adjoint action on `f + r_c c + r_d d`.
///
/// With `v(z) = f(z w_d)`, `A = g v g⁻¹` and `B = (D_t g) g⁻¹`:
/// loop `A − r_d B`, central `r_c + ⟨A, B⟩₀ − ½ r_d ⟨B, B⟩₀`, derivation `r_d`.
pub fn hat_adjoint(x: &KacMoodyGroupElement, y: &KacMoodyVector) -> Result<KacMoodyVector> {
    if y.convention != Convention::Standard {
        return Err(Error::ConventionMismatch {
            left: Convention::Standard,
            right: y.convention,
        });
    }
    let backend = *y.loop_part.backend();
    let lambda = backend.lambda();
    let v = y.loop_part.value().shift_arg(x.w_d)?;
    let inv = x.g.ginv()?;
    let a = x.g.mat().lmul(&v)?.lmul(inv.mat())?;
    let b = maurer_cartan_t(&x.g)?;
    let loop_value = a.sub(&b.scale(y.r_d))?;
    let r_c = y.r_c + h0_pairing(&a, &b) * lambda - h0_pairing(&b, &b) * (0.5 * lambda) * y.r_d;
    let loop_part = LoopAlgebraElement::new(strip_trace(&loop_value)?, backend)?;
    Ok(KacMoodyVector::new(loop_part, r_c, y.r_d, y.convention))
}

/// First `count` images of `X` under the affine Weyl group, enumerated by
/// translation radius, then translation vector, then permutation.
pub fn affine_weyl_orbit(x: &SectionElement, count: usize) -> Vec<SectionElement> {
    let n = x.n();
    let perms = permutations(n);
    let mut out = Vec::with_capacity(count);
    let mut radius: i64 = 0;
    while out.len() < count {
        for m in translations(n, radius) {
            for p in &perms {
                if out.len() == count {
                    return out;
                }
                let theta = (0..n)
                    .map(|i| x.theta[p[i]] + TAU * m[i] as f64)
                    .collect();
                out.push(SectionElement {
                    theta,
                    alcove_reduced: false,
                });
            }
        }
        radius += 1;
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
        out.push(p.clone());
    }
}

/// Integer vectors with zero sum and sup norm exactly `r`, lexicographic.
fn translations(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-r; n];
    loop {
        if cur.iter().sum::<i64>() == 0 && cur.iter().map(|v| v.abs()).max() == Some(r) {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                for v in cur.iter_mut().skip(i + 1) {
                    *v = -r;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kacmoody::KacMoody;
    use crate::liealg::{alcove_reduce_theta, LieBackend};
    use crate::matrix::{diag, from_real_rows, max_diff};
    use std::f64::consts::PI;

    fn h_mat() -> CMat {
        from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    fn diag_z() -> LoopGroupElement {
        let m = LaurentMatrix::monomial(diag(&[c64(1.0, 0.0), c64(0.0, 0.0)]), 1)
            .add(&LaurentMatrix::monomial(diag(&[c64(0.0, 0.0), c64(1.0, 0.0)]), -1))
            .unwrap();
        LoopGroupElement::new(m).unwrap()
    }

    #[test]
    fn gauge_examples() {
        let b = LieBackend::sl(2);
        let u = LoopAlgebraElement::monomial(from_real_rows(&[&[0.0, 1.0], &[2.0, 0.0]]), 1, b)
            .unwrap();
        let id = LoopGroupElement::identity(2);
        assert_eq!(gauge_action(&id, &u).unwrap().value(), u.value());
        let g0 = from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let gc = LoopGroupElement::constant(g0.clone()).unwrap();
        let want = u.value().left_mul_const(&g0).right_mul_const(&matrix::inverse(&g0).unwrap());
        assert!(gauge_action(&gc, &u).unwrap().value().max_coeff_diff(&want) < 1e-13);
        let r = gauge_action(&diag_z(), &LoopAlgebraElement::zero(b)).unwrap();
        assert_eq!(r.value(), &LaurentMatrix::constant(h_mat() * c64(0.0, -1.0)));
    }

    #[test]
    fn constant_section_is_fixed() {
        let s = SectionElement::new(vec![0.7, -0.7]).unwrap();
        let u = LoopAlgebraElement::constant(s.loop_value(), LieBackend::sl(2))
            .unwrap()
            .with_real_form()
            .unwrap();
        let r = normalize_to_section(&u, 256).unwrap();
        assert!(r.section.max_diff(&s) < 1e-12);
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn out_of_alcove_constant_is_reduced() {
        let s = SectionElement::new(vec![1.2 * PI, -1.2 * PI]).unwrap();
        let u = LoopAlgebraElement::constant(s.loop_value(), LieBackend::sl(2)).unwrap();
        let r = normalize_to_section(&u, 256).unwrap();
        assert!((r.section.theta[0] - 0.8 * PI).abs() < 1e-10);
        assert!((r.section.theta[1] + 0.8 * PI).abs() < 1e-10);
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn non_compact_rejected() {
        let u = LoopAlgebraElement::constant(h_mat(), LieBackend::sl(2)).unwrap();
        assert!(matches!(
            normalize_to_section(&u, 256),
            Err(Error::NotCompact { .. })
        ));
    }

    #[test]
    fn adjoint_examples() {
        let b = LieBackend::sl(2);
        let conv = Convention::Standard;
        let g0 = from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let x = KacMoodyGroupElement::from_loop(LoopGroupElement::constant(g0).unwrap());
        let d = KacMoodyVector::d(b, conv);
        assert_eq!(hat_adjoint(&x, &d).unwrap(), d);
        let c = KacMoodyVector::c(b, conv);
        let xz = KacMoodyGroupElement::from_loop(diag_z());
        assert_eq!(hat_adjoint(&xz, &c).unwrap(), c);
        // B = iH, ⟨B, B⟩₀ = −2: Ad d = d − iH + c.
        let r = hat_adjoint(&xz, &d).unwrap();
        assert_eq!(r.loop_part.value(), &LaurentMatrix::constant(h_mat() * c64(0.0, -1.0)));
        assert!((r.r_c - c64(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(r.r_d, c64(1.0, 0.0));
        let k = KacMoody::default();
        let before = k.form(&d, &d).unwrap();
        let after = k.form(&r, &r).unwrap();
        assert!((before - after).norm() < 1e-14);
    }

    #[test]
    fn invariants_examples() {
        let b = LieBackend::sl(2);
        let z = orbit_invariants(&LoopAlgebraElement::zero(b), 256).unwrap();
        assert!(z.iter().all(|e| (e - c64(1.0, 0.0)).norm() < 1e-12));
        let th = 0.3;
        let u = LoopAlgebraElement::constant(diag(&[c64(0.0, th), c64(0.0, -th)]), b).unwrap();
        let e = orbit_invariants(&u, 256).unwrap();
        let want = [C64::from_polar(1.0, -TAU * th), C64::from_polar(1.0, TAU * th)];
        assert!(multiset_distance(&e, &want) < 1e-10);
    }

    #[test]
    fn weyl_orbit_examples() {
        let zero = SectionElement::new(vec![0.0, 0.0]).unwrap();
        let o = affine_weyl_orbit(&zero, 2);
        assert!(o.iter().all(|s| s.theta == vec![0.0, 0.0]));
        let x = SectionElement::new(vec![0.4, -0.4]).unwrap();
        let o = affine_weyl_orbit(&x, 12);
        assert!(o.iter().any(|s| s.theta == vec![-0.4, 0.4]));
        assert!(o
            .iter()
            .any(|s| (s.theta[0] - (0.4 + TAU)).abs() < 1e-15 && (s.theta[1] + 0.4 + TAU).abs() < 1e-15));
        let base = alcove_reduce_theta(&x.theta).unwrap().0;
        for s in &o {
            assert!(alcove_reduce_theta(&s.theta).unwrap().0.max_diff(&base) < 1e-12);
        }
    }

    #[test]
    fn enumeration_helpers() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(translations(2, 1), vec![vec![-1, 1], vec![1, -1]]);
        assert_eq!(translations(3, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn compose_matches_shifted_product() {
        let g = KacMoodyGroupElement::new(diag_z(), c64(1.0, 0.0), c64(0.0, 1.0)).unwrap();
        let p = g.compose(&g).unwrap();
        assert_eq!(p.w_d, c64(-1.0, 0.0));
        let z = c64(0.3, 0.8);
        let want = diag_z().evaluate(z).unwrap() * diag_z().evaluate(z * c64(0.0, 1.0)).unwrap();
        assert!(max_diff(&p.g.evaluate(z).unwrap(), &want) < 1e-14);
    }
}
