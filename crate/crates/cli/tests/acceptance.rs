//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p kmloop-cli --test acceptance -- --nocapture` to
//! see the report. Every criterion is a deterministic function of fixed
//! seeds; its metrics string is what criterion 12 compares across runs.

use std::f64::consts::{E, PI, TAU};
use std::fmt::Write as _;
use std::process::Command;
use std::time::Instant;

use kmloop_core::fixtures::{self, FixtureSpec};
use kmloop_core::kacmoody::KacMoody;
use kmloop_core::laurent::{frechet_metric, CoeffFlavor};
use kmloop_core::liealg::in_exp_image_sl2;
use kmloop_core::loopalg::tame_report_deriv;
use kmloop_core::loopgroup::{gexp, integrate_form, monodromy, GexpOptions};
use kmloop_core::matrix::{self, c64, CMat};
use kmloop_core::oracles::{oracle_abelian_monodromy, oracle_cocycle, pin_sign, GaussRat, SymMat, SymbolicLaurent};
use kmloop_core::polar::{gauge_action, hat_adjoint, multiset_distance, normalize_to_section, orbit_invariants};
use kmloop_core::{
    Convention, Error, GradingConfig, KacMoodyGroupElement, KacMoodyVector, LaurentMatrix, LieBackend,
    LoopAlgebraElement, C64,
};
use rand::Rng;

const SLACK: f64 = 1e-9;

/// One sub-check of a criterion.
struct Check {
    name: &'static str,
    pass: bool,
    metrics: String,
}

fn check(name: &'static str, pass: bool, metrics: String) -> Check {
    Check { name, pass, metrics }
}

struct Criterion {
    id: u32,
    title: &'static str,
    run: fn() -> Vec<Check>,
    /// Wall-clock budget in seconds, where one is set.
    budget: Option<f64>,
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "Kac-Moody antisymmetry and Jacobi", run: c1_jacobi, budget: Some(30.0) },
        Criterion { id: 2, title: "cocycle identities and exact oracle", run: c2_cocycle, budget: None },
        Criterion { id: 3, title: "derivative tame bound", run: c3_deriv_tame, budget: None },
        Criterion { id: 4, title: "ad tame bound", run: c4_ad_tame, budget: Some(60.0) },
        Criterion { id: 5, title: "grading sandwich", run: c5_sandwich, budget: None },
        Criterion { id: 6, title: "SL(2) exp non-surjectivity", run: c6_exp_image, budget: None },
        Criterion { id: 7, title: "gauge normalization round trip", run: c7_gauge, budget: Some(120.0) },
        Criterion { id: 8, title: "adjoint consistency", run: c8_adjoint, budget: None },
        Criterion { id: 9, title: "Ad exp = exp ad", run: c9_ad_exp, budget: None },
        Criterion { id: 10, title: "monodromy and integrability", run: c10_monodromy, budget: None },
        Criterion { id: 11, title: "Frechet metric", run: c11_metric, budget: None },
    ]
}

/// Sub-checks known to fail because the stated inequality is false; see the
/// README. They are reported but do not fail `cargo test`.
const KNOWN_FALSE: &[(u32, &str)] = &[(5, "sup <= 2 coeff_linf")];

fn km_rel(x: &KacMoodyVector) -> f64 {
    x.loop_part.value().max_coeff_abs() + x.r_c.norm() + x.r_d.norm()
}

fn c1_jacobi() -> Vec<Check> {
    let km = KacMoody::new(Convention::Standard);
    let mut r = fixtures::rng(1001);
    let specs = [
        FixtureSpec::new(2, (-4, 4), 1.0),
        FixtureSpec::new(3, (-4, 4), 1.0),
        FixtureSpec::new(2, (-4, 4), 1.0).twisted(2),
        FixtureSpec::new(3, (-4, 4), 1.0).twisted(2),
        FixtureSpec::new(3, (-4, 4), 1.0).twisted(3),
    ];
    let (mut anti, mut jac) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let spec = &specs[i % specs.len()];
        let x = fixtures::random_km(&mut r, spec, Convention::Standard).unwrap();
        let y = fixtures::random_km(&mut r, spec, Convention::Standard).unwrap();
        let w = fixtures::random_km(&mut r, spec, Convention::Standard).unwrap();
        let b = |a: &KacMoodyVector, c: &KacMoodyVector| km.bracket(a, c).unwrap();
        let a = b(&x, &y).add(&b(&y, &x)).unwrap().max_abs();
        anti = anti.max(a / (km_rel(&x) * km_rel(&y)));
        let j = b(&b(&x, &y), &w)
            .add(&b(&b(&y, &w), &x))
            .unwrap()
            .add(&b(&b(&w, &x), &y))
            .unwrap()
            .max_abs();
        jac = jac.max(j / (km_rel(&x) * km_rel(&y) * km_rel(&w)));
    }
    vec![
        check("antisymmetry", anti <= 1e-10, format!("max_rel={anti:.3e}")),
        check("jacobi", jac <= 1e-10, format!("max_rel={jac:.3e}")),
    ]
}

fn c2_cocycle() -> Vec<Check> {
    let km = KacMoody::new(Convention::Standard);
    let mut r = fixtures::rng(1002);
    let (mut anti, mut closed) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let spec = FixtureSpec::new(2 + i % 2, (-4, 4), 1.0);
        let f = fixtures::random_loop(&mut r, &spec).unwrap();
        let g = fixtures::random_loop(&mut r, &spec).unwrap();
        let h = fixtures::random_loop(&mut r, &spec).unwrap();
        let w = |a: &LoopAlgebraElement, b: &LoopAlgebraElement| km.cocycle(a, b).unwrap();
        let (nf, ng, nh) = (
            f.value().max_coeff_abs(),
            g.value().max_coeff_abs(),
            h.value().max_coeff_abs(),
        );
        anti = anti.max((w(&f, &g) + w(&g, &f)).norm() / (nf * ng));
        let c = w(&f.lbracket(&g).unwrap(), &h) + w(&g.lbracket(&h).unwrap(), &f) + w(&h.lbracket(&f).unwrap(), &g);
        closed = closed.max(c.norm() / (nf * ng * nh));
    }

    let basis = [
        SymMat::from_ints(&[&[0, 1], &[0, 0]]),
        SymMat::from_ints(&[&[0, 0], &[1, 0]]),
        SymMat::from_ints(&[&[1, 0], &[0, -1]]),
    ];
    let sign = km.sign.value() as i64;
    let mut exact = 0.0f64;
    for a in &basis {
        for b in &basis {
            for k in -3..=3 {
                for l in -3..=3 {
                    let sf = SymbolicLaurent::monomial(a.clone(), k);
                    let sg = SymbolicLaurent::monomial(b.clone(), l);
                    let f = LoopAlgebraElement::new(sf.to_laurent(), LieBackend::sl(2)).unwrap();
                    let g = LoopAlgebraElement::new(sg.to_laurent(), LieBackend::sl(2)).unwrap();
                    let (re, im) = oracle_cocycle(&sf, &sg, sign, &GaussRat::one()).to_f64();
                    exact = exact.max((km.cocycle(&f, &g).unwrap() - c64(re, im)).norm());
                }
            }
        }
    }
    let ez = LoopAlgebraElement::monomial(basis[0].to_cmat(), 1, LieBackend::sl(2)).unwrap();
    let fz = LoopAlgebraElement::monomial(basis[1].to_cmat(), -1, LieBackend::sl(2)).unwrap();
    let ef = km.cocycle(&ez, &fz).unwrap();
    let pinned = pin_sign() == Some(sign) && (ef - c64(-(sign as f64), 0.0)).norm() <= 1e-12;
    vec![
        check("antisymmetry", anti <= 1e-11, format!("max_rel={anti:.3e}")),
        check("2-cocycle", closed <= 1e-11, format!("max_rel={closed:.3e}")),
        check("oracle monomials", exact <= 1e-12, format!("max_abs={exact:.3e}")),
        check("w(Ez, F/z) = -s", pinned, format!("s={sign} value={}", ef.re)),
    ]
}

fn c3_deriv_tame() -> Vec<Check> {
    let mut r = fixtures::rng(1003);
    let mut worst = 0.0f64;
    let mut bad = 0usize;
    let mut falsified = 0usize;
    for i in 0..1000 {
        let lo = -(r.random_range(0..=4));
        let hi = r.random_range(0..=4);
        let f = fixtures::random_laurent(&mut r, 2 + i % 2, (lo, hi), 1.0);
        for row in tame_report_deriv(&f, 0..5, GradingConfig::DEFAULT_SAMPLES, 1.0).unwrap() {
            worst = worst.max(row.ratio);
            bad += usize::from(row.violates(SLACK));
        }
        if i < 50 {
            let rows = tame_report_deriv(&f, 0..5, GradingConfig::DEFAULT_SAMPLES, 0.1).unwrap();
            falsified += rows.iter().filter(|row| row.violates(SLACK)).count();
        }
    }
    let cli = Command::new(env!("CARGO_BIN_EXE_kmloop"))
        .args(["tame-check", "--kind", "deriv", "--count", "20", "--seed", "3", "--constant-scale", "0.1"])
        .output()
        .unwrap();
    let cli_ok = cli.status.code() == Some(1) && !cli.stderr.is_empty();
    vec![
        check("no violations", bad == 0, format!("violations={bad} max_ratio={worst:.6}")),
        check("scale 0.1 falsifies", falsified > 0, format!("violations={falsified}")),
        check("cli scale 0.1 exits 1", cli_ok, format!("exit={:?}", cli.status.code())),
    ]
}

fn c4_ad_tame() -> Vec<Check> {
    let km = KacMoody::new(Convention::PaperLiteral);
    let mut r = fixtures::rng(1004);
    let mut worst = 0.0f64;
    let mut bad = 0usize;
    for i in 0..500 {
        let spec = FixtureSpec::new(2 + i % 2, (-3, 3), 1.0);
        let x = fixtures::random_km(&mut r, &spec, Convention::PaperLiteral).unwrap();
        let y = fixtures::random_km(&mut r, &spec, Convention::PaperLiteral).unwrap();
        for row in km.ad_tame_report(&x, &y, 0..4, GradingConfig::DEFAULT_SAMPLES, 1.0).unwrap() {
            worst = worst.max(row.ratio);
            bad += usize::from(row.violates(SLACK));
        }
    }
    vec![check("no violations", bad == 0, format!("violations={bad} max_ratio={worst:.6}"))]
}

fn c5_sandwich() -> Vec<Check> {
    let mut r = fixtures::rng(1005);
    let (mut lit, mut lower, mut l1, mut corrected) = (0usize, 0usize, 0usize, 0usize);
    let mut worst_lit = 0.0f64;
    for i in 0..1000 {
        let lo = -(r.random_range(0..=4));
        let hi = r.random_range(0..=4);
        let f = fixtures::random_laurent(&mut r, 2 + i % 2, (lo, hi), 1.0);
        for n in 0..=4 {
            let b = f.boundary_norms(&GradingConfig::new(n));
            let linf = f.norm_coeff(n, CoeffFlavor::LInf);
            let cl1 = f.norm_coeff(n, CoeffFlavor::L1);
            let slack = 1e-6 * (1.0 + b.sup.upper);
            if b.sup.lower > 2.0 * linf + slack {
                lit += 1;
                worst_lit = worst_lit.max(b.sup.lower / (2.0 * linf));
            }
            lower += usize::from(linf > b.sup.upper + slack);
            l1 += usize::from(b.l1 > b.sup.upper + slack);
            corrected += usize::from(b.sup.lower > 2.0 * cl1 + slack);
        }
    }
    vec![
        check("sup <= 2 coeff_linf", lit == 0, format!("violations={lit} max_ratio={worst_lit:.4}")),
        check("coeff_linf <= sup", lower == 0, format!("violations={lower}")),
        check("boundary_l1 <= sup", l1 == 0, format!("violations={l1}")),
        check("sup <= 2 coeff_l1 (informational)", corrected == 0, format!("violations={corrected}")),
    ]
}

/// `[[e^{πz/n}, −iz/n], [0, e^{−πz/n}]]` as a closed-form matrix.
fn f_n_at(n: u32, z: C64) -> CMat {
    let a = z * (PI / n as f64);
    CMat::from_row_slice(2, 2, &[a.exp(), -c64(0.0, 1.0) * z / n as f64, c64(0.0, 0.0), (-a).exp()])
}

/// `f_n − Id` as a Laurent polynomial, exponentials cut at degree 60.
fn f_n_minus_id(n: u32) -> LaurentMatrix {
    let mut coeffs = Vec::new();
    let mut fact = 1.0;
    for k in 0..=60 {
        if k > 0 {
            fact *= k as f64;
        }
        let t = (PI / n as f64).powi(k) / fact;
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut m = CMat::zeros(2, 2);
        if k > 0 {
            m[(0, 0)] = c64(t, 0.0);
            m[(1, 1)] = c64(sgn * t, 0.0);
        }
        if k == 1 {
            m[(0, 1)] = c64(0.0, -1.0 / n as f64);
        }
        coeffs.push(m);
    }
    LaurentMatrix::from_coeffs(2, 0, coeffs).unwrap()
}

fn c6_exp_image() -> Vec<Check> {
    let target = matrix::from_real_rows(&[&[-1.0, 1.0], &[0.0, -1.0]]);
    let mut outside = true;
    let mut dev = 0.0f64;
    for n in 1..=6 {
        let m = f_n_at(n, c64(0.0, n as f64));
        dev = dev.max(matrix::max_diff(&m, &target));
        outside &= !in_exp_image_sl2(&m).unwrap();
    }
    let cfg = GradingConfig::new(1);
    let norms: Vec<f64> = [8u32, 16, 32, 64]
        .iter()
        .map(|&n| f_n_minus_id(n).norm_sup(&cfg).upper)
        .collect();
    let decreasing = norms.windows(2).all(|w| w[1] < w[0]);
    // Entrywise: |e^{±πz/n} − 1| ≤ e^{πe/n} − 1 and |z/n| ≤ e/n on A_1.
    let bound_ok = [8u32, 16, 32, 64].iter().zip(&norms).all(|(&n, s)| {
        let diag = (PI * E / n as f64).exp() - 1.0;
        let off = E / n as f64;
        *s <= (2.0 * diag * diag + off * off).sqrt()
    });
    let last = norms[3];
    vec![
        check("not in exp image n=1..6", outside && dev <= 1e-14, format!("max_dev={dev:.2e}")),
        check(
            "sup(f_n - Id) decreasing, < 0.2 at 64",
            decreasing && last < 0.2 && bound_ok,
            format!("sups={norms:.6?} first_order(64)={:.4}", (PI * E + E) / 64.0),
        ),
    ]
}

fn c7_gauge() -> Vec<Check> {
    let mut r = fixtures::rng(1007);
    let b = LieBackend::sl(2);
    let (mut sec, mut res, mut eig) = (0.0f64, 0.0f64, 0.0f64);
    let mut errors = 0usize;
    for _ in 0..200 {
        let g = fixtures::random_based_su2_loop(&mut r).unwrap();
        let g2 = fixtures::random_based_su2_loop(&mut r).unwrap();
        let x = fixtures::random_section(&mut r, 2).unwrap();
        let xl = LoopAlgebraElement::constant(x.loop_value(), b).unwrap();
        let u = gauge_action(&g, &xl).unwrap();
        match normalize_to_section(&u, 4096) {
            Ok(out) => {
                sec = sec.max(out.section.max_diff(&x));
                res = res.max(out.residual);
            }
            Err(_) => errors += 1,
        }
        let v = gauge_action(&g2, &u).unwrap();
        let iu = orbit_invariants(&u, 512).unwrap();
        eig = eig
            .max(multiset_distance(&iu, &orbit_invariants(&xl, 512).unwrap()))
            .max(multiset_distance(&iu, &orbit_invariants(&v, 512).unwrap()));
    }
    vec![
        check("section recovered", errors == 0 && sec <= 1e-6, format!("errors={errors} max_diff={sec:.3e}")),
        check("residual", res <= 1e-6, format!("max={res:.3e}")),
        check("monodromy spectra", eig <= 1e-8, format!("max={eig:.3e}")),
    ]
}

fn c8_adjoint() -> Vec<Check> {
    let mut r = fixtures::rng(1008);
    let b = LieBackend::sl(2);
    let conv = Convention::Standard;
    let km = KacMoody::new(conv);
    let spec = FixtureSpec::new(2, (-2, 2), 0.5);
    let (mut gauge, mut fix_c, mut iso, mut hom) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let g = fixtures::random_based_su2_loop(&mut r).unwrap();
        let x = KacMoodyGroupElement::from_loop(g.clone());
        let u = fixtures::random_loop(&mut r, &spec).unwrap();
        let ud = KacMoodyVector::new(u.clone(), c64(0.0, 0.0), c64(1.0, 0.0), conv);
        let img = hat_adjoint(&x, &ud).unwrap();
        let ga = gauge_action(&g, &u).unwrap();
        gauge = gauge
            .max(img.loop_part.value().max_coeff_diff(ga.value()))
            .max((img.r_d - c64(1.0, 0.0)).norm());

        let c = KacMoodyVector::c(b, conv);
        fix_c = fix_c.max(hat_adjoint(&x, &c).unwrap().sub(&c).unwrap().max_abs());

        let y1 = fixtures::random_km(&mut r, &spec, conv).unwrap();
        let y2 = fixtures::random_km(&mut r, &spec, conv).unwrap();
        let before = km.form(&y1, &y2).unwrap();
        let after = km.form(&hat_adjoint(&x, &y1).unwrap(), &hat_adjoint(&x, &y2).unwrap()).unwrap();
        iso = iso.max((before - after).norm() / (1.0 + before.norm()));

        let w = C64::from_polar(1.0, r.random_range(0.0..TAU));
        let x2 = KacMoodyGroupElement::new(fixtures::random_based_su2_loop(&mut r).unwrap(), c64(1.0, 0.0), w).unwrap();
        let both = hat_adjoint(&x.compose(&x2).unwrap(), &y1).unwrap();
        let step = hat_adjoint(&x, &hat_adjoint(&x2, &y1).unwrap()).unwrap();
        hom = hom
            .max(both.loop_part.value().max_coeff_diff(step.loop_part.value()))
            .max((both.r_d - step.r_d).norm());
    }
    vec![
        check("loop part = gauge action", gauge <= 1e-12, format!("max={gauge:.3e}")),
        check("Ad fixes c", fix_c <= 1e-12, format!("max={fix_c:.3e}")),
        check("isometry", iso <= 1e-8, format!("max_rel={iso:.3e}")),
        check("homomorphism", hom <= 1e-8, format!("max={hom:.3e}")),
    ]
}

fn c9_ad_exp() -> Vec<Check> {
    let mut r = fixtures::rng(1009);
    let cfg = GradingConfig::new(1);
    let opts = GexpOptions {
        window: (-14, 14),
        samples: 128,
        ..GexpOptions::default()
    };
    let mut worst = 0.0f64;
    for i in 0..10 {
        let spec = FixtureSpec::new(2 + i % 2, (-2, 2), 1.0);
        let f = fixtures::random_loop(&mut r, &spec).unwrap();
        let u = fixtures::random_loop(&mut r, &spec).unwrap();
        let f = f.scale(c64(0.1 / f.value().norm_sup(&cfg).upper, 0.0));
        let u = u.scale(c64(0.1 / u.value().norm_sup(&cfg).upper, 0.0));
        let g = gexp(f.value(), &opts).unwrap().value;
        for _ in 0..50 {
            let z = C64::from_polar(r.random_range(-1.0f64..1.0).exp(), r.random_range(0.0..TAU));
            let gz = g.evaluate(z).unwrap();
            let uz = u.evaluate(z).unwrap();
            let lhs = &gz * &uz * matrix::inverse(&gz).unwrap();
            let fz = f.evaluate(z).unwrap();
            let mut term = uz.clone();
            let mut rhs = uz;
            for k in 1..=12 {
                term = matrix::commutator(&fz, &term) / c64(k as f64, 0.0);
                rhs += &term;
            }
            worst = worst.max(matrix::max_diff(&lhs, &rhs));
        }
    }
    vec![check("pointwise agreement", worst <= 1e-8, format!("max={worst:.3e}"))]
}

fn c10_monodromy() -> Vec<Check> {
    let mut r = fixtures::rng(1010);
    let mut round = 0.0f64;
    for i in 0..100 {
        let g = fixtures::random_unipotent_product(&mut r, 2 + i % 2, 0.3).unwrap();
        let alpha = g.log_derivative().unwrap();
        let g0 = g.evaluate(c64(1.0, 0.0)).unwrap();
        let out = integrate_form(alpha.value(), &g0, 256).unwrap();
        for (j, v) in out.samples.values.iter().enumerate() {
            round = round.max(matrix::max_diff(v, &g.evaluate(out.samples.point(j)).unwrap()));
        }
    }

    let mut abelian = 0.0f64;
    for _ in 0..50 {
        let d = 2 + r.random_range(0..2usize);
        let terms: Vec<CMat> = (-2..=2)
            .map(|_| {
                let diag: Vec<C64> = (0..d).map(|_| fixtures::random_c64(&mut r, 0.5)).collect();
                CMat::from_fn(d, d, |i, j| if i == j { diag[i] } else { c64(0.0, 0.0) })
            })
            .collect();
        let alpha = LaurentMatrix::from_coeffs(d, -2, terms).unwrap();
        let want = oracle_abelian_monodromy(&alpha).unwrap();
        let got = monodromy(&alpha, 1024).unwrap().transport;
        abelian = abelian.max(matrix::max_diff(&got, &want));
    }

    let h = matrix::from_real_rows(&[&[0.5, 0.0], &[0.0, -0.5]]);
    let alpha = LaurentMatrix::monomial(h, -1);
    let m = monodromy(&alpha, 256).unwrap();
    let obstructed = !m.integrable
        && matrix::max_diff(&m.transport, &-matrix::identity(2)) <= 1e-9
        && matches!(
            integrate_form(&alpha, &matrix::identity(2), 256),
            Err(Error::MonodromyObstruction { .. })
        );
    vec![
        check("integrate . log_derivative", round <= 1e-7, format!("max={round:.3e}")),
        check("abelian closed form", abelian <= 1e-9, format!("max={abelian:.3e}")),
        check("H/(2z) obstructed", obstructed, format!("integrable={}", m.integrable)),
    ]
}

fn c11_metric() -> Vec<Check> {
    const TERMS: u32 = 8;
    let samples = GradingConfig::DEFAULT_SAMPLES;
    let mut r = fixtures::rng(1011);
    let (mut max_d, mut self_d, mut tri) = (0.0f64, 0.0f64, 0usize);
    for i in 0..500 {
        let d = 2 + i % 2;
        let lo = -(r.random_range(0..=3));
        let hi = r.random_range(0..=3);
        let f = fixtures::random_laurent(&mut r, d, (lo, hi), 1.0);
        let g = fixtures::random_laurent(&mut r, d, (lo, hi), 1.0);
        let h = fixtures::random_laurent(&mut r, d, (lo, hi), 1.0);
        let m = |a: &LaurentMatrix, b: &LaurentMatrix| frechet_metric(a, b, TERMS, samples).unwrap();
        let (fg, gh, fh) = (m(&f, &g), m(&g, &h), m(&f, &h));
        max_d = max_d.max(fg.upper).max(gh.upper).max(fh.upper);
        self_d = self_d.max(m(&f, &f).upper);
        tri += usize::from(fh.lower > fg.upper + gh.upper + SLACK);
    }
    let tail = 0.5f64.powi(TERMS as i32 - 1);

    // z^k/k! against 0 on A_0..A_3: each seminorm e^{nk}/k! decreases once k + 1 > e^3.
    let start = (1..).find(|&k: &i32| (k + 1) as f64 > E.powi(3)).unwrap() + 1;
    let zero = LaurentMatrix::zero(2);
    let mut inv_fact = 1.0f64;
    let mut ds = Vec::new();
    for k in 1..=100 {
        inv_fact /= k as f64;
        if k >= start {
            let f = LaurentMatrix::monomial(matrix::identity(2) * c64(inv_fact, 0.0), k);
            ds.push(frechet_metric(&f, &zero, 4, samples).unwrap().lower);
        }
    }
    let monotone = ds.windows(2).all(|w| w[1] < w[0]);
    let last = *ds.last().unwrap();
    vec![
        check("d <= 2", max_d <= 2.0, format!("max={max_d:.6}")),
        check("d(f,f) <= tail", self_d <= tail + 1e-15, format!("max={self_d:.3e} tail={tail:.3e}")),
        check("triangle inequality", tri == 0, format!("violations={tri}")),
        check(
            "z^k/k! -> 0 monotonically past the index",
            monotone && last < 1e-25,
            format!("index={start} d(index)={:.3e} d(100)={last:.3e}", ds[0]),
        ),
    ]
}

fn cli_battery() -> Vec<u8> {
    let dir = std::env::temp_dir().join(format!("kmloop-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let zi = dir.join("zi.json");
    std::fs::write(&zi, r#"{"dim":2,"k_min":1,"k_max":1,"coeffs":[[1,0,0,1]]}"#).unwrap();
    let zi = zi.to_str().unwrap();
    let runs: &[&[&str]] = &[
        &["norms", "--in", zi],
        &["--format", "csv", "norms", "--in", zi],
        &["tame-check", "--kind", "deriv", "--count", "5", "--seed", "9"],
        &["--convention", "paper_literal", "tame-check", "--kind", "ad", "--count", "3", "--seed", "9"],
        &["fixtures", "--count", "3", "--seed", "11", "--dim", "3", "--twist", "2", "--real"],
        &["fixtures", "--mint-examples"],
        &["monodromy", "--in", zi],
    ];
    let mut out = Vec::new();
    for args in runs {
        let o = Command::new(env!("CARGO_BIN_EXE_kmloop")).args(*args).output().unwrap();
        out.extend_from_slice(&o.stdout);
        out.extend_from_slice(format!("exit={:?}\n", o.status.code()).as_bytes());
    }
    let _ = std::fs::remove_dir_all(&dir);
    out
}

/// The metrics text, every check tagged with its criterion, and timings.
type SuiteRun = (String, Vec<(u32, Check)>, Vec<(u32, f64)>);

fn suite_report() -> SuiteRun {
    let mut report = String::new();
    let mut checks = Vec::new();
    let mut times = Vec::new();
    for c in criteria() {
        let t = Instant::now();
        let result = (c.run)();
        times.push((c.id, t.elapsed().as_secs_f64()));
        for ch in result {
            writeln!(report, "{} {} {} {}", c.id, ch.name, ch.pass, ch.metrics).unwrap();
            checks.push((c.id, ch));
        }
    }
    (report, checks, times)
}

#[test]
fn acceptance() {
    let (first, checks, times) = suite_report();
    let mut failures = Vec::new();
    for c in criteria() {
        let secs = times.iter().find(|t| t.0 == c.id).unwrap().1;
        let within = c.budget.is_none_or(|b| secs < b);
        let mine: Vec<&Check> = checks.iter().filter(|(id, _)| *id == c.id).map(|(_, ch)| ch).collect();
        let pass = within && mine.iter().all(|ch| ch.pass);
        println!(
            "criterion {:>2} {:<40} {}  [{:.2}s{}]",
            c.id,
            c.title,
            if pass { "PASS" } else { "FAIL" },
            secs,
            c.budget.map(|b| format!(" / {b:.0}s")).unwrap_or_default()
        );
        for ch in &mine {
            let known = KNOWN_FALSE.contains(&(c.id, ch.name));
            println!(
                "    {} {}: {}{}",
                if ch.pass { "PASS" } else { "FAIL" },
                ch.name,
                ch.metrics,
                if known && !ch.pass { " (known false, see README)" } else { "" }
            );
            if !ch.pass && !known {
                failures.push(format!("criterion {} {}: {}", c.id, ch.name, ch.metrics));
            }
        }
        if !within {
            failures.push(format!("criterion {} over budget: {secs:.2}s", c.id));
        }
    }

    let t = Instant::now();
    let (second, _, _) = suite_report();
    let same_suite = first == second;
    let same_cli = cli_battery() == cli_battery();
    let pass = same_suite && same_cli;
    println!(
        "criterion 12 {:<40} {}  [{:.2}s]",
        "determinism",
        if pass { "PASS" } else { "FAIL" },
        t.elapsed().as_secs_f64()
    );
    println!("    {} suite report identical across runs", if same_suite { "PASS" } else { "FAIL" });
    println!("    {} cli output identical across runs", if same_cli { "PASS" } else { "FAIL" });
    if !pass {
        failures.push("criterion 12 determinism".into());
    }
    assert!(failures.is_empty(), "acceptance failures:\n{}", failures.join("\n"));
}
