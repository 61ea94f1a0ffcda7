use std::path::Path;

use kmloop_core::fixtures::{self, FixtureSpec};
use kmloop_core::json;
use kmloop_core::kacmoody::KacMoody;
use kmloop_core::laurent::{frechet_metric, CoeffFlavor, GradingConfig};
use kmloop_core::liealg::in_exp_image_sl2;
use kmloop_core::loopalg::tame_report_deriv;
use kmloop_core::loopgroup::{integrate_form, monodromy};
use kmloop_core::matrix::{self, c64};
use kmloop_core::oracles;
use kmloop_core::polar::{hat_adjoint, normalize_to_section};
use kmloop_core::{Convention, KacMoodyVector, LaurentMatrix, LoopAlgebraElement};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{Report, Table};
use crate::{Cli, CliError, Command, FixtureArgs, TameArgs, TameKind};

/// Ratios above `1 + SLACK` count as violations.
pub const SLACK: f64 = 1e-9;

/// A finished command: the report plus the exit code and any diagnostics
/// for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
    pub diagnostics: Vec<String>,
}

struct Ctx {
    cfg: RunConfig,
}

impl Ctx {
    fn report(&self, command: &str, table: Option<Table>, result: Value) -> Report {
        Report {
            command: command.into(),
            config_hash: self.cfg.hash(),
            version: env!("CARGO_PKG_VERSION").into(),
            table,
            result,
        }
    }

    fn ok(&self, command: &str, table: Option<Table>, result: Value) -> Outcome {
        Outcome {
            report: self.report(command, table, result),
            exit_code: 0,
            diagnostics: Vec::new(),
        }
    }

    fn km(&self) -> KacMoody {
        KacMoody::with_sign(self.cfg.convention(), self.cfg.sign())
    }

    fn grading(&self, n: u32) -> Result<GradingConfig, CliError> {
        Ok(GradingConfig::with_samples(n, self.cfg.boundary_samples)?)
    }

    /// Reads a JSON file, filling in a missing backend from the config.
    fn read(&self, path: &Path) -> Result<Value, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        let mut v = json::parse(&text)?;
        if let Value::Object(m) = &mut v {
            if let (Some(dim), None) = (m.get("dim").and_then(Value::as_u64), m.get("backend")) {
                m.insert(
                    "backend".into(),
                    json!({"series": "A", "n": dim, "lambda": self.cfg.lambda}),
                );
            }
        }
        Ok(v)
    }

    fn read_loop(&self, path: &Path) -> Result<LoopAlgebraElement, CliError> {
        Ok(json::loop_from_json(&self.read(path)?)?)
    }

    fn read_km(&self, path: &Path) -> Result<KacMoodyVector, CliError> {
        Ok(json::km_from_json(&self.read(path)?, self.cfg.convention())?)
    }

    fn read_laurent(&self, path: &Path) -> Result<LaurentMatrix, CliError> {
        Ok(json::laurent_from_json(&self.read(path)?)?)
    }

    fn spec(&self, a: &FixtureArgs) -> Result<FixtureSpec, CliError> {
        let spec = FixtureSpec {
            n: a.dim,
            window: (a.k_min, a.k_max),
            scale: a.scale,
            twist: a.twist,
            real_form: a.real,
        };
        fixtures::validate_spec(&spec)?;
        Ok(spec)
    }

    fn loops(&self, a: &FixtureArgs) -> Result<Vec<LoopAlgebraElement>, CliError> {
        let spec = self.spec(a)?;
        let backend = kmloop_core::LieBackend::with_lambda(spec.n, self.cfg.lambda)?;
        let mut r = fixtures::rng(a.seed);
        (0..a.count)
            .map(|_| {
                let x = fixtures::random_loop(&mut r, &spec)?;
                Ok(LoopAlgebraElement::from_parts(
                    x.value().clone(),
                    backend,
                    x.twist(),
                    x.real_form(),
                )?)
            })
            .collect()
    }
}

fn check_range(from: u32, to: u32) -> Result<(), CliError> {
    if from > to {
        return Err(CliError::Input(format!("empty range --n-from {from} --n-to {to}")));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::load(cli.config.as_deref(), cli.convention.as_deref())?;
    let ctx = Ctx { cfg };
    match &cli.command {
        Command::Norms { input, n_from, n_to } => norms(&ctx, input, *n_from, *n_to),
        Command::TameCheck(args) => tame_check(&ctx, args),
        Command::Cocycle { x, y } => {
            let (f, g) = (ctx.read_loop(x)?, ctx.read_loop(y)?);
            let km = ctx.km();
            let v = km.cocycle(&f, &g)?;
            Ok(ctx.ok(
                "cocycle",
                None,
                json!({"value": json::c64_to_json(v), "sign": km.sign.value()}),
            ))
        }
        Command::Bracket { x, y } => {
            let b = ctx.km().bracket(&ctx.read_km(x)?, &ctx.read_km(y)?)?;
            Ok(ctx.ok("bracket", None, json::km_to_json(&b)))
        }
        Command::Ad { x, y } => {
            let g = json::group_from_json(&ctx.read(x)?)?;
            let out = hat_adjoint(&g, &ctx.read_km(y)?)?;
            Ok(ctx.ok("ad", None, json::km_to_json(&out)))
        }
        Command::GaugeNormalize { input, steps } => {
            let u = ctx.read_loop(input)?;
            let res = normalize_to_section(&u, *steps)?;
            Ok(ctx.ok(
                "gauge-normalize",
                None,
                json!({
                    "section": res.section.theta,
                    "residual": res.residual,
                    "closure_defect": res.closure_defect,
                    "monodromy_eigenvalues": res.monodromy_eigenvalues.iter().map(|z| json::c64_to_json(*z)).collect::<Vec<_>>(),
                    "steps": steps,
                }),
            ))
        }
        Command::Monodromy { input, steps } => {
            let alpha = ctx.read_laurent(input)?;
            let m = monodromy(&alpha, *steps)?;
            Ok(ctx.ok(
                "monodromy",
                None,
                json!({
                    "transport": json::matrix_to_json(&m.transport),
                    "residue_coeff": json::matrix_to_json(&m.residue_coeff),
                    "integrable": m.integrable,
                    "steps": m.step_count,
                    "error_estimate": m.error_estimate,
                }),
            ))
        }
        Command::Integrate {
            input,
            g0,
            steps,
            k_min,
            k_max,
        } => {
            let alpha = ctx.read_laurent(input)?;
            let g0 = match g0 {
                Some(p) => json::matrix_from_json(&ctx.read(p)?)?,
                None => matrix::identity(alpha.dim()),
            };
            let out = integrate_form(&alpha, &g0, *steps)?;
            let mut result = json!({
                "closure_defect": out.closure_defect,
                "samples": json::samples_to_json(&out.samples),
                "transport": json::matrix_to_json(&out.monodromy.transport),
            });
            if let (Some(lo), Some(hi)) = (k_min, k_max) {
                let fit = out.refit((*lo, *hi))?;
                result["fit"] = json!({"value": json::laurent_to_json(&fit.value), "residual": fit.residual});
            }
            Ok(ctx.ok("integrate", None, result))
        }
        Command::ExpImage { input } => {
            let m = json::matrix_from_json(&ctx.read(input)?)?;
            let inside = in_exp_image_sl2(&m)?;
            Ok(ctx.ok(
                "exp-image",
                None,
                json!({"in_image": inside, "trace": json::c64_to_json(matrix::trace(&m))}),
            ))
        }
        Command::Metric { x, y, n_terms } => {
            let d = frechet_metric(
                &ctx.read_laurent(x)?,
                &ctx.read_laurent(y)?,
                *n_terms,
                ctx.cfg.boundary_samples,
            )?;
            Ok(ctx.ok("metric", None, json!({"lower": d.lower, "upper": d.upper, "n_terms": n_terms})))
        }
        Command::Fixtures { spec, mint_examples } => {
            if *mint_examples {
                return Ok(ctx.ok("fixtures", None, mint()?));
            }
            let out: Vec<Value> = ctx.loops(spec)?.iter().map(json::loop_to_json).collect();
            Ok(ctx.ok(
                "fixtures",
                None,
                json!({"seed": spec.seed, "prng": "ChaCha8", "elements": out}),
            ))
        }
    }
}

fn norms(ctx: &Ctx, input: &Path, from: u32, to: u32) -> Result<Outcome, CliError> {
    check_range(from, to)?;
    let f = ctx.read_laurent(input)?;
    let mut t = Table::new(&["n", "sup", "coeff_l1", "coeff_linf", "boundary_l1"]);
    for n in from..=to {
        let b = f.boundary_norms(&ctx.grading(n)?);
        t.push(vec![
            n as f64,
            b.sup.lower,
            f.norm_coeff(n, CoeffFlavor::L1),
            f.norm_coeff(n, CoeffFlavor::LInf),
            b.l1,
        ]);
    }
    Ok(ctx.ok("norms", Some(t), Value::Null))
}

fn tame_check(ctx: &Ctx, a: &TameArgs) -> Result<Outcome, CliError> {
    check_range(a.n_from, a.n_to)?;
    let ns = a.n_from..=a.n_to;
    let samples = ctx.cfg.boundary_samples;
    let mut t = Table::new(&["fixture", "n", "lhs", "bound", "ratio"]);
    match a.kind {
        TameKind::Deriv => {
            let elements: Vec<LaurentMatrix> = match &a.input {
                Some(p) => vec![ctx.read_laurent(p)?],
                None => ctx.loops(&a.fixture)?.into_iter().map(|x| x.into_value()).collect(),
            };
            for (i, f) in elements.iter().enumerate() {
                for row in tame_report_deriv(f, ns.clone(), samples, a.constant_scale)? {
                    t.push(vec![i as f64, row.n as f64, row.lhs, row.bound, row.ratio]);
                }
            }
        }
        TameKind::Ad => {
            let km = ctx.km();
            let pairs: Vec<(KacMoodyVector, KacMoodyVector)> = match (&a.x, &a.y) {
                (Some(x), Some(y)) => vec![(ctx.read_km(x)?, ctx.read_km(y)?)],
                _ => {
                    let spec = ctx.spec(&a.fixture)?;
                    let mut r = fixtures::rng(a.fixture.seed);
                    let conv = ctx.cfg.convention();
                    (0..a.fixture.count)
                        .map(|_| {
                            let x = fixtures::random_km(&mut r, &spec, conv)?;
                            let y = fixtures::random_km(&mut r, &spec, conv)?;
                            Ok((x, y))
                        })
                        .collect::<Result<_, CliError>>()?
                }
            };
            for (i, (x, y)) in pairs.iter().enumerate() {
                for row in km.ad_tame_report(x, y, ns.clone(), samples, a.constant_scale)? {
                    t.push(vec![i as f64, row.n as f64, row.lhs, row.bound, row.ratio]);
                }
            }
        }
    }
    let bad: Vec<&Vec<f64>> = t
        .rows
        .iter()
        .filter(|r| r[4] > 1.0 + SLACK || r[4].is_nan())
        .collect();
    let max_ratio = t.rows.iter().map(|r| r[4]).fold(0.0, f64::max);
    let diagnostics = bad
        .iter()
        .map(|r| format!("violation: fixture {} n {} ratio {}", r[0], r[1], r[4]))
        .collect::<Vec<_>>();
    let result = json!({
        "kind": match a.kind { TameKind::Deriv => "deriv", TameKind::Ad => "ad" },
        "constant_scale": a.constant_scale,
        "max_ratio": max_ratio,
        "violations": bad.len(),
    });
    let exit_code = if bad.is_empty() { 0 } else { 1 };
    Ok(Outcome {
        report: ctx.report("tame-check", Some(t), result),
        exit_code,
        diagnostics,
    })
}

/// Example values produced by the independent oracles.
fn mint() -> Result<Value, CliError> {
    use oracles::{GaussRat, SymMat, SymbolicLaurent};
    let e = SymMat::from_ints(&[&[0, 1], &[0, 0]]);
    let f = SymMat::from_ints(&[&[0, 0], &[1, 0]]);
    let h = matrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let cocycle = oracles::oracle_cocycle(
        &SymbolicLaurent::monomial(e, 1),
        &SymbolicLaurent::monomial(f, -1),
        1,
        &GaussRat::one(),
    );
    let abelian = |a: LaurentMatrix| -> Result<Value, CliError> {
        Ok(json::matrix_to_json(&oracles::oracle_abelian_monodromy(&a)?))
    };
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(json!({
        "cocycle_Ez_Finv_sign_plus": cocycle.to_string(),
        "pinned_sign_standard": oracles::pin_sign(),
        "invariant_sign_paper_literal": oracles::literal_convention_invariant_sign(),
        "abelian_monodromy": {
            "diag(1,-1)/z": abelian(LaurentMatrix::monomial(h.clone(), -1))?,
            "zero": abelian(LaurentMatrix::zero(2))?,
            "H/(2z)": abelian(LaurentMatrix::monomial(h * c64(0.5, 0.0), -1))?,
        },
        "alcove": {
            "0,0": oracles::oracle_alcove(&[0.0, 0.0], 3)?,
            "0.3,-0.3": oracles::oracle_alcove(&[0.3, -0.3], 3)?,
            "2pi+0.1,-2pi-0.1": oracles::oracle_alcove(&[two_pi + 0.1, -two_pi - 0.1], 3)?,
            "1.2pi,-1.2pi": oracles::oracle_alcove(&[0.6 * two_pi, -0.6 * two_pi], 3)?,
        },
        "convention": Convention::Standard.as_str(),
    }))
}
