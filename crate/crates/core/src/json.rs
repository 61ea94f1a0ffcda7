//! JSON encodings shared by the CLI and tests.
//!
//! - complex number: `[re, im]`
//! - matrix: row-major list of complex numbers (a nested list of rows is also
//!   accepted on input)
//! - Laurent matrix: `{"dim", "k_min", "k_max", "coeffs": [matrix per degree]}`;
//!   the zero element has `k_min = 0`, `k_max = -1` and no coefficients
//! - loop element: Laurent fields plus `"backend": {"series":"A","n","lambda"}`,
//!   `"twist": {"order": m} | null`, `"real_form": bool`
//! - Kac-Moody vector: loop fields plus `"r_c"`, `"r_d"`, `"convention"`
//! - group element: `{"g": laurent, "w_c", "w_d"}`
//! - sampled loop: `{"radius", "samples": [matrix…]}` at angles `2πj/N`

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::kacmoody::KacMoodyVector;
use crate::laurent::{CircleSamples, Convention, LaurentMatrix};
use crate::liealg::{DiagramAutomorphism, LieBackend};
use crate::loopalg::LoopAlgebraElement;
use crate::loopgroup::LoopGroupElement;
use crate::matrix::{c64, CMat, C64};
use crate::polar::KacMoodyGroupElement;

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn as_f64(v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(format!("expected a number, got {v}")))
}

fn as_i64(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad(format!("expected an integer, got {v}")))
}

pub fn c64_to_json(z: C64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

/// `[re, im]` or a bare real number.
pub fn c64_from_json(v: &Value) -> Result<C64> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok(c64(as_f64(&a[0])?, as_f64(&a[1])?)),
        Value::Number(_) => Ok(c64(as_f64(v)?, 0.0)),
        _ => Err(bad(format!("expected [re, im], got {v}"))),
    }
}

pub fn matrix_to_json(m: &CMat) -> Value {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(c64_to_json(m[(i, j)]));
        }
    }
    Value::Array(out)
}

pub fn matrix_from_json(v: &Value) -> Result<CMat> {
    let a = v.as_array().ok_or_else(|| bad("matrix must be an array"))?;
    // A row holds arrays, or numbers not shaped like one `[re, im]` pair of
    // a flat list whose length is a perfect square.
    let square = |n: usize| {
        let d = (n as f64).sqrt().round() as usize;
        d * d == n
    };
    let nested = a.first().and_then(Value::as_array).is_some_and(|row| {
        row.first().is_some_and(Value::is_array) || row.len() != 2 || !square(a.len())
    });
    let flat: Vec<C64> = if nested {
        let mut out = Vec::new();
        for row in a {
            let row = row.as_array().ok_or_else(|| bad("matrix row must be an array"))?;
            if row.len() != a.len() {
                return Err(bad("matrix must be square"));
            }
            for x in row {
                out.push(c64_from_json(x)?);
            }
        }
        out
    } else {
        a.iter().map(c64_from_json).collect::<Result<_>>()?
    };
    let d = (flat.len() as f64).sqrt().round() as usize;
    if d == 0 || d * d != flat.len() {
        return Err(bad(format!("{} entries do not form a square matrix", flat.len())));
    }
    Ok(CMat::from_fn(d, d, |i, j| flat[i * d + j]))
}

fn laurent_fields(f: &LaurentMatrix) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("dim".into(), json!(f.dim()));
    let (lo, hi) = if f.is_zero() { (0, -1) } else { (f.k_min(), f.k_max()) };
    m.insert("k_min".into(), json!(lo));
    m.insert("k_max".into(), json!(hi));
    let coeffs = if f.is_zero() { Vec::new() } else { f.coeffs().iter().map(matrix_to_json).collect() };
    m.insert("coeffs".into(), Value::Array(coeffs));
    m
}

pub fn laurent_to_json(f: &LaurentMatrix) -> Value {
    Value::Object(laurent_fields(f))
}

pub fn laurent_from_json(v: &Value) -> Result<LaurentMatrix> {
    let dim = as_i64(get(v, "dim")?)?;
    if dim < 1 {
        return Err(bad(format!("dim must be positive, got {dim}")));
    }
    let dim = dim as usize;
    let k_min = as_i64(get(v, "k_min")?)? as i32;
    let k_max = as_i64(get(v, "k_max")?)? as i32;
    let coeffs = get(v, "coeffs")?
        .as_array()
        .ok_or_else(|| bad("coeffs must be an array"))?;
    let expected = (k_max as i64 - k_min as i64 + 1).max(0) as usize;
    if coeffs.len() != expected {
        return Err(bad(format!(
            "window [{k_min}, {k_max}] needs {expected} coefficients, found {}",
            coeffs.len()
        )));
    }
    if coeffs.is_empty() {
        return Ok(LaurentMatrix::zero(dim));
    }
    let mats = coeffs.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
    if let Some(m) = mats.iter().find(|m| m.nrows() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: m.nrows(),
        });
    }
    LaurentMatrix::from_coeffs(dim, k_min, mats)
}

pub fn backend_to_json(b: &LieBackend) -> Value {
    json!({"series": b.series(), "n": b.n(), "lambda": num(b.lambda())})
}

pub fn backend_from_json(v: &Value) -> Result<LieBackend> {
    if let Some(s) = v.get("series").and_then(Value::as_str) {
        if s != "A" {
            return Err(Error::BackendMismatch(format!("series {s} is not supported")));
        }
    }
    let n = as_i64(get(v, "n")?)?;
    let lambda = v.get("lambda").map(as_f64).transpose()?.unwrap_or(1.0);
    LieBackend::with_lambda(n.max(0) as usize, lambda)
}

fn loop_fields(x: &LoopAlgebraElement) -> Map<String, Value> {
    let mut m = laurent_fields(x.value());
    m.insert("backend".into(), backend_to_json(x.backend()));
    m.insert(
        "twist".into(),
        match x.twist() {
            Some(a) => json!({"order": a.order()}),
            None => Value::Null,
        },
    );
    m.insert("real_form".into(), json!(x.real_form()));
    m
}

pub fn loop_to_json(x: &LoopAlgebraElement) -> Value {
    Value::Object(loop_fields(x))
}

/// Missing `backend` defaults to `sl(dim)` with `λ = 1`; flags default off.
pub fn loop_from_json(v: &Value) -> Result<LoopAlgebraElement> {
    let value = laurent_from_json(v)?;
    let backend = match v.get("backend") {
        Some(b) if !b.is_null() => backend_from_json(b)?,
        _ => LieBackend::with_lambda(value.dim(), 1.0)?,
    };
    let twist = match v.get("twist") {
        Some(t) if !t.is_null() => {
            let order = as_i64(get(t, "order")?)?;
            Some(DiagramAutomorphism::new(order.max(0) as u32, backend.n())?)
        }
        _ => None,
    };
    let real_form = v.get("real_form").and_then(Value::as_bool).unwrap_or(false);
    LoopAlgebraElement::from_parts(value, backend, twist, real_form)
}

pub fn km_to_json(x: &KacMoodyVector) -> Value {
    let mut m = loop_fields(&x.loop_part);
    m.insert("r_c".into(), c64_to_json(x.r_c));
    m.insert("r_d".into(), c64_to_json(x.r_d));
    m.insert("convention".into(), json!(x.convention.as_str()));
    Value::Object(m)
}

/// Missing `r_c`/`r_d` read as zero; a missing convention falls back to `default`.
pub fn km_from_json(v: &Value, default: Convention) -> Result<KacMoodyVector> {
    let loop_part = loop_from_json(v)?;
    let r_c = v.get("r_c").map(c64_from_json).transpose()?.unwrap_or_default();
    let r_d = v.get("r_d").map(c64_from_json).transpose()?.unwrap_or_default();
    let convention = match v.get("convention").and_then(Value::as_str) {
        Some(s) => Convention::parse(s)?,
        None => default,
    };
    Ok(KacMoodyVector::new(loop_part, r_c, r_d, convention))
}

pub fn group_to_json(x: &KacMoodyGroupElement) -> Value {
    json!({
        "g": laurent_to_json(x.g.mat()),
        "w_c": c64_to_json(x.w_c),
        "w_d": c64_to_json(x.w_d),
    })
}

/// Accepts `{"g", "w_c", "w_d"}` or a bare Laurent matrix (read as `(g, 1, 1)`).
pub fn group_from_json(v: &Value) -> Result<KacMoodyGroupElement> {
    match v.get("g") {
        Some(g) => {
            let g = LoopGroupElement::new(laurent_from_json(g)?)?;
            let w_c = v.get("w_c").map(c64_from_json).transpose()?.unwrap_or(c64(1.0, 0.0));
            let w_d = v.get("w_d").map(c64_from_json).transpose()?.unwrap_or(c64(1.0, 0.0));
            KacMoodyGroupElement::new(g, w_c, w_d)
        }
        None => Ok(KacMoodyGroupElement::from_loop(LoopGroupElement::new(
            laurent_from_json(v)?,
        )?)),
    }
}

pub fn samples_to_json(s: &CircleSamples) -> Value {
    json!({
        "radius": num(s.radius),
        "samples": Value::Array(s.values.iter().map(matrix_to_json).collect()),
    })
}

pub fn samples_from_json(v: &Value) -> Result<CircleSamples> {
    let radius = as_f64(get(v, "radius")?)?;
    let values = get(v, "samples")?
        .as_array()
        .ok_or_else(|| bad("samples must be an array"))?
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(bad("no samples"));
    }
    if values.iter().any(|m| m.nrows() != values[0].nrows()) {
        return Err(bad("samples have mixed dimensions"));
    }
    Ok(CircleSamples { radius, values })
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))
}
