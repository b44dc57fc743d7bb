//! JSON encodings of the kernel's values.
//!
//! Exact numbers travel as decimal-string rationals; floating values as
//! decimal strings with an explicit `error_bound`. Top-level documents carry
//! `"schema": "mes/1"`.

use rug::{Float, Integer, Rational};
use serde_json::{json, Map, Value};

use crate::cyclo::CycloNum;
use crate::eisenstein::FourierExpansion;
use crate::error::{Error, Result};
use crate::numerics::Estimate;
use crate::qseries::NormalizedDivisor;
use crate::relations::RelationReport;
use crate::words::{IndexWord, LinComb, TensorComb};

pub const SCHEMA: &str = "mes/1";

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Adds the schema tag to an object; other values are returned unchanged.
pub fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    v
}

fn check_schema(v: &Value) -> Result<()> {
    match v.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(other) => Err(bad(format!("unsupported schema {other}"))),
    }
}

fn level_of(v: &Value) -> Result<u32> {
    let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("missing positive integer field \"N\""))?;
    u32::try_from(n).ok().filter(|&n| n >= 1).ok_or_else(|| bad(format!("invalid level {n}")))
}

fn integer_from(v: &Value) -> Result<Integer> {
    match v {
        Value::String(s) => s.trim().parse::<Integer>().map_err(|_| bad(format!("not an integer: {s:?}"))),
        Value::Number(n) if n.is_i64() => Ok(Integer::from(n.as_i64().unwrap())),
        Value::Number(n) if n.is_u64() => Ok(Integer::from(n.as_u64().unwrap())),
        _ => Err(bad(format!("not an integer: {v}"))),
    }
}

fn rational_from(v: &Value) -> Result<Rational> {
    match v {
        Value::Array(p) if p.len() == 2 => {
            let (num, den) = (integer_from(&p[0])?, integer_from(&p[1])?);
            if den == 0 {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::from((num, den)))
        }
        Value::String(s) if s.contains('/') => s.parse::<Rational>().map_err(|_| bad(format!("not a rational: {s:?}"))),
        _ => Ok(Rational::from(integer_from(v)?)),
    }
}

pub fn cyclo_to_json(c: &CycloNum) -> Value {
    let coeffs: Vec<Value> =
        c.coeffs().iter().map(|q| json!([q.numer().to_string(), q.denom().to_string()])).collect();
    json!({ "N": c.level(), "coeffs": coeffs })
}

pub fn cyclo_from_json(v: &Value) -> Result<CycloNum> {
    let level = level_of(v)?;
    let coeffs = v.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing array field \"coeffs\""))?;
    let qs = coeffs.iter().map(rational_from).collect::<Result<Vec<_>>>()?;
    Ok(CycloNum::from_coeffs(level, qs))
}

pub fn index_to_json(w: &IndexWord) -> Value {
    Value::Array(w.entries().iter().map(|&(n, a)| json!([n, a])).collect())
}

/// Parses `[[n,a],…]`; residues may be any integers and are reduced.
pub fn index_from_json(level: u32, v: &Value) -> Result<IndexWord> {
    let arr = v.as_array().ok_or_else(|| bad(format!("an index must be an array of [n,a] pairs, got {v}")))?;
    let mut entries = Vec::with_capacity(arr.len());
    for p in arr {
        let pair = p.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad(format!("not an [n,a] pair: {p}")))?;
        let n = pair[0].as_u64().and_then(|n| u32::try_from(n).ok()).ok_or_else(|| bad(format!("bad n in {p}")))?;
        let a = pair[1].as_i64().ok_or_else(|| bad(format!("bad a in {p}")))?;
        entries.push((n, a));
    }
    IndexWord::new(level, &entries)
}

pub fn lincomb_to_json(u: &LinComb<IndexWord>) -> Value {
    let terms: Vec<Value> =
        u.iter().map(|(w, c)| json!({ "coeff": cyclo_to_json(c), "index": index_to_json(w) })).collect();
    json!({ "N": u.level(), "terms": terms })
}

/// Accepts a LinComb object or a bare index array at level `level`.
/// A LinComb whose `N` disagrees with `level` is a level mismatch.
pub fn lincomb_from_json(level: Option<u32>, v: &Value) -> Result<LinComb<IndexWord>> {
    if v.is_array() {
        let level = level.ok_or_else(|| bad("a bare index needs an explicit level"))?;
        return Ok(LinComb::from_word(index_from_json(level, v)?));
    }
    check_schema(v)?;
    let n = level_of(v)?;
    if let Some(l) = level {
        if l != n {
            return Err(Error::LevelMismatch(l, n));
        }
    }
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing array field \"terms\""))?;
    let mut out = LinComb::zero(n);
    for t in terms {
        let c = cyclo_from_json(t.get("coeff").ok_or_else(|| bad("term without \"coeff\""))?)?;
        let w = index_from_json(n, t.get("index").ok_or_else(|| bad("term without \"index\""))?)?;
        out.try_add_term(w, c)?;
    }
    Ok(out)
}

pub fn tensor_to_json(t: &TensorComb) -> Value {
    let terms: Vec<Value> = t
        .iter()
        .map(|((l, r), c)| json!({ "coeff": cyclo_to_json(c), "left": index_to_json(l), "right": index_to_json(r) }))
        .collect();
    json!({ "N": t.level(), "terms": terms })
}

pub fn tensor_from_json(v: &Value) -> Result<TensorComb> {
    check_schema(v)?;
    let n = level_of(v)?;
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing array field \"terms\""))?;
    let mut out = TensorComb::zero(n);
    for t in terms {
        let field = |k: &str| t.get(k).ok_or_else(|| bad(format!("term without \"{k}\"")));
        let c = cyclo_from_json(field("coeff")?)?;
        if c.level() != n {
            return Err(Error::LevelMismatch(n, c.level()));
        }
        out.add_term(index_from_json(n, field("left")?)?, index_from_json(n, field("right")?)?, c);
    }
    Ok(out)
}

pub fn divisor_to_json(g: &NormalizedDivisor) -> Value {
    let coeffs: Vec<Value> = g.series.coeffs().iter().map(cyclo_to_json).collect();
    json!({ "N": g.series.level(), "weight": g.weight, "coeffs": coeffs })
}

pub fn divisor_from_json(v: &Value) -> Result<NormalizedDivisor> {
    check_schema(v)?;
    let level = level_of(v)?;
    let weight = v.get("weight").and_then(Value::as_u64).ok_or_else(|| bad("missing field \"weight\""))? as u32;
    let coeffs = v.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing array field \"coeffs\""))?;
    let cs = coeffs.iter().map(cyclo_from_json).collect::<Result<Vec<_>>>()?;
    Ok(NormalizedDivisor { weight, series: crate::qseries::QSeries::from_coeffs(level, cs)? })
}

/// Significant digits worth printing: what the precision carries, capped by
/// the error bound relative to the value.
fn digits(x: &Float, error: f64) -> usize {
    let carried = (x.prec() as f64 * std::f64::consts::LOG10_2).floor() as usize;
    let mag = x.to_f64().abs();
    if error > 0.0 && mag > 0.0 {
        let useful = (mag / error).log10().ceil() as i64 + 2;
        carried.min(useful.max(6) as usize)
    } else {
        carried
    }
}

/// Decimal string for a float; `digits` significant digits.
pub fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Decimal string for an error bound.
pub fn bound(e: f64) -> String {
    format!("{e:.3e}")
}

pub fn estimate_to_json(e: &Estimate) -> Value {
    let (re, im) = (e.value.real(), e.value.imag());
    json!({
        "re": decimal(re, digits(re, e.error)),
        "im": decimal(im, digits(im, e.error)),
        "error_bound": bound(e.error),
    })
}

pub fn expansion_to_json(f: &FourierExpansion) -> Value {
    json!({
        "N": f.level,
        "index": lincomb_to_json(&f.word),
        "order": f.order,
        "regularized": f.regularized,
        "coeffs": f.coeffs.iter().map(estimate_to_json).collect::<Vec<_>>(),
    })
}

/// Replaces every non-integral number by its decimal string.
fn stringify_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => Value::String(bound(n.as_f64().unwrap())),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, stringify_floats(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

pub fn report_to_json(r: &RelationReport) -> Value {
    stringify_floats(serde_json::to_value(r).expect("reports serialise"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclo_round_trip() {
        let c = &CycloNum::root_power(5, 2).scale(&Rational::from((-3, 7))) + &CycloNum::from_int(5, 2);
        let v = cyclo_to_json(&c);
        assert_eq!(cyclo_from_json(&v).unwrap(), c);
        assert_eq!(v["coeffs"][0], json!(["2", "1"]));
    }

    #[test]
    fn bare_index_and_level_mismatch() {
        let u = lincomb_from_json(Some(2), &json!([[2, 1], [3, 3]])).unwrap();
        let w = IndexWord::new(2, &[(2, 1), (3, 1)]).unwrap();
        assert_eq!(u, LinComb::from_word(w));
        let v = with_schema(lincomb_to_json(&u));
        assert_eq!(lincomb_from_json(None, &v).unwrap(), u);
        assert_eq!(lincomb_from_json(Some(3), &v), Err(Error::LevelMismatch(3, 2)));
        assert!(lincomb_from_json(None, &json!([[0, 1]])).is_err());
        assert!(lincomb_from_json(Some(2), &json!([[0, 1]])).is_err());
    }

    #[test]
    fn decimals_respect_the_bound() {
        let e = Estimate::new(rug::Complex::with_val(128, (1.25, 0)), 1e-10);
        let v = estimate_to_json(&e);
        assert_eq!(v["re"], json!("1.250000000000"));
        assert_eq!(v["im"], json!("0"));
        assert_eq!(v["error_bound"], json!("1.000e-10"));
    }
}
