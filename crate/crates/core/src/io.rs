//! JSON forms of the value types.
//!
//! Scalars are `"p/q"` strings in exact mode and `[re, im]` pairs in float
//! mode. On input a scalar may also be a plain number, and either part of a
//! pair may be a rational string. Polynomials are coefficient arrays in
//! ascending degree.

use serde_json::{json, Map, Value};

use crate::cartan::{CartanData, CartanTwist};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::polyring::{format_rational, parse_rational, Poly, RatFunc, Scalar, C, Q};
use crate::qqcore::{MasterData, QQSolution};

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Exact rational parse of a JSON number or string.
fn rational_from_json(v: &Value) -> Result<Q> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(fmt_err(format!("expected a rational, found {other}"))),
    };
    parse_rational(&text).ok_or_else(|| fmt_err(format!("cannot read {text:?} as an exact rational")))
}

fn float_from_json(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| fmt_err(format!("number {n} out of range"))),
        Value::String(s) => parse_rational(s)
            .map(|q| q.to_c64().re)
            .or_else(|| s.trim().parse::<f64>().ok())
            .ok_or_else(|| fmt_err(format!("cannot read {s:?} as a number"))),
        other => Err(fmt_err(format!("expected a number, found {other}"))),
    }
}

pub fn scalar_to_json<F: Scalar>(x: &F) -> Value {
    match x.as_exact() {
        Some(q) => Value::String(format_rational(&q)),
        None => {
            let c = x.to_c64();
            json!([c.re, c.im])
        }
    }
}

pub fn scalar_from_json<F: Scalar>(v: &Value) -> Result<F> {
    if F::EXACT {
        let q = match v {
            Value::Array(parts) if parts.len() == 2 => {
                let im = rational_from_json(&parts[1])?;
                if im != Q::default() {
                    return Err(fmt_err("complex value in exact mode"));
                }
                rational_from_json(&parts[0])?
            }
            Value::Array(_) => return Err(fmt_err("complex values are [re, im] pairs")),
            other => rational_from_json(other)?,
        };
        Ok(F::from_q(&q))
    } else {
        let c = match v {
            Value::Array(parts) if parts.len() == 2 => C::new(float_from_json(&parts[0])?, float_from_json(&parts[1])?),
            Value::Array(_) => return Err(fmt_err("complex values are [re, im] pairs")),
            other => C::new(float_from_json(other)?, 0.0),
        };
        F::from_c64(c).ok_or_else(|| fmt_err("value not representable"))
    }
}

pub fn scalars_from_json<F: Scalar>(v: &Value, what: &str) -> Result<Vec<F>> {
    let arr = v.as_array().ok_or_else(|| fmt_err(format!("{what}: expected an array")))?;
    arr.iter()
        .enumerate()
        .map(|(k, x)| scalar_from_json(x).map_err(|e| fmt_err(format!("{what}[{k}]: {}", strip(e)))))
        .collect()
}

fn strip(e: Error) -> String {
    match e {
        Error::Format(s) => s,
        other => other.to_string(),
    }
}

pub fn poly_to_json<F: Scalar>(p: &Poly<F>) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_json).collect())
}

pub fn poly_from_json<F: Scalar>(v: &Value, what: &str) -> Result<Poly<F>> {
    Ok(Poly::new(scalars_from_json(v, what)?))
}

pub fn ratfunc_to_json<F: Scalar>(r: &RatFunc<F>) -> Value {
    json!({ "num": poly_to_json(r.num()), "den": poly_to_json(r.den()) })
}

pub fn ratfunc_from_json<F: Scalar>(v: &Value, what: &str) -> Result<RatFunc<F>> {
    let num = poly_from_json(field(v, "num", what)?, what)?;
    let den = poly_from_json(field(v, "den", what)?, what)?;
    RatFunc::new(num, den).ok_or_else(|| fmt_err(format!("{what}: zero denominator")))
}

pub fn matrix_to_json<F: Scalar>(m: &Matrix<RatFunc<F>>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| ratfunc_to_json(&m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn matrix_from_json<F: Scalar>(v: &Value, what: &str) -> Result<Matrix<RatFunc<F>>> {
    let rows = v.as_array().ok_or_else(|| fmt_err(format!("{what}: expected rows")))?;
    let rows: Vec<Vec<RatFunc<F>>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| fmt_err(format!("{what}: expected a row")))?
                .iter()
                .map(|x| ratfunc_from_json(x, what))
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(fmt_err(format!("{what}: matrix is not square")));
    }
    Ok(Matrix::from_rows(rows))
}

fn field<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| fmt_err(format!("{what}: missing field \"{key}\"")))
}

fn poly_list_from_json<F: Scalar>(v: &Value, what: &str) -> Result<Vec<Poly<F>>> {
    v.as_array()
        .ok_or_else(|| fmt_err(format!("{what}: expected an array")))?
        .iter()
        .enumerate()
        .map(|(k, p)| poly_from_json(p, &format!("{what}[{k}]")))
        .collect()
}

pub fn coweights_from_json(v: &Value) -> Result<Vec<Vec<i64>>> {
    v.as_array()
        .ok_or_else(|| fmt_err("coweights: expected an array"))?
        .iter()
        .enumerate()
        .map(|(k, row)| {
            row.as_array()
                .ok_or_else(|| fmt_err(format!("coweights[{k}]: expected an integer vector")))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| fmt_err(format!("coweights[{k}]: expected integers"))))
                .collect()
        })
        .collect()
}

pub fn master_to_json<F: Scalar>(m: &MasterData<F>, out: &mut Map<String, Value>) {
    if m.has_points() {
        out.insert("marked_points".into(), Value::Array(m.points().iter().map(scalar_to_json).collect()));
        out.insert("coweights".into(), json!(m.coweights()));
    }
    out.insert("lambdas".into(), Value::Array(m.lambdas().iter().map(poly_to_json).collect()));
}

/// Marked points and coweights when present, otherwise the `lambdas` list.
pub fn master_from_json<F: Scalar>(cd: &CartanData, v: &Value) -> Result<MasterData<F>> {
    match v.get("marked_points") {
        Some(pts) => {
            let points = scalars_from_json(pts, "marked_points")?;
            let coweights = coweights_from_json(field(v, "coweights", "master data")?)?;
            MasterData::new(cd, points, coweights)
        }
        None => MasterData::from_lambdas(cd, poly_list_from_json(field(v, "lambdas", "master data")?, "lambdas")?),
    }
}

pub fn twist_to_json<F: Scalar>(z: &CartanTwist<F>) -> Value {
    Value::Array(z.zeta.iter().map(scalar_to_json).collect())
}

pub fn qq_solution_to_json<F: Scalar>(sol: &QQSolution<F>) -> Value {
    let mut out = Map::new();
    out.insert("group".into(), json!(sol.cd.label()));
    out.insert("mode".into(), json!(F::label()));
    out.insert("twist".into(), twist_to_json(&sol.twist));
    master_to_json(&sol.master, &mut out);
    out.insert("q_plus".into(), Value::Array(sol.q_plus.iter().map(poly_to_json).collect()));
    out.insert("q_minus".into(), Value::Array(sol.q_minus.iter().map(poly_to_json).collect()));
    out.insert("q_minus_family".into(), json!(sol.family));
    Value::Object(out)
}

/// Rebuild a solution verbatim, without recomputing `q₋`.
pub fn qq_solution_from_json<F: Scalar>(v: &Value) -> Result<QQSolution<F>> {
    let label = field(v, "group", "solution")?
        .as_str()
        .ok_or_else(|| fmt_err("group: expected a type label"))?;
    let cd = CartanData::from_label(label)?;
    let r = cd.rank();
    let twist = CartanTwist::new(scalars_from_json(field(v, "twist", "solution")?, "twist")?);
    let master = master_from_json(&cd, v)?;
    let q_plus = poly_list_from_json(field(v, "q_plus", "solution")?, "q_plus")?;
    let q_minus = poly_list_from_json(field(v, "q_minus", "solution")?, "q_minus")?;
    for (name, len) in [("twist", twist.zeta.len()), ("q_plus", q_plus.len()), ("q_minus", q_minus.len())] {
        if len != r {
            return Err(fmt_err(format!("{name}: expected {r} entries for {label}, found {len}")));
        }
    }
    let family = match v.get("q_minus_family") {
        Some(f) => f
            .as_array()
            .ok_or_else(|| fmt_err("q_minus_family: expected booleans"))?
            .iter()
            .map(|b| b.as_bool().ok_or_else(|| fmt_err("q_minus_family: expected booleans")))
            .collect::<Result<Vec<_>>>()?,
        None => vec![false; r],
    };
    Ok(QQSolution {
        cd,
        twist,
        master,
        q_plus,
        q_minus,
        family,
    })
}
