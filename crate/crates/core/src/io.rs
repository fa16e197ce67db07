//! JSON file formats for polynomials, curves, branches, one-forms,
//! connections and problems. Errors carry the JSON path of the offending
//! value.
//!
//! ```json
//! {"f": {"terms": [{"m": "x^4", "c": "1"}, {"m": "x*y^4", "c": "1"}, {"m": "y^5", "c": "1"}]}}
//! ```

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer};
use serde_json::{json, Value};

use crate::coeff_series::{GaussianRational as Q, Monomial, Polynomial2, USeries};
use crate::connection::Connection;
use crate::curve::{Branch, PlaneCurve};
use crate::error::ParseError;
use crate::forms::CurveOneForm;

fn monomial_key<'de, D: Deserializer<'de>>(d: D) -> Result<Monomial, D::Error> {
    String::deserialize(d)?.parse().map_err(D::Error::custom)
}

fn exponent<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
    let s = String::deserialize(d)?;
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(D::Error::custom(ParseError::Exponent { literal: s }));
    }
    s.parse().map_err(|_| D::Error::custom(ParseError::Exponent { literal: s.clone() }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    #[serde(deserialize_with = "monomial_key")]
    m: Monomial,
    c: Q,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    f: RawPoly,
}

#[derive(Deserialize)]
struct RawCoefficient(#[serde(deserialize_with = "exponent")] usize, Q);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBranch {
    order: usize,
    x: Vec<RawCoefficient>,
    y: Vec<RawCoefficient>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOneForm {
    dx: RawPoly,
    dy: RawPoly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConnection {
    rank: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<RawOneForm>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    curve: RawCurve,
    branches: Option<Vec<RawBranch>>,
    connection: RawConnection,
    order: Option<usize>,
    degree_cap: Option<u32>,
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerators {
    generators: Option<Vec<RawPoly>>,
    jacobian_of: Option<RawCurve>,
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ParseError::Json { path, message: e.into_inner().to_string() }
    })
}

fn invalid(path: impl Into<String>, message: impl ToString) -> ParseError {
    ParseError::Json { path: path.into(), message: message.to_string() }
}

fn polynomial(raw: RawPoly, path: &str) -> Result<Polynomial2, ParseError> {
    let mut seen = BTreeSet::new();
    for (i, t) in raw.terms.iter().enumerate() {
        if !seen.insert(t.m) {
            return Err(invalid(format!("{path}terms[{i}].m"), format!("duplicate monomial {}", t.m)));
        }
    }
    Ok(Polynomial2::from_terms(raw.terms.into_iter().map(|t| (t.m, t.c))))
}

fn curve(raw: RawCurve, path: &str) -> Result<PlaneCurve, ParseError> {
    PlaneCurve::new(polynomial(raw.f, &format!("{path}f."))?).map_err(|e| invalid(format!("{path}f"), e))
}

fn series(raw: Vec<RawCoefficient>, order: usize, path: &str) -> Result<USeries, ParseError> {
    let mut coeffs = vec![Q::from_int(0); order];
    let mut seen = BTreeSet::new();
    for (i, RawCoefficient(k, c)) in raw.into_iter().enumerate() {
        if k >= order {
            return Err(invalid(format!("{path}[{i}]"), format!("exponent {k} is not below the order {order}")));
        }
        if !seen.insert(k) {
            return Err(invalid(format!("{path}[{i}]"), format!("duplicate exponent {k}")));
        }
        coeffs[k] = c;
    }
    Ok(USeries::new(coeffs))
}

fn branch(raw: RawBranch, path: &str) -> Result<Branch, ParseError> {
    let x = series(raw.x, raw.order, &format!("{path}x"))?;
    let y = series(raw.y, raw.order, &format!("{path}y"))?;
    Branch::new(x, y).map_err(|e| invalid(path.trim_end_matches('.'), e))
}

fn one_form(raw: RawOneForm, curve: &Arc<PlaneCurve>, path: &str) -> Result<CurveOneForm, ParseError> {
    let dx = polynomial(raw.dx, &format!("{path}dx."))?;
    let dy = polynomial(raw.dy, &format!("{path}dy."))?;
    Ok(CurveOneForm::new(curve.clone(), dx, dy))
}

fn connection(raw: RawConnection, curve: &Arc<PlaneCurve>, path: &str) -> Result<Connection, ParseError> {
    if raw.rank == 0 {
        return Err(invalid(format!("{path}rank"), "rank must be at least 1"));
    }
    if raw.a.len() != raw.rank {
        return Err(invalid(format!("{path}A"), format!("expected {} rows, found {}", raw.rank, raw.a.len())));
    }
    let mut rows = Vec::with_capacity(raw.rank);
    for (i, row) in raw.a.into_iter().enumerate() {
        if row.len() != raw.rank {
            return Err(invalid(format!("{path}A[{i}]"), format!("expected {} entries, found {}", raw.rank, row.len())));
        }
        let row = row
            .into_iter()
            .enumerate()
            .map(|(j, w)| one_form(w, curve, &format!("{path}A[{i}][{j}].")))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Connection::new(curve.clone(), rows).map_err(|e| invalid(format!("{path}A"), e))
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial2, ParseError> {
    polynomial(from_json(text)?, "")
}

pub fn parse_curve(text: &str) -> Result<PlaneCurve, ParseError> {
    curve(from_json(text)?, "")
}

pub fn parse_branch(text: &str) -> Result<Branch, ParseError> {
    branch(from_json(text)?, "")
}

pub fn parse_one_form(text: &str, curve: &Arc<PlaneCurve>) -> Result<CurveOneForm, ParseError> {
    one_form(from_json(text)?, curve, "")
}

pub fn parse_connection(text: &str, curve: &Arc<PlaneCurve>) -> Result<Connection, ParseError> {
    connection(from_json(text)?, curve, "")
}

/// A curve with a connection, optional explicit branches and run options.
#[derive(Clone, Debug)]
pub struct Problem {
    pub curve: Arc<PlaneCurve>,
    /// `None` asks for a Newton–Puiseux expansion.
    pub branches: Option<Vec<Branch>>,
    pub connection: Connection,
    pub order: Option<usize>,
    pub degree_cap: Option<u32>,
    pub seed: Option<u64>,
}

/// `{"curve": {"f": …}, "connection": {"rank": …, "A": …}}` with optional
/// `branches`, `order`, `degree_cap` and `seed`.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let raw: RawProblem = from_json(text)?;
    let c = Arc::new(curve(raw.curve, "curve.")?);
    let branches = raw
        .branches
        .map(|bs| bs.into_iter().enumerate().map(|(i, b)| branch(b, &format!("branches[{i}]."))).collect())
        .transpose()?;
    let connection = connection(raw.connection, &c, "connection.")?;
    Ok(Problem { curve: c, branches, connection, order: raw.order, degree_cap: raw.degree_cap, seed: raw.seed })
}

/// `{"generators": [<polynomial>, …]}` or `{"jacobian_of": {"f": …}}`.
pub fn parse_generators(text: &str) -> Result<Vec<Polynomial2>, ParseError> {
    let raw: RawGenerators = from_json(text)?;
    match (raw.generators, raw.jacobian_of) {
        (Some(gs), None) => {
            gs.into_iter().enumerate().map(|(i, g)| polynomial(g, &format!("generators[{i}]."))).collect()
        }
        (None, Some(c)) => Ok(curve(c, "jacobian_of.")?.jacobian_generators()),
        _ => Err(invalid(".", "expected exactly one of `generators` or `jacobian_of`")),
    }
}

pub fn polynomial_to_json(p: &Polynomial2) -> Value {
    let terms: Vec<Value> = p.terms().map(|(m, c)| json!({ "m": m.to_string(), "c": c.to_string() })).collect();
    json!({ "terms": terms })
}

pub fn series_to_json(s: &USeries) -> Value {
    Value::Array(s.terms().map(|(k, c)| json!([k.to_string(), c.to_string()])).collect())
}

pub fn branch_to_json(b: &Branch) -> Value {
    json!({ "order": b.order(), "x": series_to_json(b.x()), "y": series_to_json(b.y()) })
}

pub fn one_form_to_json(w: &CurveOneForm) -> Value {
    json!({ "dx": polynomial_to_json(w.dx()), "dy": polynomial_to_json(w.dy()) })
}

pub fn connection_to_json(c: &Connection) -> Value {
    let a: Vec<Value> = c.entries().iter().map(|row| Value::Array(row.iter().map(one_form_to_json).collect())).collect();
    json!({ "rank": c.rank(), "A": a })
}
