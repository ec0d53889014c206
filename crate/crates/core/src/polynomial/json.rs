//! JSON problem documents.
//!
//! ```json
//! {"semifield": "max-plus", "mode": "exact",
//!  "monomials": [{"coeff": "-2", "exponents": ["3", "-1", "2"]}],
//!  "box": {"lower": ["0", "0", "0"], "upper": ["1", "1", "1"]}}
//! ```

use serde_json::{json, Map, Value as Json};

use super::{BoxConstraint, Monomial, Polynomial, Problem};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::semifield::{Carrier, Mode, Semifield, SemifieldId, Value};

/// A parsed problem in whichever arithmetic its document requested.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyProblem {
    Exact(Problem<Rational>),
    Float(Problem<f64>),
}

impl AnyProblem {
    pub fn mode(&self) -> Mode {
        match self {
            AnyProblem::Exact(_) => Mode::Exact,
            AnyProblem::Float(_) => Mode::Float,
        }
    }

    pub fn semifield_id(&self) -> SemifieldId {
        match self {
            AnyProblem::Exact(p) => p.semifield().id(),
            AnyProblem::Float(p) => p.semifield().id(),
        }
    }
}

pub fn parse_problem(text: &[u8]) -> Result<AnyProblem> {
    let doc: Json = serde_json::from_slice(text)
        .map_err(|e| Error::validation("$", format!("invalid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::validation("$", "expected a JSON object"))?;
    let id: SemifieldId = get_str(obj, "semifield")?.parse()?;
    let mode = match obj.get("mode") {
        None => Mode::Exact,
        Some(Json::String(s)) => s.parse()?,
        Some(_) => return Err(Error::validation("mode", "expected a string")),
    };
    match mode {
        Mode::Exact => Ok(AnyProblem::Exact(build(obj, Semifield::new(id)?)?)),
        Mode::Float => Ok(AnyProblem::Float(build(obj, Semifield::new(id)?)?)),
    }
}

fn get_str<'a>(obj: &'a Map<String, Json>, key: &str) -> Result<&'a str> {
    match obj.get(key) {
        Some(Json::String(s)) => Ok(s),
        Some(_) => Err(Error::validation(key, "expected a string")),
        None => Err(Error::validation(key, "missing field")),
    }
}

fn get_array<'a>(obj: &'a Map<String, Json>, key: &str, path: &str) -> Result<&'a Vec<Json>> {
    match obj.get(key) {
        Some(Json::Array(a)) => Ok(a),
        Some(_) => Err(Error::validation(path, "expected an array")),
        None => Err(Error::validation(path, "missing field")),
    }
}

/// Strings are the canonical form; plain JSON numbers are accepted too.
fn scalar_text<'a>(v: &'a Json, path: &str) -> Result<std::borrow::Cow<'a, str>> {
    match v {
        Json::String(s) => Ok(s.as_str().into()),
        Json::Number(n) => Ok(n.to_string().into()),
        _ => Err(Error::validation(path, "expected a string or number")),
    }
}

fn parse_rational(v: &Json, path: &str) -> Result<Rational> {
    let text = scalar_text(v, path)?;
    text.parse()
        .map_err(|e: crate::rational::ParseRationalError| Error::validation(path, e.to_string()))
}

fn parse_value<C: Carrier>(sf: &Semifield<C>, v: &Json, path: &str) -> Result<Value<C>> {
    let text = scalar_text(v, path)?;
    sf.parse(&text).map_err(|m| Error::validation(path, m))
}

fn build<C: Carrier>(obj: &Map<String, Json>, sf: Semifield<C>) -> Result<Problem<C>> {
    let raw_monos = get_array(obj, "monomials", "monomials")?;
    let mut monomials = Vec::with_capacity(raw_monos.len());
    let mut arity: Option<usize> = None;
    for (i, m) in raw_monos.iter().enumerate() {
        let path = format!("monomials[{i}]");
        let m = m
            .as_object()
            .ok_or_else(|| Error::validation(&path, "expected an object"))?;
        let coeff_json = m
            .get("coeff")
            .ok_or_else(|| Error::validation(format!("{path}.coeff"), "missing field"))?;
        let coeff = parse_value(&sf, coeff_json, &format!("{path}.coeff"))?;
        if coeff.is_zero() {
            return Err(Error::validation(
                format!("{path}.coeff"),
                "coefficient must not be the zero element",
            ));
        }
        let exps_path = format!("{path}.exponents");
        let raw_exps = get_array(m, "exponents", &exps_path)?;
        let exponents = raw_exps
            .iter()
            .enumerate()
            .map(|(j, e)| parse_rational(e, &format!("{exps_path}[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        match arity {
            None => arity = Some(exponents.len()),
            Some(n) if n != exponents.len() => {
                return Err(Error::validation(
                    exps_path,
                    format!("expected {n} exponents, found {}", exponents.len()),
                ))
            }
            Some(_) => {}
        }
        monomials.push(Monomial::new(coeff, exponents));
    }

    let bx = match obj.get("box") {
        Some(Json::Object(b)) => b,
        Some(_) => return Err(Error::validation("box", "expected an object")),
        None => return Err(Error::validation("box", "missing field")),
    };
    let lower = get_array(bx, "lower", "box.lower")?
        .iter()
        .enumerate()
        .map(|(j, v)| parse_value(&sf, v, &format!("box.lower[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    let upper = get_array(bx, "upper", "box.upper")?
        .iter()
        .enumerate()
        .map(|(j, v)| parse_value(&sf, v, &format!("box.upper[{j}]")))
        .collect::<Result<Vec<_>>>()?;

    let arity = match arity {
        Some(n) => n,
        None => {
            return Err(Error::validation(
                "monomials",
                "at least one monomial is required",
            ))
        }
    };
    if lower.len() != arity || upper.len() != arity {
        return Err(Error::validation(
            "box",
            format!(
                "box has {}/{} lower/upper entries, polynomial has arity {arity}",
                lower.len(),
                upper.len()
            ),
        ));
    }
    let polynomial = Polynomial::new(sf, arity, monomials)?;
    let bounds = BoxConstraint::new(&sf, lower, upper)?;
    Problem::new(polynomial, bounds)
}

/// Pretty-printed JSON with a fixed key order.
pub fn serialize_problem<C: Carrier>(p: &Problem<C>) -> String {
    let sf = p.semifield();
    let monomials: Vec<Json> = p
        .polynomial()
        .monomials()
        .iter()
        .map(|m| {
            json!({
                "coeff": sf.format(&m.coeff),
                "exponents": m.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let fmt_all = |vs: &[Value<C>]| vs.iter().map(|v| sf.format(v)).collect::<Vec<_>>();
    let doc = json!({
        "semifield": sf.id().name(),
        "mode": C::MODE.name(),
        "monomials": monomials,
        "box": {
            "lower": fmt_all(p.bounds().lower()),
            "upper": fmt_all(p.bounds().upper()),
        },
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    out.push('\n');
    out
}
