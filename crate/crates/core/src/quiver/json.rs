//! JSON point format:
//! `{field, type, v, w, maps: [{kind, from, to, matrix}], theta?}` with
//! one-based nodes. `from`/`to` are `[node, param]` of the source and target
//! spaces.

use num_rational::Rational64;
use serde_json::{json, Value};

use super::rep::{GradedQuiverRep, MapKey, Space};
use crate::cartan::{CartanDatum, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::{Fp, Matrix, Rational, Scalar};
use crate::lweights::{LatticeVector, Site};

fn site_json(space: Space) -> Value {
    let s = match space {
        Space::V(s) | Space::W(s) => s,
    };
    json!([s.node + 1, s.param])
}

pub fn theta_to_json(theta: &WeightVector) -> Value {
    Value::Array(
        theta
            .0
            .iter()
            .map(|x| {
                if x.is_integer() {
                    json!(x.to_integer())
                } else {
                    json!(x.to_string())
                }
            })
            .collect(),
    )
}

pub fn theta_from_json(value: &Value) -> Result<WeightVector> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::Parse("theta must be an array".into()))?;
    arr.iter()
        .map(|x| {
            if let Some(n) = x.as_i64() {
                return Ok(Rational64::from_integer(n));
            }
            x.as_str()
                .and_then(|s| s.trim().parse::<Rational64>().ok())
                .ok_or_else(|| Error::Parse(format!("bad theta entry {x}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(WeightVector)
}

pub fn rep_to_json<F: Scalar>(rep: &GradedQuiverRep<F>, theta: Option<&WeightVector>) -> Value {
    let maps: Vec<Value> = rep
        .maps()
        .map(|(key, m)| {
            let kind = match key {
                MapKey::Arrow { .. } => "arrow",
                MapKey::A(_) => "A",
                MapKey::B(_) => "B",
            };
            let rows: Vec<Value> = m
                .to_rows()
                .iter()
                .map(|r| Value::Array(r.iter().map(Scalar::to_json).collect()))
                .collect();
            json!({
                "kind": kind,
                "from": site_json(rep.source(key)),
                "to": site_json(rep.target(key)),
                "matrix": rows,
            })
        })
        .collect();
    let mut out = json!({
        "field": F::field_name(),
        "type": rep.datum().label(),
        "v": rep.v().to_triples(),
        "w": rep.w().to_triples(),
        "maps": maps,
    });
    if let Some(t) = theta {
        out["theta"] = theta_to_json(t);
    }
    out
}

fn parse_site(value: &Value) -> Result<Site> {
    let pair: [i64; 2] = serde_json::from_value(value.clone())
        .map_err(|_| Error::Parse(format!("expected [node, param], got {value}")))?;
    if pair[0] < 1 {
        return Err(Error::Parse("nodes are one-based".into()));
    }
    Ok(Site::new(pair[0] as usize - 1, pair[1] as i32))
}

fn parse_dims(value: &Value, name: &str) -> Result<LatticeVector> {
    let triples: Vec<[i64; 3]> = serde_json::from_value(value.clone())
        .map_err(|e| Error::Parse(format!("{name}: {e}")))?;
    LatticeVector::from_triples(&triples)
}

pub fn rep_from_json<F: Scalar>(value: &Value) -> Result<(GradedQuiverRep<F>, Option<WeightVector>)> {
    let field = value["field"].as_str().unwrap_or("Q");
    if field != F::field_name() {
        return Err(Error::Parse(format!("field {field} where {} expected", F::field_name())));
    }
    let label = value["type"]
        .as_str()
        .ok_or_else(|| Error::Parse("missing type".into()))?;
    let datum = CartanDatum::from_label(label)?;
    let v = parse_dims(&value["v"], "v")?;
    let w = parse_dims(&value["w"], "w")?;
    let mut rep = GradedQuiverRep::<F>::new(datum, v, w)?;
    let empty = Vec::new();
    let maps = match &value["maps"] {
        Value::Null => &empty,
        m => m.as_array().ok_or_else(|| Error::Parse("maps must be an array".into()))?,
    };
    for entry in maps {
        let from = parse_site(&entry["from"])?;
        let to = parse_site(&entry["to"])?;
        let key = match entry["kind"].as_str() {
            Some("arrow") => MapKey::Arrow { from, to: to.node },
            Some("A") => MapKey::A(from),
            Some("B") => MapKey::B(to),
            other => return Err(Error::Parse(format!("unknown map kind {other:?}"))),
        };
        rep.datum().check_node(from.node)?;
        rep.datum().check_node(to.node)?;
        let expected_to = match rep.target(key) {
            Space::V(s) | Space::W(s) => s,
        };
        let expected_from = match rep.source(key) {
            Space::V(s) | Space::W(s) => s,
        };
        if expected_to != to || expected_from != from {
            return Err(Error::ShapeMismatch(format!(
                "{key} runs {expected_from} -> {expected_to}, not {from} -> {to}"
            )));
        }
        let (r, c) = rep.shape(key);
        let rows = entry["matrix"]
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let parsed = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                    .iter()
                    .map(F::from_json)
                    .collect::<Result<Vec<F>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if parsed.len() != r {
            return Err(Error::ShapeMismatch(format!("{key} needs {r} rows, got {}", parsed.len())));
        }
        rep.set_map(key, Matrix::from_rows(parsed, c)?)?;
    }
    let theta = match &value["theta"] {
        Value::Null => None,
        t => Some(theta_from_json(t)?),
    };
    Ok((rep, theta))
}

/// A point over any supported field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyRep {
    Q(GradedQuiverRep<Rational>),
    F2(GradedQuiverRep<Fp<2>>),
    F3(GradedQuiverRep<Fp<3>>),
    F5(GradedQuiverRep<Fp<5>>),
    F7(GradedQuiverRep<Fp<7>>),
}

/// Runs a generic closure on the concrete point inside an [`AnyRep`].
#[macro_export]
macro_rules! with_any_rep {
    ($any:expr, $rep:ident => $body:expr) => {
        match $any {
            $crate::quiver::AnyRep::Q($rep) => $body,
            $crate::quiver::AnyRep::F2($rep) => $body,
            $crate::quiver::AnyRep::F3($rep) => $body,
            $crate::quiver::AnyRep::F5($rep) => $body,
            $crate::quiver::AnyRep::F7($rep) => $body,
        }
    };
}

pub const FIELDS: [&str; 5] = ["Q", "F2", "F3", "F5", "F7"];

impl AnyRep {
    pub fn from_json(value: &Value) -> Result<(AnyRep, Option<WeightVector>)> {
        let field = value["field"].as_str().unwrap_or("Q");
        Ok(match field {
            "Q" => rep_from_json(value).map(|(r, t)| (AnyRep::Q(r), t))?,
            "F2" => rep_from_json(value).map(|(r, t)| (AnyRep::F2(r), t))?,
            "F3" => rep_from_json(value).map(|(r, t)| (AnyRep::F3(r), t))?,
            "F5" => rep_from_json(value).map(|(r, t)| (AnyRep::F5(r), t))?,
            "F7" => rep_from_json(value).map(|(r, t)| (AnyRep::F7(r), t))?,
            other => return Err(Error::Parse(format!("unsupported field `{other}`"))),
        })
    }

    pub fn to_json(&self, theta: Option<&WeightVector>) -> Value {
        with_any_rep!(self, r => rep_to_json(r, theta))
    }
}
