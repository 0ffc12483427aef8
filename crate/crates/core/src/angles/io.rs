//! Angle files: `{"mode": "rational-pi" | "radians", "values": {"t.e": ...}}`,
//! optionally with `"tags": {"t": "flat" | "hyperideal"}`.

use serde_json::{Map, Value};
use thiserror::Error;

use super::{AngleAssignment, FarkasCertificate, PartiallyFlatAssignment, TetTag};
use crate::lp::Rational;

#[derive(Debug, Error)]
pub enum AngleFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown mode {0:?}")]
    UnknownMode(String),
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("bad corner key {0:?}, expected \"tet.edge\"")]
    BadKey(String),
    #[error("bad value for corner {key}: {reason}")]
    BadValue { key: String, reason: String },
    #[error("no value for corner {0}")]
    MissingCorner(String),
    #[error("bad tag for tetrahedron {0:?}")]
    BadTag(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum AngleFile {
    /// Rational multiples of π.
    Exact(AngleAssignment<Rational>),
    Radians(AngleAssignment<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PartiallyFlatFile {
    Exact(PartiallyFlatAssignment<Rational>),
    Radians(PartiallyFlatAssignment<f64>),
}

fn parse_key(key: &str) -> Result<usize, AngleFileError> {
    let bad = || AngleFileError::BadKey(key.to_string());
    let (t, e) = key.split_once('.').ok_or_else(bad)?;
    let t: usize = t.parse().map_err(|_| bad())?;
    let e: usize = e.parse().map_err(|_| bad())?;
    if e >= 6 {
        return Err(bad());
    }
    Ok(6 * t + e)
}

fn parse_rational(key: &str, v: &Value) -> Result<Rational, AngleFileError> {
    let bad = |reason: &str| AngleFileError::BadValue {
        key: key.to_string(),
        reason: reason.to_string(),
    };
    match v {
        Value::String(s) => {
            let (p, q) = match s.split_once('/') {
                Some((p, q)) => (p.trim(), q.trim()),
                None => (s.trim(), "1"),
            };
            let p: num_bigint::BigInt = p.parse().map_err(|_| bad("numerator"))?;
            let q: num_bigint::BigInt = q.parse().map_err(|_| bad("denominator"))?;
            if q == 0.into() {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(p, q))
        }
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| bad("rational-pi values must be \"p/q\" strings or integers")),
        _ => Err(bad("expected \"p/q\"")),
    }
}

fn parse_float(key: &str, v: &Value) -> Result<f64, AngleFileError> {
    v.as_f64().ok_or_else(|| AngleFileError::BadValue {
        key: key.to_string(),
        reason: "expected a number of radians".to_string(),
    })
}

fn collect<T, F>(values: &Map<String, Value>, parse: F) -> Result<Vec<T>, AngleFileError>
where
    F: Fn(&str, &Value) -> Result<T, AngleFileError>,
{
    let mut slots: Vec<Option<T>> = Vec::new();
    for (key, v) in values {
        let slot = parse_key(key)?;
        if slots.len() <= slot {
            let tets = slot / 6 + 1;
            slots.resize_with(6 * tets, || None);
        }
        slots[slot] = Some(parse(key, v)?);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(slot, v)| v.ok_or_else(|| AngleFileError::MissingCorner(key_of(slot))))
        .collect()
}

fn key_of(slot: usize) -> String {
    format!("{}.{}", slot / 6, slot % 6)
}

fn values_map(v: &Value) -> Result<&Map<String, Value>, AngleFileError> {
    v.get("values")
        .and_then(Value::as_object)
        .ok_or(AngleFileError::MissingField("values"))
}

fn mode(v: &Value) -> Result<&str, AngleFileError> {
    v.get("mode")
        .and_then(Value::as_str)
        .ok_or(AngleFileError::MissingField("mode"))
}

fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

impl AngleFile {
    pub fn from_value(v: &Value) -> Result<Self, AngleFileError> {
        let values = values_map(v)?;
        match mode(v)? {
            "rational-pi" => Ok(AngleFile::Exact(AngleAssignment::new(collect(
                values,
                parse_rational,
            )?))),
            "radians" => Ok(AngleFile::Radians(AngleAssignment::new(collect(
                values,
                parse_float,
            )?))),
            other => Err(AngleFileError::UnknownMode(other.to_string())),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, AngleFileError> {
        Self::from_value(&serde_json::from_str(s)?)
    }

    pub fn to_value(&self) -> Value {
        let mut values = Map::new();
        let mode = match self {
            AngleFile::Exact(a) => {
                for (slot, r) in a.values.iter().enumerate() {
                    values.insert(key_of(slot), Value::String(rational_string(r)));
                }
                "rational-pi"
            }
            AngleFile::Radians(a) => {
                for (slot, x) in a.values.iter().enumerate() {
                    values.insert(key_of(slot), float_value(*x));
                }
                "radians"
            }
        };
        let mut root = Map::new();
        root.insert("mode".into(), Value::String(mode.into()));
        root.insert("values".into(), Value::Object(values));
        Value::Object(root)
    }

    pub fn corner_count(&self) -> usize {
        match self {
            AngleFile::Exact(a) => a.values.len(),
            AngleFile::Radians(a) => a.values.len(),
        }
    }

    pub fn to_radians(&self) -> AngleAssignment<f64> {
        match self {
            AngleFile::Exact(a) => a.to_radians(),
            AngleFile::Radians(a) => a.clone(),
        }
    }
}

fn parse_tags(v: &Value, tets: usize) -> Result<Vec<TetTag>, AngleFileError> {
    let map = v
        .get("tags")
        .and_then(Value::as_object)
        .ok_or(AngleFileError::MissingField("tags"))?;
    let mut tags = vec![None; tets];
    for (key, tag) in map {
        let t: usize = key
            .parse()
            .ok()
            .filter(|t| *t < tets)
            .ok_or_else(|| AngleFileError::BadTag(key.clone()))?;
        tags[t] = Some(match tag.as_str() {
            Some("flat") => TetTag::Flat,
            Some("hyperideal") => TetTag::Hyperideal,
            _ => return Err(AngleFileError::BadTag(key.clone())),
        });
    }
    tags.into_iter()
        .enumerate()
        .map(|(t, tag)| tag.ok_or_else(|| AngleFileError::BadTag(t.to_string())))
        .collect()
}

fn tags_value(tags: &[TetTag]) -> Value {
    let map = tags
        .iter()
        .enumerate()
        .map(|(t, tag)| {
            let s = match tag {
                TetTag::Flat => "flat",
                TetTag::Hyperideal => "hyperideal",
            };
            (t.to_string(), Value::String(s.into()))
        })
        .collect();
    Value::Object(map)
}

impl PartiallyFlatFile {
    pub fn from_value(v: &Value) -> Result<Self, AngleFileError> {
        Ok(match AngleFile::from_value(v)? {
            AngleFile::Exact(a) => {
                let tags = parse_tags(v, a.values.len() / 6)?;
                PartiallyFlatFile::Exact(PartiallyFlatAssignment {
                    values: a.values,
                    tags,
                })
            }
            AngleFile::Radians(a) => {
                let tags = parse_tags(v, a.values.len() / 6)?;
                PartiallyFlatFile::Radians(PartiallyFlatAssignment {
                    values: a.values,
                    tags,
                })
            }
        })
    }

    pub fn from_json(s: &str) -> Result<Self, AngleFileError> {
        Self::from_value(&serde_json::from_str(s)?)
    }

    pub fn to_value(&self) -> Value {
        let (mut v, tags) = match self {
            PartiallyFlatFile::Exact(b) => (
                AngleFile::Exact(AngleAssignment::new(b.values.clone())).to_value(),
                &b.tags,
            ),
            PartiallyFlatFile::Radians(b) => (
                AngleFile::Radians(AngleAssignment::new(b.values.clone())).to_value(),
                &b.tags,
            ),
        };
        v.as_object_mut()
            .expect("angle file is an object")
            .insert("tags".into(), tags_value(tags));
        v
    }
}

/// Parses `"p/q"` or `"p"` as a rational.
pub fn parse_ratio(s: &str) -> Option<Rational> {
    parse_rational("value", &Value::String(s.to_string())).ok()
}

fn rational_list(v: &Value, field: &'static str) -> Result<Vec<Rational>, AngleFileError> {
    v.get(field)
        .and_then(Value::as_array)
        .ok_or(AngleFileError::MissingField(field))?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_rational(&format!("{field}[{i}]"), x))
        .collect()
}

fn rational_array(xs: &[Rational]) -> Value {
    Value::Array(
        xs.iter()
            .map(|r| Value::String(rational_string(r)))
            .collect(),
    )
}

impl FarkasCertificate {
    /// `{"edge": [...], "vertex": [...], "corner": [...]}` as `"p/q"` strings.
    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("edge".into(), rational_array(&self.edge));
        root.insert("vertex".into(), rational_array(&self.vertex));
        root.insert("corner".into(), rational_array(&self.corner));
        Value::Object(root)
    }

    pub fn from_value(v: &Value) -> Result<Self, AngleFileError> {
        Ok(FarkasCertificate {
            edge: rational_list(v, "edge")?,
            vertex: rational_list(v, "vertex")?,
            corner: rational_list(v, "corner")?,
        })
    }
}

/// Tags plus the exact values of the flat tetrahedra; corners of
/// hyperideal tetrahedra may be omitted and read as 0.
pub fn read_flat_skeleton(v: &Value) -> Result<(Vec<TetTag>, Vec<Rational>), AngleFileError> {
    let tets = v
        .get("tags")
        .and_then(Value::as_object)
        .ok_or(AngleFileError::MissingField("tags"))?
        .len();
    let tags = parse_tags(v, tets)?;
    let mut values = vec![Rational::from_integer(0.into()); 6 * tets];
    let mut seen = vec![false; 6 * tets];
    for (key, x) in values_map(v)? {
        let slot = parse_key(key)?;
        if slot >= values.len() {
            return Err(AngleFileError::BadKey(key.clone()));
        }
        values[slot] = parse_rational(key, x)?;
        seen[slot] = true;
    }
    if let Some(slot) = (0..6 * tets).find(|&s| tags[s / 6] == TetTag::Flat && !seen[s]) {
        return Err(AngleFileError::MissingCorner(key_of(slot)));
    }
    Ok((tags, values))
}
