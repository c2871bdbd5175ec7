//! Instance files: a fan, an optional boundary, named divisors, and pinned values.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::Path;

use kstab_core::rational::{parse_rational, ExtRational, Rational};
use kstab_core::toric::{Fan, ToricDivisor, ToricPair};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use toml::Spanned;

use crate::CliError;

pub const BUNDLED: [(&str, &str); 6] = [
    ("p1", include_str!("../instances/p1.toml")),
    ("p2", include_str!("../instances/p2.toml")),
    ("p1xp1", include_str!("../instances/p1xp1.toml")),
    ("blp2", include_str!("../instances/blp2.toml")),
    ("f2", include_str!("../instances/f2.toml")),
    ("f3", include_str!("../instances/f3.toml")),
];

/// An exact rational written as an integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal(pub Rational);

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Literal;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Literal, E> {
                Ok(Literal(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Literal, E> {
                Ok(Literal(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Literal, E> {
                Err(E::custom(format!(
                    "float {v} is not accepted; write exact rationals as \"p/q\""
                )))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Literal, E> {
                parse_rational(v).map(Literal).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// A pinned value: an exact rational or `"inf"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pinned(pub ExtRational);

impl<'de> Deserialize<'de> for Pinned {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Pinned;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer, a \"p/q\" string, or \"inf\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Pinned, E> {
                Ok(Pinned(ExtRational::Finite(Rational::from_integer(v.into()))))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Pinned, E> {
                Ok(Pinned(ExtRational::Finite(Rational::from_integer(v.into()))))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Pinned, E> {
                Err(E::custom(format!(
                    "float {v} is not accepted; write exact rationals as \"p/q\""
                )))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Pinned, E> {
                if v == "inf" {
                    return Ok(Pinned(ExtRational::Infinity));
                }
                parse_rational(v).map(|r| Pinned(ExtRational::Finite(r))).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// Quantities an `[expected-values]` block may pin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Expected {
    /// `vol(-K-Δ)`.
    Volume,
    /// `δ` upper bound at the configured radius.
    DeltaUpper,
    S(usize),
    LogDiscrepancy(usize),
    OrdB(usize),
    /// `min A_Z/ord_B` at the configured radius.
    Lemma37,
}

impl Expected {
    pub fn parse(key: &str) -> Option<Expected> {
        let ray = |prefix: &str| key.strip_prefix(prefix).and_then(|i| i.parse().ok());
        match key {
            "volume" => Some(Expected::Volume),
            "delta-upper" => Some(Expected::DeltaUpper),
            "lemma37" => Some(Expected::Lemma37),
            _ => ray("s-ray-")
                .map(Expected::S)
                .or_else(|| ray("log-discrepancy-ray-").map(Expected::LogDiscrepancy))
                .or_else(|| ray("ord-b-ray-").map(Expected::OrdB)),
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Volume => write!(f, "volume"),
            Expected::DeltaUpper => write!(f, "delta-upper"),
            Expected::S(i) => write!(f, "s-ray-{i}"),
            Expected::LogDiscrepancy(i) => write!(f, "log-discrepancy-ray-{i}"),
            Expected::OrdB(i) => write!(f, "ord-b-ray-{i}"),
            Expected::Lemma37 => write!(f, "lemma37"),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    name: String,
    dim: Spanned<usize>,
    rays: Spanned<Vec<Vec<i64>>>,
    cones: Spanned<Vec<Vec<usize>>>,
    delta: Option<Spanned<Vec<Literal>>>,
    #[serde(default)]
    divisors: BTreeMap<String, Spanned<Vec<Literal>>>,
    #[serde(default, rename = "expected-values")]
    expected: BTreeMap<Spanned<String>, Pinned>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub pair: ToricPair,
    pub divisors: BTreeMap<String, ToricDivisor>,
    pub expected: Vec<(Expected, ExtRational)>,
}

impl Instance {
    /// Built-in names `-K` and `-K-Delta`, then the `[divisors]` table.
    pub fn divisor(&self, name: &str) -> Result<ToricDivisor, CliError> {
        match name {
            "-K" => Ok(self.pair.anticanonical()),
            "-K-Delta" | "-K-Δ" => Ok(self.pair.log_anticanonical()),
            _ => self.divisors.get(name).cloned().ok_or_else(|| {
                let known: Vec<&str> = ["-K", "-K-Delta"]
                    .into_iter()
                    .chain(self.divisors.keys().map(String::as_str))
                    .collect();
                CliError::User(format!(
                    "unknown divisor `{name}` in instance {}; known: {}",
                    self.name,
                    known.join(", ")
                ))
            }),
        }
    }
}

fn line_of(source: &str, span: Range<usize>) -> usize {
    source[..span.start.min(source.len())].matches('\n').count() + 1
}

pub fn parse(source: &str, origin: &str) -> Result<Instance, CliError> {
    let raw: RawInstance = toml::from_str(source)
        .map_err(|e| CliError::User(format!("{origin}: {}", e.to_string().trim_end())))?;
    let at = |span: Range<usize>, msg: String| CliError::User(format!("{origin}:{}: {msg}", line_of(source, span)));

    let dim = *raw.dim.get_ref();
    let fan = Fan::new(dim, raw.rays.get_ref().clone(), raw.cones.get_ref().clone())
        .map_err(|e| at(raw.rays.span(), e.to_string()))?;
    let k = fan.rays().len();
    let pair = match &raw.delta {
        None => ToricPair::without_boundary(fan),
        Some(d) => {
            if d.get_ref().len() != k {
                return Err(at(d.span(), format!("delta has {} entries for {k} rays", d.get_ref().len())));
            }
            let coeffs = d.get_ref().iter().map(|l| l.0.clone()).collect();
            ToricPair::new(fan, coeffs).map_err(|e| at(d.span(), e.to_string()))?
        }
    };
    let mut divisors = BTreeMap::new();
    for (name, coeffs) in raw.divisors {
        if coeffs.get_ref().len() != k {
            return Err(at(
                coeffs.span(),
                format!("divisor `{name}` has {} coefficients for {k} rays", coeffs.get_ref().len()),
            ));
        }
        divisors.insert(name, ToricDivisor::new(coeffs.get_ref().iter().map(|l| l.0.clone()).collect()));
    }
    let mut expected = Vec::new();
    for (key, value) in raw.expected {
        let parsed = Expected::parse(key.get_ref()).ok_or_else(|| {
            at(
                key.span(),
                format!(
                    "unknown expected-value key `{}`; use volume, delta-upper, lemma37, s-ray-I, log-discrepancy-ray-I or ord-b-ray-I",
                    key.get_ref()
                ),
            )
        })?;
        if let Expected::S(i) | Expected::LogDiscrepancy(i) | Expected::OrdB(i) = parsed {
            if i >= k {
                return Err(at(key.span(), format!("ray index {i} out of range for {k} rays")));
            }
        }
        expected.push((parsed, value.0));
    }
    expected.sort_by_key(|e| e.0);
    Ok(Instance {
        name: raw.name,
        pair,
        divisors,
        expected,
    })
}

/// A bundled instance name or a path to an instance file.
pub fn load(spec: &str) -> Result<Instance, CliError> {
    if let Some((_, text)) = BUNDLED.iter().find(|(n, _)| *n == spec) {
        return parse(text, spec);
    }
    let path = Path::new(spec);
    if !path.exists() {
        let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
        return Err(CliError::User(format!(
            "`{spec}` is neither a bundled instance ({}) nor a readable file",
            names.join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::User(format!("{spec}: {e}")))?;
    parse(&text, spec)
}

pub fn bundled() -> Result<Vec<Instance>, CliError> {
    BUNDLED.iter().map(|(n, t)| parse(t, n)).collect()
}
