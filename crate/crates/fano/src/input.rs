//! Candidate JSON: `{id, weights: [{name, weight}], eq_degrees, k3: {num, den}, basket: [{r, a, count}]}`.

use std::path::Path;

use fano_rigidity_core::candidate::{BasketEntry, FanoCandidate};
use fano_rigidity_core::wps::Coordinate;
use fano_rigidity_core::{Rational, WeightedSpace};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("field `k3`: {0}")]
    K3(String),
    #[error("field `weights`: {0}")]
    Weights(#[from] fano_rigidity_core::wps::SpaceError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateJson {
    id: String,
    weights: Vec<WeightJson>,
    eq_degrees: Vec<u32>,
    k3: K3Json,
    basket: Vec<BasketJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightJson {
    name: String,
    weight: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct K3Json {
    num: i64,
    den: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasketJson {
    r: u32,
    a: u32,
    count: u32,
}

/// Parse candidate JSON. Validation is separate: a parsed candidate may still
/// have violations.
pub fn parse(text: &str) -> Result<FanoCandidate, InputError> {
    let raw: CandidateJson = serde_json::from_str(text)?;
    if raw.k3.den == 0 {
        return Err(InputError::K3("denominator is 0".into()));
    }
    let space = WeightedSpace::new(raw.weights.into_iter().map(|w| Coordinate { name: w.name, weight: w.weight }).collect())?;
    Ok(FanoCandidate {
        id: raw.id,
        space,
        eq_degrees: raw.eq_degrees,
        k3: Rational::new(raw.k3.num, raw.k3.den),
        basket: raw.basket.into_iter().map(|b| BasketEntry::new(b.r, b.a, b.count)).collect(),
    })
}

pub fn load(path: &Path) -> Result<FanoCandidate, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

fn to_json(c: &FanoCandidate) -> CandidateJson {
    let (num, den) = c.k3.to_i64_pair().expect("k3 fits in i64");
    CandidateJson {
        id: c.id.clone(),
        weights: (0..c.space.len()).map(|i| WeightJson { name: c.space.name(i).to_string(), weight: c.space.weight(i) }).collect(),
        eq_degrees: c.eq_degrees.clone(),
        k3: K3Json { num, den },
        basket: c.basket.iter().map(|b| BasketJson { r: b.r, a: b.a, count: b.count }).collect(),
    }
}

/// The JSON value of a candidate in canonical field order.
pub fn to_value(c: &FanoCandidate) -> serde_json::Value {
    serde_json::to_value(to_json(c)).expect("plain data")
}

/// Canonical file form: pretty-printed, canonical field order, reduced `k3`,
/// `a <= r - a`, trailing newline.
pub fn to_canonical_json(c: &FanoCandidate) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(c)).expect("plain data");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use fano_rigidity_core::candidate::{lookup, registry, RegistryEntry};

    #[test]
    fn registry_round_trips() {
        for entry in registry() {
            let RegistryEntry::Analyzable(c) = entry else { continue };
            let text = to_canonical_json(&c);
            let back = parse(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(to_canonical_json(&back), text);
        }
    }

    #[test]
    fn canonical_form_normalizes() {
        let c = lookup("#25").unwrap();
        let mut v = to_value(&c);
        v["k3"] = serde_json::json!({"num": 2, "den": 140});
        v["basket"][1] = serde_json::json!({"r": 5, "a": 4, "count": 1});
        let messy = serde_json::to_string(&v).unwrap();
        let back = parse(&messy).unwrap();
        assert_eq!(to_canonical_json(&back), to_canonical_json(&c));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let c = lookup("#25").unwrap();
        let mut v = to_value(&c);
        v.as_object_mut().unwrap().remove("k3");
        let err = parse(&serde_json::to_string_pretty(&v).unwrap()).unwrap_err().to_string();
        assert!(err.contains("missing field `k3`") && err.contains("line"), "{err}");
        let mut v = to_value(&c);
        v["k3"]["den"] = 0.into();
        assert!(matches!(parse(&v.to_string()), Err(InputError::K3(_))));
        let mut v = to_value(&c);
        v["extra"] = 1.into();
        assert!(parse(&v.to_string()).unwrap_err().to_string().contains("unknown field"));
        let mut v = to_value(&c);
        v["weights"][1]["name"] = "p".into();
        assert!(matches!(parse(&v.to_string()), Err(InputError::Weights(_))));
    }

    #[test]
    fn parsed_candidates_keep_violations_for_validation() {
        let c = lookup("#25").unwrap();
        let mut v = to_value(&c);
        v["basket"][0] = serde_json::json!({"r": 4, "a": 2, "count": 1});
        let bad = parse(&v.to_string()).unwrap();
        assert!(!bad.validate().is_empty());
    }
}
