//! Candidate Fano 3-folds: numerical data, validation and the built-in registry.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::wps::{well_formed, WeightedSpace};

/// `count` points of type `1/r(1, a, r-a)`.
///
/// Construction normalizes `a` to `min(a, r - a)` whenever `0 < a < r`; other values
/// are kept verbatim so that [`validate`] can report them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasketEntry {
    pub r: u32,
    pub a: u32,
    pub count: u32,
}

impl BasketEntry {
    pub fn new(r: u32, a: u32, count: u32) -> Self {
        let a = if a > 0 && a < r { a.min(r - a) } else { a };
        BasketEntry { r, a, count }
    }

    pub fn is_terminal(&self) -> bool {
        self.r >= 2 && self.a > 0 && self.a < self.r && self.a.gcd(&self.r) == 1
    }

    /// Label of one point, e.g. `1/5(1,2,3)`.
    pub fn type_label(&self) -> String {
        format!("1/{}(1,{},{})", self.r, self.a, self.r.saturating_sub(self.a))
    }
}

impl fmt::Display for BasketEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 1 {
            write!(f, "{}", self.type_label())
        } else {
            write!(f, "{} x {}", self.count, self.type_label())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoCandidate {
    pub id: String,
    pub space: WeightedSpace,
    pub eq_degrees: Vec<u32>,
    pub k3: Rational,
    pub basket: Vec<BasketEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Dropping coordinate `omitted` leaves weights with gcd `gcd`.
    NotWellFormed { omitted: String, gcd: u32 },
    NonTerminal { r: u32, a: u32, reason: String },
    EmptyBasketEntry { r: u32, a: u32 },
    NonPositiveK3 { k3: Rational },
    NoEquations,
    NonPositiveDegree { position: usize },
    DegreesNotSorted,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotWellFormed { omitted, gcd } => {
                write!(f, "not well-formed: weights without `{omitted}` have gcd {gcd}")
            }
            Violation::NonTerminal { r, a, reason } => {
                write!(f, "non-terminal basket entry 1/{r}(1,{a},{}): {reason}", r.saturating_sub(*a))
            }
            Violation::EmptyBasketEntry { r, a } => {
                write!(f, "basket entry 1/{r}(1,{a},{}) has count 0", r.saturating_sub(*a))
            }
            Violation::NonPositiveK3 { k3 } => write!(f, "(-K)^3 = {k3} is not positive"),
            Violation::NoEquations => write!(f, "no equation degrees"),
            Violation::NonPositiveDegree { position } => {
                write!(f, "equation degree #{} is not positive", position + 1)
            }
            Violation::DegreesNotSorted => write!(f, "equation degrees are not non-decreasing"),
        }
    }
}

impl FanoCandidate {
    /// `(#coords - 1) - 3`.
    pub fn codimension(&self) -> usize {
        self.space.len().saturating_sub(4)
    }

    /// Total number of singular points in the basket.
    pub fn basket_points(&self) -> u32 {
        self.basket.iter().map(|b| b.count).sum()
    }

    pub fn has_index(&self, r: u32) -> bool {
        self.basket.iter().any(|b| b.r == r)
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }
}

pub fn validate(c: &FanoCandidate) -> Vec<Violation> {
    let mut out = Vec::new();
    let weights = c.space.weights();
    if !well_formed(&weights) {
        for skip in 0..weights.len() {
            let g = weights
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .fold(0u32, |g, (_, &w)| g.gcd(&w));
            if g != 1 {
                out.push(Violation::NotWellFormed {
                    omitted: c.space.name(skip).to_string(),
                    gcd: g,
                });
            }
        }
    }
    for b in &c.basket {
        if !b.is_terminal() {
            let reason = if b.r < 2 {
                String::from("index must be at least 2")
            } else if b.a == 0 || b.a >= b.r {
                format!("need 0 < a < {}", b.r)
            } else {
                format!("gcd({},{}) = {} != 1", b.a, b.r, b.a.gcd(&b.r))
            };
            out.push(Violation::NonTerminal { r: b.r, a: b.a, reason });
        }
        if b.count == 0 {
            out.push(Violation::EmptyBasketEntry { r: b.r, a: b.a });
        }
    }
    if !c.k3.is_positive() {
        out.push(Violation::NonPositiveK3 { k3: c.k3.clone() });
    }
    if c.eq_degrees.is_empty() {
        out.push(Violation::NoEquations);
    }
    for (i, &d) in c.eq_degrees.iter().enumerate() {
        if d == 0 {
            out.push(Violation::NonPositiveDegree { position: i });
        }
    }
    if c.eq_degrees.windows(2).any(|w| w[0] > w[1]) {
        out.push(Violation::DegreesNotSorted);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterKind {
    Curve,
    SmoothPoint,
    QuotientPoint,
}

/// A class of potential maximal centers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterSpec {
    pub kind: CenterKind,
    pub basket_ref: Option<BasketEntry>,
    /// Coordinate whose coordinate point the center is moved to, if any.
    pub coordinate_position: Option<String>,
}

impl CenterSpec {
    pub fn curves() -> Self {
        CenterSpec { kind: CenterKind::Curve, basket_ref: None, coordinate_position: None }
    }

    pub fn smooth_points() -> Self {
        CenterSpec { kind: CenterKind::SmoothPoint, basket_ref: None, coordinate_position: None }
    }

    pub fn quotient(entry: BasketEntry, position: Option<&str>) -> Self {
        CenterSpec {
            kind: CenterKind::QuotientPoint,
            basket_ref: Some(entry),
            coordinate_position: position.map(ToString::to_string),
        }
    }

    /// Short identifier: `curves`, `smooth-points` or the point type.
    pub fn label(&self) -> String {
        match (self.kind, &self.basket_ref) {
            (CenterKind::Curve, _) => String::from("curves"),
            (CenterKind::SmoothPoint, _) => String::from("smooth-points"),
            (CenterKind::QuotientPoint, Some(b)) => b.type_label(),
            (CenterKind::QuotientPoint, None) => String::from("quotient-point"),
        }
    }

    /// Whether `query` names this center (`curves`, `smooth-points`, `1/5(1,1,4)`, `1/5`).
    pub fn matches(&self, query: &str) -> bool {
        let q = query.trim();
        if q == self.label() {
            return true;
        }
        match (self.kind, &self.basket_ref) {
            (CenterKind::Curve, _) => q == "curve",
            (CenterKind::SmoothPoint, _) => q == "smooth" || q == "smooth-point",
            (CenterKind::QuotientPoint, Some(b)) => q == format!("1/{}", b.r),
            _ => false,
        }
    }

    /// Every center class of a candidate, in report order.
    pub fn enumerate(c: &FanoCandidate) -> Vec<CenterSpec> {
        let mut out = alloc::vec![CenterSpec::curves(), CenterSpec::smooth_points()];
        out.extend(c.basket.iter().map(|b| CenterSpec::quotient(*b, None)));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("unknown candidate `{0}`")]
    Unknown(String),
    #[error("candidate `{id}` is not analyzable by this engine: {note}")]
    NotAnalyzable { id: String, note: String },
}

/// One registry row: either full numerical data or a metadata-only stub.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegistryEntry {
    Analyzable(FanoCandidate),
    MetadataOnly { id: String, note: String },
}

impl RegistryEntry {
    pub fn id(&self) -> &str {
        match self {
            RegistryEntry::Analyzable(c) => &c.id,
            RegistryEntry::MetadataOnly { id, .. } => id,
        }
    }
}

const COORD_NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

fn builtin(id: &str, weights: [u32; 8], k3: (i64, i64), degrees: [u32; 9], basket: &[(u32, u32, u32)]) -> FanoCandidate {
    let pairs: Vec<(&str, u32)> = COORD_NAMES.iter().copied().zip(weights).collect();
    FanoCandidate {
        id: id.to_string(),
        space: WeightedSpace::from_pairs(&pairs).expect("built-in ambient"),
        eq_degrees: degrees.to_vec(),
        k3: Rational::new(k3.0, k3.1),
        basket: basket.iter().map(|&(r, a, n)| BasketEntry::new(r, a, n)).collect(),
    }
}

/// The built-in registry in listing order.
pub fn registry() -> Vec<RegistryEntry> {
    let deg_a = [16, 17, 18, 18, 19, 20, 20, 21, 22];
    alloc::vec![
        RegistryEntry::Analyzable(builtin(
            "#25",
            [2, 5, 6, 7, 8, 9, 10, 11],
            (1, 70),
            deg_a,
            &[(2, 1, 7), (5, 1, 1), (7, 2, 1)],
        )),
        RegistryEntry::Analyzable(builtin(
            "#166",
            [2, 2, 3, 3, 4, 4, 5, 5],
            (1, 6),
            [8, 8, 8, 9, 9, 9, 10, 10, 10],
            &[(2, 1, 11), (3, 1, 1)],
        )),
        RegistryEntry::Analyzable(builtin(
            "#282",
            [1, 6, 6, 7, 8, 9, 10, 11],
            (1, 42),
            deg_a,
            &[(2, 1, 2), (3, 1, 2), (6, 1, 1), (7, 1, 1)],
        )),
        RegistryEntry::Analyzable(builtin(
            "#308",
            [1, 5, 6, 6, 7, 8, 9, 10],
            (1, 30),
            [14, 15, 16, 16, 17, 18, 18, 19, 20],
            &[(2, 1, 1), (3, 1, 1), (5, 2, 1), (6, 1, 2)],
        )),
        RegistryEntry::MetadataOnly {
            id: "#29374".into(),
            note: "smooth Fano 3-fold of degree 10 in codimension 4; not superrigid, no numerical-data proof applies".into(),
        },
        RegistryEntry::MetadataOnly {
            id: "#78".into(),
            note: "codimension-6 candidate whose existence is unknown".into(),
        },
    ]
}

fn normalize_id(id: &str) -> String {
    let id = id.trim();
    if id.starts_with('#') {
        id.to_string()
    } else {
        format!("#{id}")
    }
}

/// Look up an analyzable registry candidate by id (`#25` or `25`).
pub fn lookup(id: &str) -> Result<FanoCandidate, RegistryError> {
    let key = normalize_id(id);
    for entry in registry() {
        if entry.id() == key {
            return match entry {
                RegistryEntry::Analyzable(c) => Ok(c),
                RegistryEntry::MetadataOnly { id, note } => Err(RegistryError::NotAnalyzable { id, note }),
            };
        }
    }
    Err(RegistryError::Unknown(id.to_string()))
}
