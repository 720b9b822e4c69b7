//! Lemma-level exclusion tests and the per-candidate verification pipeline.
//!
//! Every verdict carries the numbers and sub-certificates it was decided from;
//! [`ExclusionVerdict::replay`] recomputes the status from those alone.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::Serialize;

use crate::blowup::{
    initial_weight, ivr, nef_pairing, weight_product, y_triple, AdmissibleWeight, AffineInE, BlowupClass, BlowupError,
    OrderBound, QuotientPoint,
};
use crate::candidate::{lookup, BasketEntry, CenterSpec, FanoCandidate, Violation};
use crate::explicit::{cluster_certificate, AssumptionLedger, ClusterCertificate, ClusterError, ClusterFormat};
use crate::monomial_model::{
    certify_lowest_part, curve_free_by_ample, guaranteed_pure_powers, index_certificate, stratum_status, FactStatus,
    ModelError, MonomialFact, Stratum, StratumCertificate,
};
use crate::rational::Rational;
use crate::wps::{CoordSet, Monomial, WeightedSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    CurveDegree,
    SmoothPoint,
    HalfPoint,
    IvrCriterion,
    NefPairing,
    CurveFamily,
    CaseSplit,
    /// A curve on the blowup with negative anticanonical degree, cut out by two
    /// proper transforms.
    NegativeCurve,
}

impl Lemma {
    pub fn name(self) -> &'static str {
        match self {
            Lemma::CurveDegree => "curve-degree",
            Lemma::SmoothPoint => "smooth-point",
            Lemma::HalfPoint => "half-point",
            Lemma::IvrCriterion => "ivr-criterion",
            Lemma::NefPairing => "nef-pairing",
            Lemma::CurveFamily => "curve-family",
            Lemma::CaseSplit => "case-split",
            Lemma::NegativeCurve => "negative-curve",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// One governing inequality with its evaluated sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Check {
    Compare { label: String, lhs: Rational, relation: Relation, rhs: Rational, holds: bool },
    /// `expression < 0` for every integer `e >= from`.
    NegativeForAll { label: String, expression: AffineInE, from: i64, holds: bool },
}

impl Check {
    pub fn compare(label: &str, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        let holds = relation.holds(&lhs, &rhs);
        Check::Compare { label: label.to_string(), lhs, relation, rhs, holds }
    }

    pub fn negative_for_all(label: &str, expression: AffineInE, from: i64) -> Self {
        let holds = expression.negative_for_all_from(from);
        Check::NegativeForAll { label: label.to_string(), expression, from, holds }
    }

    /// Re-evaluates the inequality, ignoring the stored flag.
    pub fn recompute(&self) -> bool {
        match self {
            Check::Compare { lhs, relation, rhs, .. } => relation.holds(lhs, rhs),
            Check::NegativeForAll { expression, from, .. } => expression.negative_for_all_from(*from),
        }
    }

    pub fn holds(&self) -> bool {
        match self {
            Check::Compare { holds, .. } | Check::NegativeForAll { holds, .. } => *holds,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Check::Compare { label, .. } | Check::NegativeForAll { label, .. } => label,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: Rational,
}

fn named(name: &str, value: Rational) -> NamedValue {
    NamedValue { name: name.to_string(), value }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Requirement {
    EmptySet,
    CurveFree,
}

/// A general member of the pencil spanned by `generators` vanishes along `E` to
/// exactly `order`: one generator is a local coordinate of that order and the
/// others vanish at least as much.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PencilOrder {
    pub generators: Vec<String>,
    pub n: Rational,
    pub order: Rational,
    pub exact_by: String,
}

/// Build a [`PencilOrder`] from a weight with declared local coordinates.
pub fn pencil_order(space: &WeightedSpace, w: &AdmissibleWeight, gens: CoordSet) -> Result<PencilOrder, ExclusionError> {
    let local = w.local_coordinates().ok_or(ExclusionError::NoLocalCoordinates)?;
    let mut weights = gens.iter().map(|i| space.weight(i));
    let n = weights.next().ok_or(ExclusionError::EmptyPencil)?;
    if weights.any(|x| x != n) {
        return Err(ExclusionError::MixedPencil);
    }
    let exact = gens.intersection(local).iter().next().ok_or(ExclusionError::NoLocalCoordinates)?;
    let order = w.weight_of(exact);
    if gens.iter().any(|i| w.weight_of(i) < order) {
        return Err(ExclusionError::MixedPencil);
    }
    Ok(PencilOrder {
        generators: gens.iter().map(|i| space.name(i).to_string()).collect(),
        n: Rational::from(n),
        order,
        exact_by: space.name(exact).to_string(),
    })
}

/// Certified lowest part used to raise a weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowestPartRecord {
    pub equation: String,
    pub monomial: String,
    pub bumped: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SubCertificate {
    Stratum { role: String, requirement: Requirement, certificate: StratumCertificate },
    /// The point can be moved to the coordinate point of `coordinate`.
    Position { coordinate: String, movable: bool, reason: String },
    OrderBound { bound: OrderBound },
    Weight { weight: String },
    LowestPart { record: LowestPartRecord },
    Pencil { pencil: PencilOrder },
    Branch { branch: Box<CaseBranch> },
    Cluster { certificate: Box<ClusterCertificate> },
}

impl SubCertificate {
    pub fn passes(&self) -> bool {
        match self {
            SubCertificate::Stratum { requirement: Requirement::EmptySet, certificate, .. } => certificate.is_empty_set(),
            SubCertificate::Stratum { requirement: Requirement::CurveFree, certificate, .. } => {
                certificate.is_curve_free()
            }
            SubCertificate::Position { movable, .. } => *movable,
            SubCertificate::Branch { branch } => branch.verdict.replay() == Status::Excluded,
            SubCertificate::Cluster { certificate } => certificate.replay(),
            SubCertificate::OrderBound { .. }
            | SubCertificate::Weight { .. }
            | SubCertificate::LowestPart { .. }
            | SubCertificate::Pencil { .. } => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Excluded,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExclusionVerdict {
    pub center: CenterSpec,
    pub lemma: Lemma,
    pub computed_values: Vec<NamedValue>,
    pub checks: Vec<Check>,
    pub sub_certificates: Vec<SubCertificate>,
    pub status: Status,
    pub notes: Vec<String>,
}

impl ExclusionVerdict {
    fn new(center: CenterSpec, lemma: Lemma) -> Self {
        ExclusionVerdict {
            center,
            lemma,
            computed_values: Vec::new(),
            checks: Vec::new(),
            sub_certificates: Vec::new(),
            status: Status::Inconclusive,
            notes: Vec::new(),
        }
    }

    fn finish(mut self) -> Self {
        self.status = self.replay();
        self
    }

    /// Status recomputed from the recorded checks and sub-certificates.
    pub fn replay(&self) -> Status {
        let composite =
            self.sub_certificates.iter().any(|s| matches!(s, SubCertificate::Branch { .. } | SubCertificate::Cluster { .. }));
        let evidence = match self.lemma {
            Lemma::CaseSplit => self.sub_certificates.iter().any(|s| matches!(s, SubCertificate::Branch { .. })),
            _ => !self.checks.is_empty() || composite,
        };
        if evidence && self.checks.iter().all(Check::recompute) && self.sub_certificates.iter().all(SubCertificate::passes)
        {
            Status::Excluded
        } else {
            Status::Inconclusive
        }
    }

    pub fn value(&self, name: &str) -> Option<&Rational> {
        self.computed_values.iter().find(|v| v.name == name).map(|v| &v.value)
    }

    pub fn is_excluded(&self) -> bool {
        self.status == Status::Excluded
    }
}

/// Normal-form fact about one named equation, used by a case branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormFact {
    pub equation: String,
    pub fact: MonomialFact,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseBranch {
    pub label: String,
    pub assumptions: Vec<String>,
    pub normal_form_facts: Vec<NormalFormFact>,
    pub verdict: ExclusionVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExclusionError {
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("a case split needs at least one branch")]
    NoBranches,
    #[error("the point 1/{r} cannot sit at p_{coordinate}, whose weight is {weight}")]
    WrongPosition { r: u32, coordinate: String, weight: u32 },
    #[error("no divisors given")]
    NoDivisors,
    #[error("the nef divisor scale must be positive")]
    NonPositiveScale,
    #[error("the pencil has no generators")]
    EmptyPencil,
    #[error("pencil generators have different degrees or orders below the exact one")]
    MixedPencil,
    #[error("no local coordinate certifies the pencil order")]
    NoLocalCoordinates,
}


/// Curves: excluded iff `(-K_X)^3 <= 1`.
pub fn test_curves(c: &FanoCandidate) -> ExclusionVerdict {
    let mut v = ExclusionVerdict::new(CenterSpec::curves(), Lemma::CurveDegree);
    v.computed_values.push(named("(-K_X)^3", c.k3.clone()));
    v.checks.push(Check::compare("(-K_X)^3 <= 1", c.k3.clone(), Relation::Le, Rational::one()));
    v.finish()
}

/// Smooth points: excluded iff `m (-K_X)^3 <= 4`, `m = a_{n-1} a_n` unless overridden.
pub fn test_smooth_points(c: &FanoCandidate, isolating_product: Option<u64>) -> ExclusionVerdict {
    let mut v = ExclusionVerdict::new(CenterSpec::smooth_points(), Lemma::SmoothPoint);
    let mut w = c.space.weights();
    w.sort_unstable();
    let default = match w.as_slice() {
        [.., a, b] => u64::from(*a) * u64::from(*b),
        [b] => u64::from(*b),
        [] => 0,
    };
    v.computed_values.push(named("(-K_X)^3", c.k3.clone()));
    v.computed_values.push(named("a_{n-1}*a_n", Rational::from(default)));
    v.computed_values.push(named("a_{n-1}*a_n*(-K_X)^3", &Rational::from(default) * &c.k3));
    let m = match isolating_product {
        Some(m) => {
            v.computed_values.push(named("isolating product", Rational::from(m)));
            v.computed_values.push(named("isolating product*(-K_X)^3", &Rational::from(m) * &c.k3));
            v.notes.push(format!("isolating product overridden to {m} (default {default})"));
            m
        }
        None => default,
    };
    let lhs = &Rational::from(m) * &c.k3;
    v.checks.push(Check::compare("m*(-K_X)^3 <= 4", lhs, Relation::Le, Rational::integer(4)));
    let v = v.finish();
    if v.status == Status::Inconclusive && isolating_product.is_none() {
        let mut v = v;
        v.notes.push(String::from("inconclusive with the default product a_{n-1}*a_n; an isolating product can be supplied"));
        return v;
    }
    v
}

/// `1/2(1,1,1)` points: excluded iff `2 b (-K_X)^3 <= 1`, `b` the largest odd weight.
pub fn test_half_points(c: &FanoCandidate, entry: BasketEntry) -> ExclusionVerdict {
    let mut v = ExclusionVerdict::new(CenterSpec::quotient(entry, None), Lemma::HalfPoint);
    if entry.r != 2 {
        v.notes.push(format!("{} is not a 1/2(1,1,1) point", entry.type_label()));
        return v.finish();
    }
    let space = &c.space;
    let odd = CoordSet::from_indices((0..space.len()).filter(|&i| space.weight(i) % 2 == 1));
    let Some(b) = odd.iter().map(|i| space.weight(i)).max() else {
        v.notes.push(String::from("no coordinate of odd degree"));
        return v.finish();
    };
    let b = Rational::from(b);
    let half = Rational::new(1, 2);
    v.computed_values.push(named("b", b.clone()));
    v.computed_values.push(named("(-K_X)^3", c.k3.clone()));
    v.computed_values.push(named("2*b*(-K_X)^3", &(&Rational::integer(2) * &b) * &c.k3));
    v.computed_values.push(named("nef pairing b*(-K_X)^3 - 1/2", &(&b * &c.k3) - &half));
    v.checks.push(Check::compare("2*b*(-K_X)^3 <= 1", &(&Rational::integer(2) * &b) * &c.k3, Relation::Le, Rational::one()));
    v.sub_certificates.push(SubCertificate::Stratum {
        role: String::from("odd-degree coordinates"),
        requirement: Requirement::CurveFree,
        certificate: index_certificate(space, &Stratum::new(space, odd), &c.basket),
    });
    v.finish()
}

/// Whether a point of index `r` can be moved to `p_{x_k}` by a coordinate change:
/// `a_k = r`, and every point of index `r` has some weight-`r` coordinate nonzero.
pub fn coordinate_point_position(space: &WeightedSpace, r: u32, k: usize) -> SubCertificate {
    let coordinate = space.name(k).to_string();
    if space.weight(k) != r {
        return SubCertificate::Position { coordinate, movable: false, reason: format!("deg {} != {}", space.name(k), r) };
    }
    let divisible = CoordSet::from_indices((0..space.len()).filter(|&i| space.weight(i).is_multiple_of(r)));
    let exact = CoordSet::from_indices(divisible.iter().filter(|&i| space.weight(i) == r));
    let rest = divisible.difference(exact);
    let bad = rest.nonempty_subsets().find(|b| crate::blowup::gcd_of(space, *b) == r);
    match bad {
        Some(b) => SubCertificate::Position {
            coordinate,
            movable: false,
            reason: format!("index-{r} points may lie on the block {} away from weight-{r} coordinates", space.display_set(b)),
        },
        None => SubCertificate::Position {
            coordinate,
            movable: true,
            reason: format!(
                "every index-{r} point has a nonzero coordinate among {}; the others of degree divisible by {r} are shifted away",
                space.display_set(exact)
            ),
        },
    }
}

/// Singular point at `p_{x_k}`: excluded iff `Pi_X(C + x_k)` is empty and
/// `ivr(C) >= wp (-K_X)^3`.
pub fn test_ivr(
    c: &FanoCandidate,
    entry: BasketEntry,
    k: usize,
    set: CoordSet,
    facts: &[MonomialFact],
) -> Result<ExclusionVerdict, ExclusionError> {
    let space = &c.space;
    if space.weight(k) != entry.r {
        return Err(ExclusionError::WrongPosition { r: entry.r, coordinate: space.name(k).to_string(), weight: space.weight(k) });
    }
    let p = QuotientPoint::from_basket(&entry, Some(k))?;
    let value = ivr(space, &p, set)?;
    let wp = Rational::from(weight_product(&p));
    let bound = &wp * &c.k3;
    let mut v = ExclusionVerdict::new(CenterSpec::quotient(entry, Some(space.name(k))), Lemma::IvrCriterion);
    v.computed_values.push(named("ivr", value.clone()));
    v.computed_values.push(named("wp", wp));
    v.computed_values.push(named("(-K_X)^3", c.k3.clone()));
    v.computed_values.push(named("wp*(-K_X)^3", bound.clone()));
    v.checks.push(Check::compare("ivr >= wp*(-K_X)^3", value, Relation::Ge, bound));
    v.notes.push(format!("C = {}", space.display_set(set)));
    v.sub_certificates.push(coordinate_point_position(space, entry.r, k));
    v.sub_certificates.push(SubCertificate::Stratum {
        role: format!("C + {}", space.name(k)),
        requirement: Requirement::EmptySet,
        certificate: stratum_status(c, &Stratum::new(space, set.with(k)), facts),
    });
    Ok(v.finish())
}

/// Nef divisor `scale (-phi^*K_X - e E)` with `e` the least vanishing ratio of the
/// divisors; excluded iff their intersection is curve-free and the pairing with
/// `(-K_Y)^2` is `<= 0`.
pub fn test_nef(
    c: &FanoCandidate,
    center: CenterSpec,
    p: &QuotientPoint,
    divisors: &[OrderBound],
    finiteness: StratumCertificate,
    scale: Rational,
) -> Result<ExclusionVerdict, ExclusionError> {
    let e = divisors.iter().map(OrderBound::ratio).min().ok_or(ExclusionError::NoDivisors)?;
    if !scale.is_positive() {
        return Err(ExclusionError::NonPositiveScale);
    }
    let n = BlowupClass::new(Rational::one(), e.clone()).scale(&scale);
    let pairing = nef_pairing(&n, p, &c.k3);
    let mut v = ExclusionVerdict::new(center, Lemma::NefPairing);
    v.computed_values.push(named("e", e));
    v.computed_values.push(named("N.n", n.n.clone()));
    v.computed_values.push(named("N.lambda", n.lam.clone()));
    v.computed_values.push(named("wp", Rational::from(weight_product(p))));
    v.computed_values.push(named("(-K_X)^3", c.k3.clone()));
    v.computed_values.push(named("N.(-K_Y)^2", pairing.clone()));
    v.checks.push(Check::compare("N.(-K_Y)^2 <= 0", pairing, Relation::Le, Rational::zero()));
    let mut coords: Vec<String> = divisors.iter().map(|d| d.coordinate.clone()).collect();
    coords.sort();
    coords.dedup();
    let mut zeroed = finiteness.zeroed.clone();
    zeroed.sort();
    if zeroed != coords {
        v.notes.push(format!("finiteness certificate is for {:?}, not the divisors {:?}", finiteness.zeroed, coords));
        v.checks.push(Check::compare("finiteness certificate matches the divisors", Rational::zero(), Relation::Eq, Rational::one()));
    }
    v.sub_certificates.push(SubCertificate::Stratum {
        role: String::from("intersection of the divisors"),
        requirement: Requirement::CurveFree,
        certificate: finiteness,
    });
    v.sub_certificates.extend(divisors.iter().map(|d| SubCertificate::OrderBound { bound: d.clone() }));
    Ok(v.finish())
}

/// Divisor `S` and a pencil: excluded iff `S` meets the base locus in no curve and
/// `(-K_Y . S~ . L~) <= 0` at the certified bounds.
pub fn test_curve_family(
    c: &FanoCandidate,
    center: CenterSpec,
    p: &QuotientPoint,
    s: &OrderBound,
    l: &PencilOrder,
    base: StratumCertificate,
) -> ExclusionVerdict {
    let sc = BlowupClass::new(s.n.clone(), s.bound.clone());
    let lc = BlowupClass::new(l.n.clone(), l.order.clone());
    let value = y_triple(&BlowupClass::anticanonical(p), &sc, &lc, p, &c.k3);
    let mut v = ExclusionVerdict::new(center, Lemma::CurveFamily);
    v.computed_values.push(named("S.n", s.n.clone()));
    v.computed_values.push(named("ord_E(S)", s.bound.clone()));
    v.computed_values.push(named("L.n", l.n.clone()));
    v.computed_values.push(named("ord_E(L)", l.order.clone()));
    v.computed_values.push(named("(-K_X)^3", c.k3.clone()));
    v.computed_values.push(named("(-K_Y.S~.L~)", value.clone()));
    v.checks.push(Check::compare("(-K_Y.S~.L~) <= 0", value, Relation::Le, Rational::zero()));
    let mut want: Vec<String> = l.generators.clone();
    want.push(s.coordinate.clone());
    want.sort();
    want.dedup();
    let mut zeroed = base.zeroed.clone();
    zeroed.sort();
    if zeroed != want {
        v.notes.push(format!("base-locus certificate is for {:?}, not {:?}", base.zeroed, want));
        v.checks.push(Check::compare("base-locus certificate matches", Rational::zero(), Relation::Eq, Rational::one()));
    }
    v.sub_certificates.push(SubCertificate::Stratum {
        role: String::from("S meets the base locus"),
        requirement: Requirement::CurveFree,
        certificate: base,
    });
    v.sub_certificates.push(SubCertificate::OrderBound { bound: s.clone() });
    v.sub_certificates.push(SubCertificate::Pencil { pencil: l.clone() });
    v.finish()
}

/// Excluded iff every declared branch is excluded.
pub fn run_case_split(center: CenterSpec, condition: &str, branches: Vec<CaseBranch>) -> Result<ExclusionVerdict, ExclusionError> {
    if branches.is_empty() {
        return Err(ExclusionError::NoBranches);
    }
    let mut v = ExclusionVerdict::new(center, Lemma::CaseSplit);
    v.notes.push(format!("split on {condition}"));
    for b in branches {
        v.sub_certificates.push(SubCertificate::Branch { branch: Box::new(b) });
    }
    Ok(v.finish())
}

/// Verdict from the explicit-equation argument at the `1/6(1,1,5)` point of #282.
pub fn cluster_verdict(center: CenterSpec, cert: Result<ClusterCertificate, ClusterError>) -> ExclusionVerdict {
    let mut v = ExclusionVerdict::new(center, Lemma::NegativeCurve);
    match cert {
        Ok(cert) => {
            v.computed_values.push(named("e_min", Rational::integer(cert.e_min)));
            v.computed_values.push(named("triple constant", cert.triple.constant.clone()));
            v.computed_values.push(named("triple slope", cert.triple.slope.clone()));
            v.checks.push(Check::negative_for_all("(-K_Y.D~_p.D~_q) < 0", cert.triple.clone(), cert.e_min));
            v.notes.push(format!("{} format", cert.format));
            v.sub_certificates.push(SubCertificate::Cluster { certificate: Box::new(cert) });
        }
        Err(e) => v.notes.push(format!("explicit argument unavailable: {e}")),
    }
    v.finish()
}

/// Subsets of `set` with at most `max` elements, by size then coordinate order.
fn small_subsets(set: CoordSet, max: usize) -> Vec<CoordSet> {
    let mut out: Vec<CoordSet> = set.nonempty_subsets().filter(|s| s.len() <= max).collect();
    out.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
    out
}

const AUTO_MAX_SET: usize = 5;

/// Bounded automatic search for one basket entry.
pub fn auto_quotient(c: &FanoCandidate, entry: BasketEntry, facts: &[MonomialFact]) -> ExclusionVerdict {
    let space = &c.space;
    let mut tried = Vec::new();
    if entry.r == 2 {
        let v = test_half_points(c, entry);
        if v.is_excluded() {
            return v;
        }
        tried.push(String::from("half-point lemma fails"));
    }
    let Ok(p0) = QuotientPoint::from_basket(&entry, None) else {
        let mut v = ExclusionVerdict::new(CenterSpec::quotient(entry, None), Lemma::IvrCriterion);
        v.notes.push(format!("{} is not terminal", entry.type_label()));
        return v;
    };
    let wp = Rational::from(weight_product(&p0));
    let threshold = &wp * &c.k3;
    let positions: Vec<usize> = (0..space.len())
        .filter(|&k| matches!(coordinate_point_position(space, entry.r, k), SubCertificate::Position { movable: true, .. }))
        .collect();

    let mut fallback: Option<ExclusionVerdict> = None;
    for &k in &positions {
        let p = QuotientPoint::from_basket(&entry, Some(k)).expect("terminal");
        let good = CoordSet::from_indices((0..space.len()).filter(|&i| {
            i != k && ivr(space, &p, CoordSet::single(i)).is_ok_and(|x| x >= threshold)
        }));
        for set in small_subsets(good, AUTO_MAX_SET) {
            if stratum_status(c, &Stratum::new(space, set.with(k)), facts).is_empty_set() {
                let mut v = test_ivr(c, entry, k, set, facts).expect("valid position");
                v.notes.push(String::from("found by automatic search"));
                return v;
            }
        }
        if fallback.is_none() && !good.is_empty() {
            let mut v = test_ivr(c, entry, k, good, facts).expect("valid position");
            v.notes.push(String::from("largest admissible C; Pi_X(C + x_k) not certified empty"));
            fallback = Some(v);
        }
    }
    tried.push(String::from("no C with ivr >= wp*(-K_X)^3 and certified empty Pi_X(C + x_k)"));

    let mut nef_positions: Vec<Option<usize>> = positions.iter().copied().map(Some).collect();
    nef_positions.push(None);
    for pos in nef_positions {
        let p = QuotientPoint::from_basket(&entry, pos).expect("terminal");
        let w = initial_weight(&p, space);
        let usable = CoordSet::from_indices(
            p.vanishing(space).iter().filter(|&i| w.order_bound(space, i).is_ok_and(|b| b.ratio() >= threshold)),
        );
        for set in small_subsets(usable, AUTO_MAX_SET) {
            let cert = stratum_status(c, &Stratum::new(space, set), facts);
            let cert = if cert.is_curve_free() {
                Some(cert)
            } else {
                space
                    .all()
                    .difference(set)
                    .iter()
                    .map(|k| curve_free_by_ample(c, set, k, facts))
                    .find(StratumCertificate::is_curve_free)
            };
            if let Some(cert) = cert {
                let bounds: Vec<OrderBound> = set.iter().map(|i| w.order_bound(space, i).expect("vanishing")).collect();
                let center = CenterSpec::quotient(entry, pos.map(|k| space.name(k)));
                let mut v = test_nef(c, center, &p, &bounds, cert, Rational::one()).expect("non-empty divisors");
                if let Some(k) = pos {
                    v.sub_certificates.push(coordinate_point_position(space, entry.r, k));
                    v = v.finish();
                }
                v.notes.push(String::from("found by automatic search"));
                return v;
            }
        }
    }
    tried.push(String::from("no curve-free divisor intersection with nef pairing <= 0 under the initial weight"));

    let mut v = fallback.unwrap_or_else(|| ExclusionVerdict::new(CenterSpec::quotient(entry, None), Lemma::IvrCriterion));
    v.notes.extend(tried);
    v.finish()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub isolating_product: Option<u64>,
    pub format: Option<ClusterFormat>,
    pub assume_q_in_s6: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { isolating_product: None, format: None, assume_q_in_s6: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// The registry candidate's fixed sequence of lemmas.
    Scripted,
    /// Bounded search over coordinate sets.
    Automatic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Overall {
    Superrigid,
    Unresolved { centers: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub candidate: String,
    pub strategy: Strategy,
    pub options: VerifyOptions,
    pub facts: Vec<MonomialFact>,
    pub verdicts: Vec<ExclusionVerdict>,
    pub overall: Overall,
    pub assumptions: AssumptionLedger,
}

impl Verification {
    pub fn verdict_for(&self, query: &str) -> Option<&ExclusionVerdict> {
        self.verdicts.iter().find(|v| v.center.matches(query))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("invalid candidate: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("inconsistent candidate: {0}")]
    Inconsistent(ModelError),
    #[error("explicit formats only apply to #282, not {0}")]
    FormatNotApplicable(String),
}

/// Every center class of `c` tested in report order.
pub fn verify(c: &FanoCandidate, opts: &VerifyOptions) -> Result<Verification, VerifyError> {
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(VerifyError::Invalid(violations));
    }
    let registry = lookup(&c.id).ok().filter(|r| r == c);
    if opts.format.is_some() && registry.as_ref().is_none_or(|r| r.id != "#282") {
        return Err(VerifyError::FormatNotApplicable(c.id.clone()));
    }
    let facts = guaranteed_pure_powers(c).map_err(VerifyError::Inconsistent)?;
    let mut assumptions = AssumptionLedger::new();
    assumptions.assume("X is quasi-smooth", "hypothesis");
    let strategy = if registry.is_some() { Strategy::Scripted } else { Strategy::Automatic };

    let mut verdicts = alloc::vec![test_curves(c), test_smooth_points(c, opts.isolating_product)];
    for &entry in &c.basket {
        let v = match strategy {
            Strategy::Scripted => scripted(c, entry, &facts, opts, &mut assumptions),
            Strategy::Automatic => auto_quotient(c, entry, &facts),
        };
        verdicts.push(v);
    }
    let unresolved: Vec<String> = verdicts.iter().filter(|v| !v.is_excluded()).map(|v| v.center.label()).collect();
    let overall = if unresolved.is_empty() { Overall::Superrigid } else { Overall::Unresolved { centers: unresolved } };
    Ok(Verification {
        candidate: c.id.clone(),
        strategy,
        options: opts.clone(),
        facts,
        verdicts,
        overall,
        assumptions,
    })
}

fn scripted(
    c: &FanoCandidate,
    entry: BasketEntry,
    facts: &[MonomialFact],
    opts: &VerifyOptions,
    ledger: &mut AssumptionLedger,
) -> ExclusionVerdict {
    let space = &c.space;
    let ix = |n: &str| space.index_of(n).expect("registry coordinate");
    let set = |ns: &[&str]| space.set_of(ns).expect("registry coordinates");
    let ivr_at = |k: &str, cs: &[&str]| test_ivr(c, entry, ix(k), set(cs), facts).expect("registry script");
    match (c.id.as_str(), entry.r, entry.a) {
        ("#25" | "#282" | "#308", 2, 1) => test_half_points(c, entry),
        ("#25", 5, _) => ivr_at("q", &["p", "s", "u", "v"]),
        ("#25", 7, _) | ("#166", 3, _) | ("#282", 7, _) => ivr_at("s", &["p", "q", "r"]),
        ("#166", 2, 1) => ivr_at("p", &["q", "r", "s", "t", "u"]),
        ("#282", 3, _) => nef_general(c, entry, &["p", "s", "t", "w"], Rational::one(), facts),
        ("#308", 3, _) => nef_general(c, entry, &["p", "q", "u"], Rational::integer(8), facts),
        ("#308", 6, _) => ivr_at("s", &["p", "q", "r"]),
        ("#308", 5, _) => split_308(c, entry, facts),
        ("#282", 6, _) => match opts.format {
            Some(format) => {
                let cert = cluster_certificate(format, opts.assume_q_in_s6);
                if let Ok(cert) = &cert {
                    for a in cert.assumptions.entries() {
                        match a.nonzero {
                            Some(p) => ledger.assume_nonzero(p, &a.provenance),
                            None => ledger.assume(&a.statement, &a.provenance),
                        }
                    }
                }
                cluster_verdict(CenterSpec::quotient(entry, Some("r")), cert)
            }
            None => auto_quotient(c, entry, facts),
        },
        _ => auto_quotient(c, entry, facts),
    }
}

/// Nef test at a point off the coordinate points, with the divisors' initial orders.
fn nef_general(c: &FanoCandidate, entry: BasketEntry, divisors: &[&str], scale: Rational, facts: &[MonomialFact]) -> ExclusionVerdict {
    let space = &c.space;
    let p = QuotientPoint::from_basket(&entry, None).expect("terminal");
    let w = initial_weight(&p, space);
    let set = space.set_of(divisors).expect("registry coordinates");
    let bounds: Vec<OrderBound> = set.iter().map(|i| w.order_bound(space, i).expect("vanishing")).collect();
    let cert = stratum_status(c, &Stratum::new(space, set), facts);
    test_nef(c, CenterSpec::quotient(entry, None), &p, &bounds, cert, scale).expect("registry script")
}

fn nf(space: &WeightedSpace, equation: &str, degree: u32, m: &Monomial, status: FactStatus, reason: &str) -> NormalFormFact {
    NormalFormFact { equation: equation.to_string(), fact: MonomialFact::new(space, m.clone(), degree, status, reason) }
}

fn facts_for(all: &[NormalFormFact], equation: &str) -> Vec<MonomialFact> {
    all.iter().filter(|f| f.equation == equation).map(|f| f.fact.clone()).collect()
}

/// The `1/5(1,2,3)` point of #308 at `p_q`, split on whether the `q^2 r`, `q^2 s`
/// coefficients of the two degree-16 equations are independent.
fn split_308(c: &FanoCandidate, entry: BasketEntry, facts: &[MonomialFact]) -> ExclusionVerdict {
    let space = &c.space;
    let ix = |n: &str| space.index_of(n).expect("registry coordinate");
    let m = |pairs: &[(&str, u32)]| Monomial::from_pairs(space, pairs).expect("registry coordinate");
    let q3p = m(&[("q", 3), ("p", 1)]);
    let q2r = m(&[("q", 2), ("r", 1)]);
    let q2s = m(&[("q", 2), ("s", 1)]);
    let center = CenterSpec::quotient(entry, Some("q"));
    let p = QuotientPoint::from_basket(&entry, Some(ix("q"))).expect("terminal");
    let w0 = initial_weight(&p, space);
    let position = coordinate_point_position(space, entry.r, ix("q"));

    let a_reason = "normal form after replacing r and s";
    let a_facts = alloc::vec![
        nf(space, "F3", 16, &q2r, FactStatus::Guaranteed, a_reason),
        nf(space, "F3", 16, &q3p, FactStatus::Absent, a_reason),
        nf(space, "F3", 16, &q2s, FactStatus::Absent, a_reason),
        nf(space, "F4", 16, &q2s, FactStatus::Guaranteed, a_reason),
        nf(space, "F4", 16, &q3p, FactStatus::Absent, a_reason),
        nf(space, "F4", 16, &q2r, FactStatus::Absent, a_reason),
    ];
    let branch_a = (|| -> Result<ExclusionVerdict, ExclusionError> {
        let w = w0.clone().with_local_coordinates(space, space.set_of(&["p", "t", "u"]).expect("coords"))?;
        let f3 = certify_lowest_part(space, &w, "F3", 16, &facts_for(&a_facts, "F3"), &q2r)?;
        let w1 = w.weight_bump(space, &f3)?;
        let f4 = certify_lowest_part(space, &w1, "F4", 16, &facts_for(&a_facts, "F4"), &q2s)?;
        let w2 = w1.weight_bump(space, &f4)?;
        let set = space.set_of(&["p", "r", "s"]).expect("coords");
        let bounds: Vec<OrderBound> = set.iter().map(|i| w2.order_bound(space, i)).collect::<Result<_, _>>()?;
        let cert = curve_free_by_ample(c, set, ix("q"), facts);
        let mut v = test_nef(c, center.clone(), &p, &bounds, cert, Rational::one())?;
        v.sub_certificates.push(position.clone());
        v.sub_certificates.push(SubCertificate::Weight { weight: w2.display(space) });
        for (eq, mono, var) in [("F3", &q2r, "r"), ("F4", &q2s, "s")] {
            v.sub_certificates.push(SubCertificate::LowestPart {
                record: LowestPartRecord {
                    equation: eq.into(),
                    monomial: space.display_monomial(mono).to_string(),
                    bumped: var.into(),
                },
            });
        }
        Ok(v.finish())
    })();

    let b_reason = "normal form after replacing r and s and possibly interchanging F3 and F4";
    let b_facts = alloc::vec![
        nf(space, "F3", 16, &q3p, FactStatus::Guaranteed, b_reason),
        nf(space, "F3", 16, &q2r, FactStatus::Absent, b_reason),
        nf(space, "F3", 16, &q2s, FactStatus::Absent, b_reason),
        nf(space, "F4", 16, &q2s, FactStatus::Guaranteed, b_reason),
        nf(space, "F4", 16, &q3p, FactStatus::Absent, b_reason),
        nf(space, "F4", 16, &q2r, FactStatus::Absent, b_reason),
    ];
    let branch_b = (|| -> Result<ExclusionVerdict, ExclusionError> {
        let w = w0.clone().with_local_coordinates(space, space.set_of(&["r", "t", "u"]).expect("coords"))?;
        let f3 = certify_lowest_part(space, &w, "F3", 16, &facts_for(&b_facts, "F3"), &q3p)?;
        let w1 = w.weight_bump(space, &f3)?;
        let s = w1.order_bound(space, ix("p"))?;
        let pencil = pencil_order(space, &w1, space.set_of(&["r", "s"]).expect("coords"))?;
        let base = curve_free_by_ample(c, space.set_of(&["p", "r", "s"]).expect("coords"), ix("q"), facts);
        let mut v = test_curve_family(c, center.clone(), &p, &s, &pencil, base);
        v.sub_certificates.push(position.clone());
        v.sub_certificates.push(SubCertificate::Weight { weight: w1.display(space) });
        v.sub_certificates.push(SubCertificate::LowestPart {
            record: LowestPartRecord {
                equation: "F3".into(),
                monomial: space.display_monomial(&q3p).to_string(),
                bumped: "p".into(),
            },
        });
        Ok(v.finish())
    })();

    let failed = |e: ExclusionError, lemma: Lemma| {
        let mut v = ExclusionVerdict::new(center.clone(), lemma);
        v.notes.push(format!("branch script failed: {e}"));
        v
    };
    let branches = alloc::vec![
        CaseBranch {
            label: String::from("A"),
            assumptions: alloc::vec![String::from("mu*nu' - nu*mu' != 0")],
            normal_form_facts: a_facts,
            verdict: branch_a.unwrap_or_else(|e| failed(e, Lemma::NefPairing)),
        },
        CaseBranch {
            label: String::from("B"),
            assumptions: alloc::vec![String::from("mu*nu' - nu*mu' = 0")],
            normal_form_facts: b_facts,
            verdict: branch_b.unwrap_or_else(|e| failed(e, Lemma::CurveFamily)),
        },
    ];
    run_case_split(center, "mu*nu' - nu*mu' (coefficients of q^2 r, q^2 s in the degree-16 equations)", branches)
        .expect("two branches")
}
