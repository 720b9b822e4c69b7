//! Generic-coefficient reasoning on coordinate strata of `X`.
//!
//! An equation of degree `d` may contain any monomial of degree `d` with unknown
//! coefficient; only monomials recorded as guaranteed are known to be nonzero.
//! Every certificate produced here must therefore hold for all coefficient values.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::blowup::{gcd_of, AdmissibleWeight, LowestPartFact};
use crate::candidate::{BasketEntry, FanoCandidate};
use crate::wps::{CoordSet, Monomial, WeightedSpace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("coordinate `{coordinate}` must appear as a pure power, but no equation degree is divisible by {weight}")]
    NoPurePowerDegree { coordinate: String, weight: u32 },
    #[error("lowest part of {equation} is not the single monomial {target}: {detail}")]
    LowestPartNotUnique { equation: String, target: String, detail: String },
    #[error("{0} is not of the form x_k^m x_i with x_k the center")]
    NotTangentMonomial(String),
    #[error("monomial {monomial} has degree {actual}, expected {expected}")]
    WrongDegree { monomial: String, actual: u64, expected: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactStatus {
    /// Present with nonzero coefficient.
    Guaranteed,
    /// May or may not be present.
    Possible,
    /// Coefficient normalized to zero.
    Absent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialFact {
    pub monomial: Monomial,
    pub display: String,
    pub equation_degree: u32,
    pub status: FactStatus,
    pub reason: String,
}

impl MonomialFact {
    pub fn new(space: &WeightedSpace, monomial: Monomial, equation_degree: u32, status: FactStatus, reason: &str) -> Self {
        MonomialFact {
            display: space.display_monomial(&monomial).to_string(),
            monomial,
            equation_degree,
            status,
            reason: reason.to_string(),
        }
    }
}

/// Pure powers forced by quasi-smoothness: a coordinate of unique weight `a > 1`
/// whose index-`a` point is missing from the basket appears as a pure power.
pub fn guaranteed_pure_powers(c: &FanoCandidate) -> Result<Vec<MonomialFact>, ModelError> {
    let space = &c.space;
    let mut out = Vec::new();
    for k in 0..space.len() {
        let a = space.weight(k);
        if a <= 1 || (0..space.len()).any(|j| j != k && space.weight(j) == a) || c.has_index(a) {
            continue;
        }
        let degrees: BTreeSet<u32> = c.eq_degrees.iter().copied().filter(|d| d % a == 0).collect();
        let name = space.name(k);
        match degrees.len() {
            0 => {
                return Err(ModelError::NoPurePowerDegree { coordinate: name.to_string(), weight: a });
            }
            1 => {
                let d = *degrees.iter().next().expect("one degree");
                let reason = format!("p_{name} not in X: no index-{a} basket entry; {d} is the only degree divisible by {a}");
                out.push(MonomialFact::new(space, Monomial::var(space.len(), k, d / a), d, FactStatus::Guaranteed, &reason));
            }
            _ => {
                for &d in &degrees {
                    let reason = format!("p_{name} not in X, but several degrees are divisible by {a}");
                    out.push(MonomialFact::new(space, Monomial::var(space.len(), k, d / a), d, FactStatus::Possible, &reason));
                }
            }
        }
    }
    out.sort_by_key(|f| (f.equation_degree, f.monomial.support().bits().trailing_zeros()));
    Ok(out)
}

/// `Pi(zeroed)`: the locus where the zeroed coordinates vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub zeroed: CoordSet,
    pub live: CoordSet,
}

impl Stratum {
    pub fn new(space: &WeightedSpace, zeroed: CoordSet) -> Self {
        let all = space.all();
        let zeroed = zeroed.intersection(all);
        Stratum { zeroed, live: all.difference(zeroed) }
    }

    pub fn named(space: &WeightedSpace, zeroed: &[&str]) -> Result<Self, crate::wps::SpaceError> {
        Ok(Stratum::new(space, space.set_of(zeroed)?))
    }
}

/// Support of a degree-`d` equation restricted to the stratum.
pub fn restrict_support(c: &FanoCandidate, d: u32, s: &Stratum) -> Vec<Monomial> {
    c.space.monomials_of_degree(u64::from(d), s.live)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    EmptyByChain,
    EmptyByIndex,
    FiniteByIndex,
    /// `Pi_X(C)` is finite because `Pi_X(C + x_k)` is empty and `D_k` is ample.
    FiniteByAmple,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KilledMonomial {
    pub monomial: String,
    pub killed_by: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPoints {
    pub index: u32,
    pub points: Vec<BasketEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum StratumStep {
    /// The degree-`d` equation restricts to `x^m` once earlier variables vanish.
    Chain {
        variable: String,
        equation_degree: u32,
        pure_power: String,
        others: Vec<KilledMonomial>,
    },
    /// A block of coordinates whose sub-blocks all have an index missing from the
    /// basket, and which no equation mixes with the rest.
    Block {
        block: Vec<String>,
        indices: Vec<u32>,
        block_only_degrees: Vec<u32>,
        mixed_degrees: Vec<u32>,
    },
    /// Residual live set on which every point is a singular point of the given indices.
    Index { live: Vec<String>, indices: Vec<IndexPoints> },
    /// Finiteness via an ample coordinate divisor.
    Ample { coordinate: String, certificate: StratumCertificate },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumCertificate {
    pub kind: CertificateKind,
    pub zeroed: Vec<String>,
    pub steps: Vec<StratumStep>,
    pub residual_live: Vec<String>,
}

impl StratumCertificate {
    pub fn is_empty_set(&self) -> bool {
        matches!(self.kind, CertificateKind::EmptyByChain | CertificateKind::EmptyByIndex)
    }

    /// Empty or finite: in either case no curve.
    pub fn is_curve_free(&self) -> bool {
        self.kind != CertificateKind::Inconclusive
    }

    /// The chain steps as `(variable, degree)` pairs, in order.
    pub fn chain_steps(&self) -> Vec<(String, u32)> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                StratumStep::Chain { variable, equation_degree, .. } => Some((variable.clone(), *equation_degree)),
                _ => None,
            })
            .collect()
    }

    /// Singular points reported by a finite-by-index step.
    pub fn index_points(&self) -> Vec<IndexPoints> {
        self.steps
            .iter()
            .find_map(|s| match s {
                StratumStep::Index { indices, .. } => Some(indices.clone()),
                _ => None,
            })
            .unwrap_or_default()
    }
}

fn names(space: &WeightedSpace, set: CoordSet) -> Vec<String> {
    set.iter().map(|i| space.name(i).to_string()).collect()
}

/// Indices `gcd(B)` over non-empty `B` in `set`; `None` if some sub-block has gcd 1.
pub fn sub_block_indices(space: &WeightedSpace, set: CoordSet) -> Option<BTreeSet<u32>> {
    let mut out = BTreeSet::new();
    for b in set.nonempty_subsets() {
        let g = gcd_of(space, b);
        if g == 1 {
            return None;
        }
        out.insert(g);
    }
    Some(out)
}

fn index_points(basket: &[BasketEntry], indices: &BTreeSet<u32>) -> Vec<IndexPoints> {
    indices
        .iter()
        .map(|&r| IndexPoints { index: r, points: basket.iter().filter(|b| b.r == r).copied().collect() })
        .filter(|p| !p.points.is_empty())
        .collect()
}

/// Points of the stratum grouped by which coordinates are nonzero: a point whose
/// nonzero coordinates are exactly `B` is a quotient singularity of index `gcd(B)`.
pub fn index_certificate(space: &WeightedSpace, s: &Stratum, basket: &[BasketEntry]) -> StratumCertificate {
    let zeroed = names(space, s.zeroed);
    let live = names(space, s.live);
    if s.live.is_empty() {
        return StratumCertificate { kind: CertificateKind::EmptyByIndex, zeroed, steps: Vec::new(), residual_live: live };
    }
    let kind_steps = match sub_block_indices(space, s.live) {
        None => (CertificateKind::Inconclusive, Vec::new()),
        Some(indices) => {
            let pts = index_points(basket, &indices);
            let kind = if pts.is_empty() {
                CertificateKind::EmptyByIndex
            } else {
                CertificateKind::FiniteByIndex
            };
            (kind, alloc::vec![StratumStep::Index { live: live.clone(), indices: pts }])
        }
    };
    StratumCertificate { kind: kind_steps.0, zeroed, steps: kind_steps.1, residual_live: live }
}

struct PurePower {
    var: usize,
    exp: u32,
    degree: u32,
}

#[derive(Clone)]
struct Outcome {
    rank: u8,
    steps: Vec<StratumStep>,
    residual: CoordSet,
    used_blocks: bool,
}

struct Search<'a> {
    c: &'a FanoCandidate,
    origin: CoordSet,
    powers: Vec<PurePower>,
    degrees: Vec<u32>,
    allow_blocks: bool,
    memo: BTreeMap<(u64, u64), Outcome>,
}

impl Search<'_> {
    fn degree_bit(&self, d: u32) -> u64 {
        1 << self.degrees.iter().position(|&x| x == d).expect("known degree")
    }

    fn killer(&self, m: &Monomial, order: &[usize], live: CoordSet) -> String {
        let space = &self.c.space;
        order
            .iter()
            .find(|&&v| m.exp(v) > 0)
            .map(|&v| space.name(v).to_string())
            .unwrap_or_else(|| {
                // Killed by a coordinate removed through a block step.
                m.support()
                    .difference(live)
                    .iter()
                    .next()
                    .map(|v| space.name(v).to_string())
                    .unwrap_or_default()
            })
    }

    fn blocks(&self, live: CoordSet) -> Vec<(CoordSet, StratumStep)> {
        let space = &self.c.space;
        let mut out = Vec::new();
        for b in live.nonempty_subsets() {
            let Some(indices) = sub_block_indices(space, b) else { continue };
            if indices.iter().any(|&r| self.c.has_index(r)) {
                continue;
            }
            let mut only = Vec::new();
            let mut mixed = Vec::new();
            let mut ok = true;
            for &d in &self.degrees {
                let support = space.monomials_of_degree(u64::from(d), live);
                let n_only = support.iter().filter(|m| m.support().is_subset(b)).count();
                if n_only == 0 {
                    if !support.is_empty() {
                        mixed.push(d);
                    }
                } else if n_only == support.len() {
                    only.push(d);
                } else {
                    ok = false;
                    break;
                }
            }
            if ok {
                let step = StratumStep::Block {
                    block: names(space, b),
                    indices: indices.into_iter().collect(),
                    block_only_degrees: only,
                    mixed_degrees: mixed,
                };
                out.push((b, step));
            }
        }
        out
    }

    fn chain_moves(&self, live: CoordSet, used: u64, order: &[usize]) -> Vec<(usize, u64, StratumStep)> {
        let space = &self.c.space;
        let mut out = Vec::new();
        for pp in &self.powers {
            let bit = self.degree_bit(pp.degree);
            if !live.contains(pp.var) || used & bit != 0 {
                continue;
            }
            let pure = Monomial::var(space.len(), pp.var, pp.exp);
            if space.monomials_of_degree(u64::from(pp.degree), live) != [pure.clone()] {
                continue;
            }
            let others = space
                .monomials_of_degree(u64::from(pp.degree), self.origin)
                .into_iter()
                .filter(|m| *m != pure)
                .map(|m| KilledMonomial {
                    killed_by: self.killer(&m, order, live),
                    monomial: space.display_monomial(&m).to_string(),
                })
                .collect();
            let step = StratumStep::Chain {
                variable: space.name(pp.var).to_string(),
                equation_degree: pp.degree,
                pure_power: space.display_monomial(&pure).to_string(),
                others,
            };
            out.push((pp.var, bit, step));
        }
        out
    }

    // Depth-first over chain moves, then block moves; the first path that empties the
    // stratum wins, otherwise the best residual classification.
    fn run(&mut self, live: CoordSet, used: u64, order: &mut Vec<usize>) -> Outcome {
        if let Some(o) = self.memo.get(&(live.bits(), used)) {
            return o.clone();
        }
        let space = &self.c.space;
        let mut best = if live.is_empty() {
            Outcome { rank: 2, steps: Vec::new(), residual: live, used_blocks: false }
        } else if let Some(indices) = sub_block_indices(space, live).filter(|_| self.allow_blocks) {
            let step = StratumStep::Index { live: names(space, live), indices: index_points(&self.c.basket, &indices) };
            Outcome { rank: 1, steps: alloc::vec![step], residual: live, used_blocks: true }
        } else {
            Outcome { rank: 0, steps: Vec::new(), residual: live, used_blocks: false }
        };
        if best.rank < 2 {
            for (var, bit, step) in self.chain_moves(live, used, order) {
                order.push(var);
                let mut sub = live;
                sub.remove(var);
                let rest = self.run(sub, used | bit, order);
                order.pop();
                if rest.rank > best.rank {
                    let mut steps = alloc::vec![step];
                    steps.extend(rest.steps);
                    best = Outcome { rank: rest.rank, steps, residual: rest.residual, used_blocks: rest.used_blocks };
                    if best.rank == 2 {
                        break;
                    }
                }
            }
        }
        if best.rank < 2 && self.allow_blocks {
            for (b, step) in self.blocks(live) {
                let rest = self.run(live.difference(b), used, order);
                if rest.rank > best.rank {
                    let mut steps = alloc::vec![step];
                    steps.extend(rest.steps);
                    best = Outcome { rank: rest.rank, steps, residual: rest.residual, used_blocks: true };
                    if best.rank == 2 {
                        break;
                    }
                }
            }
        }
        self.memo.insert((live.bits(), used), best.clone());
        best
    }
}

fn search(c: &FanoCandidate, s: &Stratum, facts: &[MonomialFact], allow_blocks: bool) -> StratumCertificate {
    let space = &c.space;
    let powers = facts
        .iter()
        .filter(|f| f.status == FactStatus::Guaranteed)
        .filter_map(|f| f.monomial.as_pure_power().map(|(var, exp)| PurePower { var, exp, degree: f.equation_degree }))
        .collect();
    let degrees: Vec<u32> = c.eq_degrees.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut st = Search { c, origin: s.live, powers, degrees, allow_blocks, memo: BTreeMap::new() };
    let out = st.run(s.live, 0, &mut Vec::new());
    let kind = match out.rank {
        2 if out.used_blocks => CertificateKind::EmptyByIndex,
        2 => CertificateKind::EmptyByChain,
        1 => CertificateKind::FiniteByIndex,
        _ => CertificateKind::Inconclusive,
    };
    StratumCertificate { kind, zeroed: names(space, s.zeroed), steps: out.steps, residual_live: names(space, out.residual) }
}

/// Elimination by guaranteed pure powers only. The search is exhaustive over orders,
/// and each equation degree is used at most once.
pub fn chain_certificate(c: &FanoCandidate, s: &Stratum, facts: &[MonomialFact]) -> StratumCertificate {
    search(c, s, facts, false)
}

/// Chain steps interleaved with index blocks, then index stratification of the rest.
pub fn stratum_status(c: &FanoCandidate, s: &Stratum, facts: &[MonomialFact]) -> StratumCertificate {
    search(c, s, facts, true)
}

/// `Pi_X(C)` contains no curve if `Pi_X(C + x_k)` is empty, `D_k` being ample.
pub fn curve_free_by_ample(c: &FanoCandidate, zeroed: CoordSet, k: usize, facts: &[MonomialFact]) -> StratumCertificate {
    let space = &c.space;
    let sub = stratum_status(c, &Stratum::new(space, zeroed.with(k)), facts);
    let kind = if sub.is_empty_set() { CertificateKind::FiniteByAmple } else { CertificateKind::Inconclusive };
    let live = space.all().difference(zeroed);
    StratumCertificate {
        kind,
        zeroed: names(space, zeroed),
        steps: alloc::vec![StratumStep::Ample { coordinate: space.name(k).to_string(), certificate: sub }],
        residual_live: names(space, live),
    }
}

/// Certify that the `w`-lowest part of a degree-`degree` equation is exactly `target`,
/// given the normal-form facts about its coefficients. Monomials without a fact are
/// treated as possibly present.
pub fn certify_lowest_part(
    space: &WeightedSpace,
    w: &AdmissibleWeight,
    equation: &str,
    degree: u32,
    normal_form: &[MonomialFact],
    target: &Monomial,
) -> Result<LowestPartFact, ModelError> {
    let show = |m: &Monomial| space.display_monomial(m).to_string();
    let center = w.point.at_coordinate.ok_or_else(|| ModelError::NotTangentMonomial(show(target)))?;
    let rest = target.with_exp(center, 0);
    let coordinate = match rest.as_pure_power() {
        Some((i, 1)) if target.exp(center) > 0 => i,
        _ => return Err(ModelError::NotTangentMonomial(show(target))),
    };
    let actual = space.degree(target);
    if actual != u64::from(degree) {
        return Err(ModelError::WrongDegree { monomial: show(target), actual, expected: u64::from(degree) });
    }
    let status_of = |m: &Monomial| {
        normal_form
            .iter()
            .find(|f| f.equation_degree == degree && &f.monomial == m)
            .map(|f| f.status)
            .unwrap_or(FactStatus::Possible)
    };
    if status_of(target) != FactStatus::Guaranteed {
        return Err(ModelError::LowestPartNotUnique {
            equation: equation.to_string(),
            target: show(target),
            detail: String::from("target coefficient is not certified nonzero"),
        });
    }
    let present: Vec<(u64, Monomial)> = space
        .monomials_of_degree(u64::from(degree), space.all())
        .into_iter()
        .filter(|m| status_of(m) != FactStatus::Absent)
        .map(|m| (w.weigh(&m), m))
        .collect();
    let min = present.iter().map(|(x, _)| *x).min().unwrap_or(0);
    let lowest: Vec<&Monomial> = present.iter().filter(|(x, _)| *x == min).map(|(_, m)| m).collect();
    if lowest != [target] {
        let list: Vec<String> = lowest.iter().map(|m| show(m)).collect();
        return Err(ModelError::LowestPartNotUnique {
            equation: equation.to_string(),
            target: show(target),
            detail: format!("lowest weight {}/{} attained by {{{}}}", min, w.point.r, list.join(", ")),
        });
    }
    Ok(LowestPartFact::new(equation.to_string(), coordinate, target.clone(), w.numerators().to_vec()))
}
