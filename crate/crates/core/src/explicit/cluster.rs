//! Exclusion of the `1/6(1,1,5)` point of #282 from explicit equations.
//!
//! With `Gamma = (p = q = 0) ∩ X`, the argument needs: `Gamma` is an
//! irreducible reduced curve (plane-curve reduction on one chart plus a boundary
//! check), `D~_p ∩ D~_q ∩ E` is finite (count on the exceptional divisor), and
//! `(D~_p^2 . D~_q) < 0` for every admissible order of `q`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use super::irreducible::{quadratic_irreducibility, IrreducibilityCertificate, IrreducibilityError};
use super::param::{AssumptionLedger, ParamScalar, NUM_PARAMS};
use super::poly::{ParamPolynomial, RenderedPolynomial};
use super::solve::{auto_eliminate, count_points, PointCount, Substitution};
use super::systems::{format_system, ClusterFormat, FormatSystem};
use super::template::{SetAsideTerm, TemplateError};
use crate::blowup::{initial_weight, y_triple, AffineInE, BlowupClass, QuotientPoint};
use crate::monomial_model::{curve_free_by_ample, guaranteed_pure_powers, stratum_status, Stratum, StratumCertificate};
use crate::rational::Rational;
use crate::wps::{residue, CoordSet, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClusterError {
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Irreducibility(#[from] IrreducibilityError),
    #[error("plane-curve reduction failed: {0}")]
    Reduction(String),
    #[error("no set of tangent equations realises the point type")]
    NoTangentEquations,
    #[error("initial part of {0} is not visible on the stratum")]
    HiddenInitialPart(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseRecord {
    pub form: String,
    pub on_stratum: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedSubstitution {
    pub variable: String,
    pub value: String,
    pub from_equation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Multiple {
    pub equation: String,
    pub quotient: String,
}

/// `Gamma` on one chart, reduced to a single plane curve.
#[derive(Debug, Clone, Serialize)]
pub struct PlaneCurveReduction {
    pub chart: String,
    pub kept: [String; 2],
    pub substitutions: Vec<RenderedSubstitution>,
    pub generator_equation: String,
    pub generator: String,
    pub multiples: Vec<Multiple>,
    #[serde(skip)]
    pub chart_system: Vec<ParamPolynomial>,
    #[serde(skip)]
    pub raw_substitutions: Vec<Substitution>,
    #[serde(skip)]
    pub curve: ParamPolynomial,
    #[serde(skip)]
    pub main: usize,
    #[serde(skip)]
    pub other: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentEquation {
    pub equation: String,
    pub tangent: String,
    pub coefficient: ParamScalar,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExceptionalPresentation {
    pub weight: String,
    pub tangent_equations: Vec<TangentEquation>,
    pub local_coordinates: Vec<String>,
    /// Initial parts restricted to `p = q = 0` on the chart of the center.
    pub equations: Vec<RenderedPolynomial>,
    pub count: PointCount,
    #[serde(skip)]
    pub polys: Vec<ParamPolynomial>,
    #[serde(skip)]
    pub vars: Vec<usize>,
    #[serde(skip)]
    pub weights: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryCheck {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<PointCount>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub strata: Vec<StratumCertificate>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterCertificate {
    pub format: ClusterFormat,
    pub assumptions: AssumptionLedger,
    pub collapses: Vec<CollapseRecord>,
    pub restricted: Vec<RenderedPolynomial>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub set_aside: Vec<(String, SetAsideTerm)>,
    pub plane_curve: PlaneCurveReduction,
    pub irreducibility: IrreducibilityCertificate,
    pub boundary: BoundaryCheck,
    pub exceptional: ExceptionalPresentation,
    pub e_min: i64,
    pub triple: AffineInE,
    pub holds: bool,
}

impl ClusterCertificate {
    /// Recompute `holds` from the recorded parts.
    pub fn replay(&self) -> bool {
        self.irreducibility.irreducible
            && self.boundary.holds
            && self.exceptional.count.count().is_some()
            && self.triple.negative_for_all_from(self.e_min)
    }
}

impl ExceptionalPresentation {
    /// Point count with the parameters replaced by numbers.
    pub fn count_at(&self, values: &[Rational; NUM_PARAMS], space: &crate::WeightedSpace) -> Option<usize> {
        let polys: Option<Vec<_>> = self.polys.iter().map(|f| f.instantiate(values)).collect();
        count_points(space, &self.weights, &self.vars, &polys?, &AssumptionLedger::new()).count()
    }
}

const STRATUM: [&str; 2] = ["p", "q"];

fn chart_and_kept(format: ClusterFormat) -> (&'static str, [&'static str; 2]) {
    match format {
        ClusterFormat::G2 => ("w", ["r", "v"]),
        ClusterFormat::C2 => ("s", ["r", "t"]),
    }
}

pub fn plane_curve_reduction(sys: &FormatSystem) -> Result<PlaneCurveReduction, ClusterError> {
    let space = sys.space();
    let zeroed = sys.set(&STRATUM);
    let (chart_name, kept_names) = chart_and_kept(sys.format);
    let chart = sys.index(chart_name);
    let kept = sys.set(&kept_names);
    let chart_system: Vec<ParamPolynomial> = sys.restrict(zeroed)?.iter().map(|f| f.dehomogenize(chart)).collect();
    let candidates = space.all().difference(zeroed).difference(kept).difference(CoordSet::single(chart));
    let (reduced, subs) = auto_eliminate(&chart_system, candidates, &sys.ledger);
    let remaining: Vec<(usize, &ParamPolynomial)> = reduced.iter().enumerate().filter(|(_, f)| !f.is_zero()).collect();
    if remaining.is_empty() {
        return Err(ClusterError::Reduction("every equation vanished".into()));
    }
    if let Some((k, _)) = remaining.iter().find(|(_, f)| !f.support().is_subset(kept)) {
        return Err(ClusterError::Reduction(alloc::format!("{} still involves eliminated variables", sys.equations[*k].label)));
    }
    let label = |k: usize| sys.equations[k].label.clone();
    for &(k, h) in &remaining {
        let mut multiples = Vec::new();
        let mut ok = true;
        for &(j, f) in &remaining {
            if j == k {
                continue;
            }
            match f.div_exact(h, &sys.ledger) {
                Some(q) => multiples.push(Multiple { equation: label(j), quotient: q.to_string_in(space) }),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let substitutions = subs
                .iter()
                .map(|s| RenderedSubstitution {
                    variable: space.name(s.variable).to_string(),
                    value: s.value.to_string_in(space),
                    from_equation: label(s.equation),
                })
                .collect();
            return Ok(PlaneCurveReduction {
                chart: chart_name.to_string(),
                kept: kept_names.map(String::from),
                substitutions,
                generator_equation: label(k),
                generator: h.to_string_in(space),
                multiples,
                chart_system,
                raw_substitutions: subs,
                curve: h.clone(),
                main: sys.index(kept_names[0]),
                other: sys.index(kept_names[1]),
            });
        }
    }
    Err(ClusterError::Reduction("no remaining equation divides the others".into()))
}

pub fn exceptional_presentation(sys: &FormatSystem) -> Result<ExceptionalPresentation, ClusterError> {
    let space = sys.space();
    let center = sys.index("r");
    let point = QuotientPoint::new(6, 1, Some(center)).expect("terminal");
    let w0 = initial_weight(&point, space);
    let b = w0.numerators().to_vec();
    let zeroed = sys.set(&STRATUM);

    // Tangent terms r^m x_i whose coefficient is certified and whose weight is
    // the minimum of the equation.
    let mut tangents: Vec<(usize, usize, ParamScalar, Monomial)> = Vec::new();
    for (l, t) in sys.equations.iter().enumerate() {
        let min = t.min_weight(space, &sys.forms, &b);
        for i in 0..space.len() {
            if i == center || t.degree < u64::from(space.weight(i)) {
                continue;
            }
            let rest = t.degree - u64::from(space.weight(i));
            let r = u64::from(space.weight(center));
            if rest == 0 || rest % r != 0 {
                continue;
            }
            let target = Monomial::var(space.len(), i, 1).with_exp(center, (rest / r) as u32);
            let Ok(c) = t.coefficient_of(&target, space, &sys.forms) else { continue };
            if c.is_certified_nonzero(&sys.ledger) && min == Some(u64::from(b[i])) {
                tangents.push((l, i, c, target));
            }
        }
    }
    let others: Vec<usize> = (0..space.len()).filter(|&i| i != center).collect();
    let mut target_types = [1, point.a, point.r - point.a];
    target_types.sort_unstable();
    let codim = sys.candidate.codimension();
    let chosen = choose_tangents(&tangents, codim, &mut Vec::new(), 0, &|picked: &[usize]| {
        let used = CoordSet::from_indices(picked.iter().map(|&k| tangents[k].1));
        let mut res: Vec<u32> =
            others.iter().filter(|i| !used.contains(**i)).map(|&i| residue(i64::from(space.weight(i)), point.r)).collect();
        res.sort_unstable();
        res == target_types
    })
    .ok_or(ClusterError::NoTangentEquations)?;
    let used = CoordSet::from_indices(chosen.iter().map(|&k| tangents[k].1));
    let local: Vec<usize> = others.iter().copied().filter(|i| !used.contains(*i)).collect();

    let mut polys = Vec::new();
    let mut equations = Vec::new();
    for &k in &chosen {
        let t = &sys.equations[tangents[k].0];
        if !t.set_aside_vanish_on(zeroed) {
            return Err(ClusterError::HiddenInitialPart(t.label.clone()));
        }
        let on = t.collapse(space, &sys.forms, zeroed)?;
        if on.min_weight(&b) != t.min_weight(space, &sys.forms, &b) {
            return Err(ClusterError::HiddenInitialPart(t.label.clone()));
        }
        let f = on.initial_part(&b).dehomogenize(center);
        equations.push(RenderedPolynomial { label: t.label.to_lowercase(), polynomial: f.to_string_in(space) });
        polys.push(f);
    }
    let vars: Vec<usize> = others.iter().copied().filter(|i| !zeroed.contains(*i)).collect();
    let count = count_points(space, &b, &vars, &polys, &sys.ledger);
    Ok(ExceptionalPresentation {
        weight: w0.display(space),
        tangent_equations: chosen
            .iter()
            .map(|&k| TangentEquation {
                equation: sys.equations[tangents[k].0].label.clone(),
                tangent: space.display_monomial(&tangents[k].3).to_string(),
                coefficient: tangents[k].2.clone(),
            })
            .collect(),
        local_coordinates: local.iter().map(|&i| space.name(i).to_string()).collect(),
        equations,
        count,
        polys,
        vars,
        weights: b,
    })
}

/// First choice of `n` tangent terms with distinct equations and coordinates
/// accepted by `accept`, in lexicographic order of indices.
fn choose_tangents(
    tangents: &[(usize, usize, ParamScalar, Monomial)],
    n: usize,
    picked: &mut Vec<usize>,
    from: usize,
    accept: &dyn Fn(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    if picked.len() == n {
        return accept(picked).then(|| picked.clone());
    }
    for k in from..tangents.len() {
        let (l, i, _, _) = tangents[k];
        if picked.iter().any(|&j| tangents[j].0 == l || tangents[j].1 == i) {
            continue;
        }
        picked.push(k);
        if let Some(found) = choose_tangents(tangents, n, picked, k + 1, accept) {
            return Some(found);
        }
        picked.pop();
    }
    None
}

fn boundary_check(sys: &FormatSystem) -> Result<BoundaryCheck, ClusterError> {
    let space = sys.space();
    match sys.format {
        ClusterFormat::G2 => {
            let zeroed = sys.set(&["p", "q", "w"]);
            let eqs = sys.restrict(zeroed)?;
            let vars: Vec<usize> = space.all().difference(zeroed).iter().collect();
            let count = count_points(space, &space.weights(), &vars, &eqs, &sys.ledger);
            let holds = count.count().is_some();
            Ok(BoundaryCheck {
                description: "Gamma ∩ (w = 0) is finite".into(),
                count: Some(count),
                strata: Vec::new(),
                holds,
            })
        }
        ClusterFormat::C2 => {
            let c = &sys.candidate;
            let facts = guaranteed_pure_powers(c).map_err(|e| ClusterError::Reduction(e.to_string()))?;
            let empty = stratum_status(c, &Stratum::new(space, sys.set(&["p", "q", "r", "s"])), &facts);
            let finite = curve_free_by_ample(c, sys.set(&["p", "q", "s"]), sys.index("r"), &facts);
            let holds = empty.is_empty_set() && finite.is_curve_free();
            Ok(BoundaryCheck {
                description: "Gamma ∩ (s = 0) = Pi_X(p,q,s) contains no curve".into(),
                count: None,
                strata: alloc::vec![empty, finite],
                holds,
            })
        }
    }
}

pub fn cluster_certificate(format: ClusterFormat, assume_q_in_s6: bool) -> Result<ClusterCertificate, ClusterError> {
    let sys = format_system(format, assume_q_in_s6)?;
    let space = sys.space();
    let zeroed = sys.set(&STRATUM);
    let collapses = sys
        .forms
        .iter()
        .map(|f| Ok(CollapseRecord { form: f.name.clone(), on_stratum: f.collapse(space, zeroed)?.to_string_in(space) }))
        .collect::<Result<Vec<_>, TemplateError>>()?;
    let restricted = sys
        .restrict(zeroed)?
        .iter()
        .zip(&sys.equations)
        .map(|(f, t)| RenderedPolynomial { label: t.label.clone(), polynomial: f.to_string_in(space) })
        .collect();
    let set_aside = sys
        .equations
        .iter()
        .flat_map(|t| t.set_aside.iter().map(|(_, s)| (t.label.clone(), s.clone())))
        .collect();
    let plane_curve = plane_curve_reduction(&sys)?;
    let irreducibility = quadratic_irreducibility(&plane_curve.curve, plane_curve.main, plane_curve.other, &sys.ledger, space)?;
    let boundary = boundary_check(&sys)?;
    let exceptional = exceptional_presentation(&sys)?;

    let center = sys.index("r");
    let point = QuotientPoint::new(6, 1, Some(center)).expect("terminal");
    let w0 = initial_weight(&point, space);
    let k3 = sys.candidate.k3.clone();
    let dp = w0.order_bound(space, sys.index("p")).expect("p vanishes at p_r");
    let dq = w0.order_bound(space, sys.index("q")).expect("q vanishes at p_r");
    let r = Rational::from(point.r);
    let e_min_q = &dq.bound * &r;
    let e_min = i64::try_from(e_min_q.numer() / e_min_q.denom()).expect("small");
    let p_class = BlowupClass::new(dp.n.clone(), dp.bound.clone());
    let triple = AffineInE::interpolate(|e| {
        let q_class = BlowupClass::new(dq.n.clone(), e / &r);
        y_triple(&p_class, &p_class, &q_class, &point, &k3)
    });
    let mut cert = ClusterCertificate {
        format,
        assumptions: sys.ledger.clone(),
        collapses,
        restricted,
        set_aside,
        plane_curve,
        irreducibility,
        boundary,
        exceptional,
        e_min,
        triple,
        holds: false,
    };
    cert.holds = cert.replay();
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g2_plane_curve() {
        let sys = format_system(ClusterFormat::G2, true).unwrap();
        let pc = plane_curve_reduction(&sys).unwrap();
        let order: Vec<&str> = pc.substitutions.iter().map(|s| s.variable.as_str()).collect();
        assert_eq!(order, ["s", "t", "u"]);
        assert_eq!(pc.substitutions[0].value, "-u^2");
        assert_eq!(pc.substitutions[1].value, "u*v");
        assert_eq!(pc.substitutions[2].value, "mu^-1*v^2");
        assert_eq!(pc.generator_equation, "F9");
        assert_eq!(pc.generator, "-lambda*r^2*v - mu^-3*r*v^6 + 1");
        assert_eq!(pc.multiples.len(), 2);
    }

    #[test]
    fn c2_plane_curve() {
        let sys = format_system(ClusterFormat::C2, true).unwrap();
        let pc = plane_curve_reduction(&sys).unwrap();
        let order: Vec<(&str, &str)> = pc.substitutions.iter().map(|s| (s.variable.as_str(), s.value.as_str())).collect();
        assert_eq!(order[..3], [("u", "-nu*t^2"), ("v", "nu*t^3"), ("w", "-mu*nu*t^4")]);
        assert_eq!(pc.generator_equation, "F6");
        assert_eq!(pc.generator, "-lambda*nu*r^2*t + r + mu^2*nu^2*t^6");
    }

    #[test]
    fn exceptional_counts() {
        for (fmt, eqs) in [(ClusterFormat::G2, ["F4", "F7", "F8", "F9"]), (ClusterFormat::C2, ["F4", "F6", "F8", "F9"])] {
            let sys = format_system(fmt, true).unwrap();
            let ex = exceptional_presentation(&sys).unwrap();
            let got: Vec<&str> = ex.tangent_equations.iter().map(|t| t.equation.as_str()).collect();
            assert_eq!(got, eqs);
            assert_eq!(ex.local_coordinates, ["p", "s", "w"]);
            assert_eq!(ex.count.count(), Some(2), "{fmt}: {:?}", ex.count);
        }
    }

    #[test]
    fn g2_initial_parts() {
        let sys = format_system(ClusterFormat::G2, true).unwrap();
        let ex = exceptional_presentation(&sys).unwrap();
        let got: Vec<&str> = ex.equations.iter().map(|e| e.polynomial.as_str()).collect();
        assert_eq!(got, ["s*w + u^2", "s^2 + lambda*t", "-s*t + lambda*mu*u", "s*u - lambda*v"]);
    }

    #[test]
    fn certificates_hold() {
        for fmt in ClusterFormat::ALL {
            let cert = cluster_certificate(fmt, true).unwrap();
            assert!(cert.holds, "{fmt}");
            assert_eq!(cert.e_min, 6);
            assert_eq!(cert.triple.to_string(), "1/7 - e/30");
        }
    }

    #[test]
    fn g2_boundary_points() {
        let cert = cluster_certificate(ClusterFormat::G2, true).unwrap();
        let Some(PointCount::Finite { points }) = &cert.boundary.count else { panic!() };
        let charts: Vec<&str> = points.iter().map(|p| p.chart.as_str()).collect();
        assert_eq!(charts, ["r", "s"]);
        for p in points {
            assert_eq!(p.coordinates.iter().filter(|c| *c == "0").count(), 4);
        }
    }

    #[test]
    fn c2_needs_q_in_s6() {
        assert!(matches!(cluster_certificate(ClusterFormat::C2, false), Err(ClusterError::Template(_))));
    }
}
