//! Variable elimination and point counting for small polynomial systems.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use super::param::{AssumptionLedger, ParamScalar};
use super::poly::ParamPolynomial;
use crate::wps::{CoordSet, WeightedSpace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("cannot eliminate {variable}: no equation is linear in it with a certified coefficient")]
    NotApplicable { variable: String },
}

/// `x_variable = value`, read off equation `equation` (index into the input system).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub variable: usize,
    pub value: ParamPolynomial,
    pub equation: usize,
}

/// Solve one equation for `var` and substitute everywhere. The equation used
/// becomes zero and stays in place so indices remain stable.
pub fn eliminate(
    system: &[ParamPolynomial],
    var: usize,
    ledger: &AssumptionLedger,
    space: &WeightedSpace,
) -> Result<(Vec<ParamPolynomial>, Substitution), SolveError> {
    for (k, f) in system.iter().enumerate() {
        if let Some((c, g)) = f.linear_in(var, ledger) {
            let inv = c.inverse(ledger).expect("certified");
            let value = g.scale(&-&inv);
            let out = system.iter().map(|h| h.substitute(var, &value)).collect();
            return Ok((out, Substitution { variable: var, value, equation: k }));
        }
    }
    Err(SolveError::NotApplicable { variable: space.name(var).to_string() })
}

/// Repeatedly eliminate variables of `candidates`, scanning equations in order
/// and, within an equation, variables in coordinate order.
pub fn auto_eliminate(
    system: &[ParamPolynomial],
    candidates: CoordSet,
    ledger: &AssumptionLedger,
) -> (Vec<ParamPolynomial>, Vec<Substitution>) {
    let mut sys: Vec<ParamPolynomial> = system.to_vec();
    let mut subs = Vec::new();
    let mut remaining = candidates;
    'outer: loop {
        for (k, f) in sys.iter().enumerate() {
            for v in remaining.intersection(f.support()).iter() {
                if let Some((c, g)) = f.linear_in(v, ledger) {
                    let inv = c.inverse(ledger).expect("certified");
                    let value = g.scale(&-&inv);
                    sys = sys.iter().map(|h| h.substitute(v, &value)).collect();
                    subs.push(Substitution { variable: v, value, equation: k });
                    remaining.remove(v);
                    continue 'outer;
                }
            }
        }
        return (sys, subs);
    }
}

/// Values of solved variables after back-substitution.
pub fn back_substitute(subs: &[Substitution], sol: &mut Vec<(usize, ParamPolynomial)>) {
    for s in subs.iter().rev() {
        let mut v = s.value.clone();
        for (i, val) in sol.iter() {
            v = v.substitute(*i, val);
        }
        sol.push((s.variable, v));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    pub chart: String,
    /// Coordinates in the order of the counted variables.
    pub coordinates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum PointCount {
    Finite { points: Vec<PointRecord> },
    Inconclusive { reason: String },
}

impl PointCount {
    pub fn count(&self) -> Option<usize> {
        match self {
            PointCount::Finite { points } => Some(points.len()),
            PointCount::Inconclusive { .. } => None,
        }
    }
}

type Assignment = Vec<(usize, ParamScalar)>;

/// Points of `(equations = 0)` in the weighted projective space on `vars` with
/// the given weights (indexed by coordinate), all other coordinates being absent
/// from the equations. Charts are taken in the order of `vars`: chart `i` sets
/// the earlier variables to 0 and `x_i = 1`.
pub fn count_points(
    space: &WeightedSpace,
    weights: &[u32],
    vars: &[usize],
    equations: &[ParamPolynomial],
    ledger: &AssumptionLedger,
) -> PointCount {
    let all = CoordSet::from_indices(vars.iter().copied());
    for f in equations {
        if !f.support().is_subset(all) {
            return PointCount::Inconclusive { reason: "equation involves a coordinate outside the counted space".into() };
        }
    }
    let mut points = Vec::new();
    for (i, &chart) in vars.iter().enumerate() {
        let earlier = CoordSet::from_indices(vars[..i].iter().copied());
        let free = CoordSet::from_indices(vars[i + 1..].iter().copied());
        let eqs: Vec<ParamPolynomial> = equations.iter().map(|f| f.restrict(earlier).dehomogenize(chart)).collect();
        let sols = match solve(eqs, free, ledger) {
            Ok(s) => s,
            Err(reason) => {
                return PointCount::Inconclusive { reason: alloc::format!("chart {}=1: {}", space.name(chart), reason) };
            }
        };
        if sols.len() > 1 && weights[chart] > 1 {
            return PointCount::Inconclusive {
                reason: alloc::format!(
                    "chart {}=1 has {} solutions under a cyclic group of order {}",
                    space.name(chart),
                    sols.len(),
                    weights[chart]
                ),
            };
        }
        for sol in sols {
            let coords = vars
                .iter()
                .map(|&v| {
                    if earlier.contains(v) {
                        "0".to_string()
                    } else if v == chart {
                        "1".to_string()
                    } else {
                        sol.iter().find(|(k, _)| *k == v).map(|(_, c)| c.to_string()).unwrap_or_default()
                    }
                })
                .collect();
            points.push(PointRecord { chart: space.name(chart).to_string(), coordinates: coords });
        }
    }
    PointCount::Finite { points }
}

/// All solutions of an affine system in the variables `free`.
fn solve(eqs: Vec<ParamPolynomial>, free: CoordSet, ledger: &AssumptionLedger) -> Result<Vec<Assignment>, String> {
    let eqs: Vec<ParamPolynomial> = eqs.into_iter().filter(|f| !f.is_zero()).collect();
    if eqs.is_empty() {
        if free.is_empty() {
            return Ok(alloc::vec![Vec::new()]);
        }
        return Err("positive-dimensional solution set".into());
    }
    for f in &eqs {
        if let Some(c) = f.as_constant() {
            return if c.is_certified_nonzero(ledger) { Ok(Vec::new()) } else { Err(alloc::format!("constant {c} not certified nonzero")) };
        }
    }
    // A single term c*m forces a variable of m to vanish.
    for f in &eqs {
        if f.len() != 1 {
            continue;
        }
        let (m, c) = f.terms().next().expect("one term");
        if !c.is_certified_nonzero(ledger) {
            return Err(alloc::format!("coefficient {c} not certified nonzero"));
        }
        let mut out: Vec<Assignment> = Vec::new();
        for v in m.support().iter() {
            let zeroed = CoordSet::single(v);
            let sub: Vec<ParamPolynomial> = eqs.iter().map(|g| g.restrict(zeroed)).collect();
            for mut s in solve(sub, free.difference(zeroed), ledger)? {
                s.push((v, ParamScalar::zero()));
                s.sort_by_key(|(k, _)| *k);
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        return Ok(out);
    }
    for f in &eqs {
        for v in f.support().iter() {
            if let Some((c, g)) = f.linear_in(v, ledger) {
                let inv = c.inverse(ledger).expect("certified");
                let value = g.scale(&-&inv);
                let sub: Vec<ParamPolynomial> = eqs.iter().map(|h| h.substitute(v, &value)).collect();
                let mut out = Vec::new();
                for mut s in solve(sub, free.difference(CoordSet::single(v)), ledger)? {
                    let mut val = value.clone();
                    for (k, x) in &s {
                        val = val.substitute(*k, &ParamPolynomial::constant(val.nvars(), x.clone()));
                    }
                    let x = val.as_constant().ok_or("back-substitution left free variables")?;
                    s.push((v, x));
                    s.sort_by_key(|(k, _)| *k);
                    out.push(s);
                }
                return Ok(out);
            }
        }
    }
    Err("no elimination rule applies".into())
}

#[cfg(test)]
mod tests {
    use super::super::param::Param;
    use super::*;

    fn space() -> WeightedSpace {
        WeightedSpace::from_pairs(&[("s", 1), ("t", 2), ("u", 3), ("v", 4), ("w", 5)]).unwrap()
    }

    fn x(i: usize) -> ParamPolynomial {
        ParamPolynomial::var(5, i)
    }

    fn lam() -> ParamScalar {
        ParamScalar::param(Param::Lambda)
    }

    fn ledger() -> AssumptionLedger {
        let mut l = AssumptionLedger::new();
        l.assume_nonzero(Param::Lambda, "test");
        l
    }

    #[test]
    fn eliminate_requires_linear_certified() {
        let sp = space();
        let l = ledger();
        let sys = alloc::vec![&x(0) + &x(1).pow(2), &x(0) * &x(2)];
        let (out, sub) = eliminate(&sys, 0, &l, &sp).unwrap();
        assert_eq!(sub.equation, 0);
        assert!(out[0].is_zero());
        assert_eq!(out[1].to_string_in(&sp), "-t^2*u");
        assert!(matches!(eliminate(&sys, 4, &l, &sp), Err(SolveError::NotApplicable { .. })));
        let unc = alloc::vec![x(0).scale(&ParamScalar::param(Param::Mu))];
        assert!(eliminate(&unc, 0, &l, &sp).is_err());
    }

    #[test]
    fn counts_two_points() {
        // s^2 + lambda t, lambda u - s t, s u - lambda v, s w + u^2
        let sp = space();
        let l = ledger();
        let eqs = alloc::vec![
            &x(0).pow(2) + &x(1).scale(&lam()),
            &x(2).scale(&lam()) - &(&x(0) * &x(1)),
            &(&x(0) * &x(2)) - &x(3).scale(&lam()),
            &(&x(0) * &x(4)) + &x(2).pow(2),
        ];
        let c = count_points(&sp, &sp.weights(), &[0, 1, 2, 3, 4], &eqs, &l);
        assert_eq!(c.count(), Some(2), "{c:?}");
        if let PointCount::Finite { points } = c {
            assert_eq!(points[0].chart, "s");
            assert_eq!(points[0].coordinates[1], "-lambda^-1");
            assert_eq!(points[1].chart, "w");
        }
    }

    #[test]
    fn positive_dimension_is_inconclusive() {
        let sp = space();
        let l = ledger();
        let eqs = alloc::vec![&x(0).pow(2) + &x(1).scale(&lam())];
        assert!(count_points(&sp, &sp.weights(), &[0, 1, 2, 3, 4], &eqs, &l).count().is_none());
    }

    #[test]
    fn uncertified_constant_is_inconclusive() {
        let sp = space();
        let l = AssumptionLedger::new();
        let eqs = alloc::vec![&ParamPolynomial::constant(5, lam()) + &x(1)];
        assert!(matches!(count_points(&sp, &sp.weights(), &[0, 1], &eqs, &l), PointCount::Inconclusive { .. }));
    }

    #[test]
    fn auto_elimination_chain() {
        let sp = space();
        let l = ledger();
        // s + u^2, t - u v, -lambda u + v^2
        let sys = alloc::vec![&x(0) + &x(2).pow(2), &x(1) - &(&x(2) * &x(3)), &x(2).scale(&-&lam()) + &x(3).pow(2)];
        let (out, subs) = auto_eliminate(&sys, CoordSet::from_indices([0, 1, 2]), &l);
        assert!(out.iter().all(|f| f.is_zero()));
        let order: alloc::vec::Vec<&str> = subs.iter().map(|s| sp.name(s.variable)).collect();
        assert_eq!(order, ["s", "t", "u"]);
        let mut sol = alloc::vec![];
        back_substitute(&subs, &mut sol);
        assert_eq!(sol.last().unwrap().1.to_string_in(&sp), "-lambda^-2*v^4");
    }
}
