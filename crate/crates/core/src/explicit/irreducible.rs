//! Irreducibility of primitive quadratics `a r^2 + b r + c` over `K[v]`.
//!
//! The quadratic is irreducible over `K(v)` when its discriminant is not a
//! square there; an odd degree or odd `v`-adic valuation with certified
//! coefficient witnesses that. Primitivity (some coefficient a unit) lifts this
//! to `K[v, r]`.

use alloc::string::String;

use serde::Serialize;

use super::param::{AssumptionLedger, ParamScalar};
use super::poly::ParamPolynomial;
use crate::wps::{CoordSet, Monomial, WeightedSpace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IrreducibilityError {
    #[error("polynomial has degree {degree} in the main variable, expected 2")]
    NotQuadratic { degree: u32 },
    #[error("polynomial involves variables other than the two given")]
    NotBivariate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NonSquareWitness {
    OddDegree { degree: u32, leading: ParamScalar },
    OddValuation { valuation: u32, lowest: ParamScalar },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityCertificate {
    pub main_variable: String,
    pub other_variable: String,
    pub a: String,
    pub b: String,
    pub c: String,
    pub discriminant: String,
    pub unit_coefficient: Option<String>,
    pub witness: Option<NonSquareWitness>,
    pub irreducible: bool,
}

/// `b^2 - 4 a c` for `f` quadratic in `main`.
pub fn discriminant(f: &ParamPolynomial, main: usize) -> Result<ParamPolynomial, IrreducibilityError> {
    let degree = f.degree_in(main).unwrap_or(0);
    if degree != 2 {
        return Err(IrreducibilityError::NotQuadratic { degree });
    }
    let a = f.coefficient_in(main, 2);
    let b = f.coefficient_in(main, 1);
    let c = f.coefficient_in(main, 0);
    Ok(&(&b * &b) - &(&a * &c).scale(&ParamScalar::integer(4)))
}

pub fn quadratic_irreducibility(
    f: &ParamPolynomial,
    main: usize,
    other: usize,
    ledger: &AssumptionLedger,
    space: &WeightedSpace,
) -> Result<IrreducibilityCertificate, IrreducibilityError> {
    if !f.support().is_subset(CoordSet::from_indices([main, other])) {
        return Err(IrreducibilityError::NotBivariate);
    }
    let disc = discriminant(f, main)?;
    let coeffs = [2, 1, 0].map(|k| f.coefficient_in(main, k));
    let unit = coeffs
        .iter()
        .zip(["a", "b", "c"])
        .find(|(p, _)| p.as_constant().is_some_and(|c| c.is_certified_nonzero(ledger)))
        .map(|(_, name)| String::from(name));
    let n = f.nvars();
    let witness = {
        let top = disc.degree_in(other).unwrap_or(0);
        let low = disc.terms().map(|(m, _)| m.exp(other)).min().unwrap_or(0);
        let lead = disc.coefficient(&Monomial::var(n, other, top));
        let lowest = disc.coefficient(&Monomial::var(n, other, low));
        if !disc.is_zero() && top % 2 == 1 && lead.is_certified_nonzero(ledger) {
            Some(NonSquareWitness::OddDegree { degree: top, leading: lead })
        } else if !disc.is_zero() && low % 2 == 1 && lowest.is_certified_nonzero(ledger) {
            Some(NonSquareWitness::OddValuation { valuation: low, lowest })
        } else {
            None
        }
    };
    let [a, b, c] = coeffs.map(|p| p.to_string_in(space));
    Ok(IrreducibilityCertificate {
        main_variable: space.name(main).into(),
        other_variable: space.name(other).into(),
        a,
        b,
        c,
        discriminant: disc.to_string_in(space),
        irreducible: unit.is_some() && witness.is_some(),
        unit_coefficient: unit,
        witness,
    })
}
