//! The two built-in format presentations of #282 in `P(1,6,6,7,8,9,10,11)`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use super::param::{AssumptionLedger, Param, ParamScalar};
use super::poly::ParamPolynomial;
use super::template::{FormDecl, Template, TemplateError};
use crate::candidate::{lookup, FanoCandidate};
use crate::wps::{CoordSet, Monomial, WeightedSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClusterFormat {
    G2,
    C2,
}

impl ClusterFormat {
    pub const ALL: [ClusterFormat; 2] = [ClusterFormat::G2, ClusterFormat::C2];
}

impl fmt::Display for ClusterFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClusterFormat::G2 => "G2",
            ClusterFormat::C2 => "C2",
        })
    }
}

impl FromStr for ClusterFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "G2" => Ok(ClusterFormat::G2),
            "C2" => Ok(ClusterFormat::C2),
            _ => Err(alloc::format!("unknown format `{s}` (expected G2 or C2)")),
        }
    }
}

const G2_EQUATIONS: [(&str, u64, &str); 9] = [
    ("F1", 16, "t^2 - q*v + s*Q9"),
    ("F2", 17, "u*t - q*w + s*(v + p^2*t)"),
    ("F3", 18, "t*(v + p^2*t) - u*Q9 + q*(q*r + p^4*t)"),
    ("F4", 18, "(w + p^4*s)*s - P12*q + u*(u + p^2*s)"),
    ("F5", 19, "t*w - u*v + s*(q*r + p^4*t)"),
    ("F6", 20, "(q*r + p^4*t)*t - Q9*w + v*(v + p^2*t)"),
    ("F7", 20, "r*s^2 - w*u + t*P12"),
    ("F8", 21, "P12*Q9 - (v*w + p^4*q*w + p^2*u*v + u*q*r + s*t*r - s*t*p^2)"),
    ("F9", 22, "r*s*(u + p^2*s) - v*P12 + w*(w + p^4*s)"),
];

const C2_EQUATIONS: [(&str, u64, &str); 9] = [
    ("F1", 16, "t*R8 - S6*Q10 + s*u"),
    ("F2", 17, "t*u - w*S6 + s*v"),
    ("F3", 18, "r*S6^2 - v*R8 + u^2"),
    ("F4", 18, "t*Q10 - S6*P12 + s*w"),
    ("F5", 19, "r*s*S6 - w*R8 + u*Q10"),
    ("F6", 20, "r*s^2 - P12*R8 + Q10^2"),
    ("F7", 20, "r*t*S6 - v*Q10 + u*w"),
    ("F8", 21, "r*s*t - w*Q10 + u*P12"),
    ("F9", 22, "r*t^2 - v*P12 + w^2"),
];

/// Equations of one format with their forms and the assumptions they carry.
#[derive(Debug, Clone)]
pub struct FormatSystem {
    pub format: ClusterFormat,
    pub candidate: FanoCandidate,
    pub forms: Vec<FormDecl>,
    pub equations: Vec<Template>,
    pub ledger: AssumptionLedger,
}

fn mono(space: &WeightedSpace, pairs: &[(&str, u32)]) -> Monomial {
    Monomial::from_pairs(space, pairs).expect("built-in coordinate")
}

fn generic(name: &str, degree: u64, known: Vec<(Monomial, ParamScalar)>) -> FormDecl {
    FormDecl { name: name.to_string(), degree, known, exact: false }
}

/// The presentation of `format`; `assume_q_in_s6` only affects C2, where it
/// replaces `S6` by `q`.
pub fn format_system(format: ClusterFormat, assume_q_in_s6: bool) -> Result<FormatSystem, TemplateError> {
    let candidate = lookup("#282").expect("registry entry");
    let space = candidate.space.clone();
    let lam = ParamScalar::param(Param::Lambda);
    let mu = ParamScalar::param(Param::Mu);
    let nu = ParamScalar::param(Param::Nu);
    let mut ledger = AssumptionLedger::new();
    let (forms, table) = match format {
        ClusterFormat::G2 => {
            ledger.assume_nonzero(Param::Lambda, "quasi-smoothness of X at p_r");
            ledger.assume_nonzero(Param::Mu, "quasi-smoothness of X at p_r");
            let forms = alloc::vec![
                generic("P12", 12, alloc::vec![(mono(&space, &[("r", 2)]), lam)]),
                generic("Q9", 9, alloc::vec![(mono(&space, &[("u", 1)]), mu)]),
            ];
            (forms, &G2_EQUATIONS)
        }
        ClusterFormat::C2 => {
            ledger.assume("X is quasi-smooth", "hypothesis");
            ledger.assume("X is general in its C2 family", "hypothesis");
            ledger.assume_nonzero(Param::Lambda, "quasi-smoothness of X at p_r");
            ledger.assume_nonzero(Param::Mu, "v^2 appears in F6 or F7 since p_v is not on X");
            ledger.assume_nonzero(Param::Nu, "t^2 appears in F1 since p_t is not on X");
            let s6 = if assume_q_in_s6 {
                ledger.assume("q in S6 (coordinate change S6 = q)", "hypothesis");
                FormDecl { name: "S6".into(), degree: 6, known: alloc::vec![(mono(&space, &[("q", 1)]), ParamScalar::one())], exact: true }
            } else {
                generic("S6", 6, Vec::new())
            };
            let forms = alloc::vec![
                generic("P12", 12, alloc::vec![(mono(&space, &[("r", 2)]), lam)]),
                generic("Q10", 10, alloc::vec![(mono(&space, &[("v", 1)]), mu)]),
                generic("R8", 8, alloc::vec![(mono(&space, &[("t", 1)]), nu)]),
                s6,
            ];
            (forms, &C2_EQUATIONS)
        }
    };
    let equations = table
        .iter()
        .map(|(label, d, src)| Template::parse(label, *d, src, &space, &forms))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FormatSystem { format, candidate, forms, equations, ledger })
}

impl FormatSystem {
    pub fn space(&self) -> &WeightedSpace {
        &self.candidate.space
    }

    pub fn index(&self, name: &str) -> usize {
        self.space().index_of(name).expect("built-in coordinate")
    }

    pub fn set(&self, names: &[&str]) -> CoordSet {
        self.space().set_of(names).expect("built-in coordinates")
    }

    /// Every equation on the stratum where `zeroed` vanish.
    pub fn restrict(&self, zeroed: CoordSet) -> Result<Vec<ParamPolynomial>, TemplateError> {
        self.equations.iter().map(|t| t.collapse(self.space(), &self.forms, zeroed)).collect()
    }

    /// Each form's surviving monomials on the stratum, as computed from the
    /// ambient degrees alone.
    pub fn stratum_support(&self, zeroed: CoordSet) -> Vec<(String, Vec<String>)> {
        let live = self.space().all().difference(zeroed);
        self.forms
            .iter()
            .map(|f| {
                let ms = self
                    .space()
                    .monomials_of_degree(f.degree, live)
                    .iter()
                    .filter(|m| !f.exact || f.known.iter().any(|(k, _)| k == *m))
                    .map(|m| self.space().display_monomial(m).to_string())
                    .collect();
                (f.name.clone(), ms)
            })
            .collect()
    }

    /// Source text for export.
    pub fn listing(&self) -> Vec<(String, u64, String)> {
        self.equations.iter().map(|t| (t.label.clone(), t.degree, t.source.clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn restricted(format: ClusterFormat) -> (FormatSystem, Vec<String>) {
        let sys = format_system(format, true).unwrap();
        let pq = sys.set(&["p", "q"]);
        let eqs = sys.restrict(pq).unwrap().iter().map(|f| f.to_string_in(sys.space())).collect();
        (sys, eqs)
    }

    #[test]
    fn all_equations_homogeneous() {
        for fmt in ClusterFormat::ALL {
            let sys = format_system(fmt, true).unwrap();
            for t in &sys.equations {
                assert!(!t.terms.is_empty());
                for term in &t.terms {
                    let d = sys.space().degree(&term.monomial)
                        + term.forms.iter().map(|&f| sys.forms[f].degree).sum::<u64>();
                    assert_eq!(d, t.degree, "{} {}", fmt, t.label);
                }
            }
        }
    }

    #[test]
    fn g2_f8_off_degree_term() {
        let sys = format_system(ClusterFormat::G2, true).unwrap();
        let f8 = &sys.equations[7];
        assert_eq!(f8.set_aside.len(), 1);
        assert_eq!(f8.set_aside[0].1.term, "p^2*s*t");
        assert_eq!(f8.set_aside[0].1.degree, 17);
        assert!(f8.set_aside_vanish_on(sys.set(&["p", "q"])));
        let others: usize = sys.equations.iter().map(|t| t.set_aside.len()).sum();
        assert_eq!(others, 1);
        assert!(format_system(ClusterFormat::C2, true).unwrap().equations.iter().all(|t| t.set_aside.is_empty()));
    }

    #[test]
    fn g2_restriction() {
        let (_, eqs) = restricted(ClusterFormat::G2);
        let expected = [
            "mu*s*u + t^2",
            "s*v + t*u",
            "t*v - mu*u^2",
            "s*w + u^2",
            "t*w - u*v",
            "-mu*u*w + v^2",
            "lambda*r^2*t + r*s^2 - u*w",
            "lambda*mu*r^2*u - r*s*t - v*w",
            "-lambda*r^2*v + r*s*u + w^2",
        ];
        for (got, want) in eqs.iter().zip(expected) {
            assert_eq!(got, want);
        }
    }

    #[test]
    fn c2_restriction() {
        let (_, eqs) = restricted(ClusterFormat::C2);
        assert_eq!(eqs[1], "s*v + t*u");
        assert_eq!(eqs[0], "s*u + nu*t^2");
        assert_eq!(eqs[5], "-lambda*nu*r^2*t + r*s^2 + mu^2*v^2");
        assert_eq!(eqs[2], "-nu*t*v + u^2");
    }

    #[test]
    fn collapses_match_stratum_support() {
        for fmt in ClusterFormat::ALL {
            let sys = format_system(fmt, true).unwrap();
            let pq = sys.set(&["p", "q"]);
            for (name, ms) in sys.stratum_support(pq) {
                let f = sys.forms.iter().find(|f| f.name == name).unwrap();
                let collapsed = f.collapse(sys.space(), pq).unwrap();
                let got: Vec<String> =
                    collapsed.terms().map(|(m, _)| sys.space().display_monomial(m).to_string()).collect();
                assert_eq!(got, ms, "{fmt} {name}");
            }
        }
    }

    #[test]
    fn c2_without_q_in_s6_cannot_collapse() {
        let sys = format_system(ClusterFormat::C2, false).unwrap();
        let err = sys.restrict(sys.set(&["p", "q"])).unwrap_err();
        assert!(err.to_string().contains("S6"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("g2".parse::<ClusterFormat>(), Ok(ClusterFormat::G2));
        assert_eq!("C2".parse::<ClusterFormat>(), Ok(ClusterFormat::C2));
        assert!("X".parse::<ClusterFormat>().is_err());
    }
}
