//! Equation templates: polynomials in the coordinates and named generic forms.
//!
//! A template like `t*(v + p^2*t) - u*Q9 + q*(q*r + p^4*t)` is expanded into
//! [`TemplateTerm`]s, each a coefficient times a monomial times a product of forms.
//! Forms are only known through the coefficients recorded in their [`FormDecl`].

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use super::param::{Param, ParamScalar};
use super::poly::ParamPolynomial;
use crate::rational::Rational;
use crate::wps::{CoordSet, Monomial, WeightedSpace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("{label}: parse error at byte {pos}: {message}")]
    Parse { label: String, pos: usize, message: String },
    #[error("{label}: unknown identifier `{name}`")]
    UnknownIdentifier { label: String, name: String },
    #[error("form {form}: coefficient of {monomial} is not recorded")]
    UnknownCoefficient { form: String, monomial: String },
}

/// A generic form of fixed degree. `known` lists recorded coefficients; when
/// `exact` is set the form equals the sum of its known terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormDecl {
    pub name: String,
    pub degree: u64,
    pub known: Vec<(Monomial, ParamScalar)>,
    pub exact: bool,
}

impl FormDecl {
    pub fn known_coefficient(&self, m: &Monomial) -> Option<ParamScalar> {
        match self.known.iter().find(|(k, _)| k == m) {
            Some((_, c)) => Some(c.clone()),
            None if self.exact => Some(ParamScalar::zero()),
            None => None,
        }
    }

    /// Monomials that may occur in the form.
    pub fn possible_monomials(&self, space: &WeightedSpace) -> Vec<Monomial> {
        if self.exact {
            self.known.iter().map(|(m, _)| m.clone()).collect()
        } else {
            space.monomials_of_degree(self.degree, space.all())
        }
    }

    /// The form on the stratum where `zeroed` vanish, if every surviving
    /// coefficient is recorded.
    pub fn collapse(&self, space: &WeightedSpace, zeroed: CoordSet) -> Result<ParamPolynomial, TemplateError> {
        let live = space.all().difference(zeroed);
        let mut out = ParamPolynomial::zero(space.len());
        for m in self.possible_monomials(space) {
            if !m.support().is_subset(live) {
                continue;
            }
            let c = self.known_coefficient(&m).ok_or_else(|| TemplateError::UnknownCoefficient {
                form: self.name.clone(),
                monomial: space.display_monomial(&m).to_string(),
            })?;
            out.add_term(m, c);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateTerm {
    pub coeff: ParamScalar,
    pub monomial: Monomial,
    /// Form indices into the declaring system, sorted.
    pub forms: Vec<usize>,
}

/// A term of the printed equation whose weighted degree is not the equation degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetAsideTerm {
    pub term: String,
    pub degree: u64,
}

#[derive(Debug, Clone)]
pub struct Template {
    pub label: String,
    pub degree: u64,
    pub source: String,
    pub terms: Vec<TemplateTerm>,
    pub set_aside: Vec<(TemplateTerm, SetAsideTerm)>,
}

impl Template {
    pub fn parse(label: &str, degree: u64, source: &str, space: &WeightedSpace, forms: &[FormDecl]) -> Result<Self, TemplateError> {
        let mut p = Parser { label, src: source.as_bytes(), pos: 0 };
        let ast = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        let expanded = expand(&ast, label, space, forms)?;
        let mut terms = Vec::new();
        let mut set_aside = Vec::new();
        for t in expanded {
            let d = space.degree(&t.monomial) + t.forms.iter().map(|&f| forms[f].degree).sum::<u64>();
            if d == degree {
                terms.push(t);
            } else {
                let text = render_term(&t, space, forms);
                set_aside.push((t, SetAsideTerm { term: text, degree: d }));
            }
        }
        Ok(Template { label: label.to_string(), degree, source: source.to_string(), terms, set_aside })
    }

    /// Smallest weight over all monomials the generic equation can contain.
    pub fn min_weight(&self, space: &WeightedSpace, forms: &[FormDecl], w: &[u32]) -> Option<u64> {
        let form_min: Vec<Option<u64>> =
            forms.iter().map(|f| f.possible_monomials(space).iter().map(|m| m.weigh(w)).min()).collect();
        self.terms
            .iter()
            .filter_map(|t| {
                let mut s = t.monomial.weigh(w);
                for &f in &t.forms {
                    s += form_min[f]?;
                }
                Some(s)
            })
            .min()
    }

    /// The equation on the stratum where `zeroed` vanish.
    pub fn collapse(&self, space: &WeightedSpace, forms: &[FormDecl], zeroed: CoordSet) -> Result<ParamPolynomial, TemplateError> {
        let mut out = ParamPolynomial::zero(space.len());
        for t in &self.terms {
            if !t.monomial.support().intersection(zeroed).is_empty() {
                continue;
            }
            let mut prod = ParamPolynomial::term(t.coeff.clone(), t.monomial.clone());
            for &f in &t.forms {
                prod = &prod * &forms[f].collapse(space, zeroed)?;
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// Whether every set-aside term vanishes on the stratum.
    pub fn set_aside_vanish_on(&self, zeroed: CoordSet) -> bool {
        self.set_aside.iter().all(|(t, _)| !t.monomial.support().intersection(zeroed).is_empty())
    }

    /// Exact coefficient of `target` in the generic equation.
    pub fn coefficient_of(&self, target: &Monomial, space: &WeightedSpace, forms: &[FormDecl]) -> Result<ParamScalar, TemplateError> {
        let mut total = ParamScalar::zero();
        for t in &self.terms {
            let Some(rest) = target.div(&t.monomial) else { continue };
            let mut acc = ParamScalar::zero();
            distribute(&rest, &t.forms, space, forms, ParamScalar::one(), &mut acc)?;
            total = &total + &(&t.coeff * &acc);
        }
        Ok(total)
    }
}

fn distribute(
    rest: &Monomial,
    pending: &[usize],
    space: &WeightedSpace,
    forms: &[FormDecl],
    partial: ParamScalar,
    acc: &mut ParamScalar,
) -> Result<(), TemplateError> {
    let Some((&f, tail)) = pending.split_first() else {
        if rest.is_one() {
            *acc = &*acc + &partial;
        }
        return Ok(());
    };
    for m in forms[f].possible_monomials(space) {
        let Some(next) = rest.div(&m) else { continue };
        let Some(c) = forms[f].known_coefficient(&m) else {
            if completes(&next, tail, space, forms) {
                return Err(TemplateError::UnknownCoefficient {
                    form: forms[f].name.clone(),
                    monomial: space.display_monomial(&m).to_string(),
                });
            }
            continue;
        };
        if c.is_zero() {
            continue;
        }
        distribute(&next, tail, space, forms, &partial * &c, acc)?;
    }
    Ok(())
}

/// Whether `rest` is a product of possible monomials of the pending forms.
fn completes(rest: &Monomial, pending: &[usize], space: &WeightedSpace, forms: &[FormDecl]) -> bool {
    match pending.split_first() {
        None => rest.is_one(),
        Some((&f, tail)) => forms[f]
            .possible_monomials(space)
            .iter()
            .any(|m| rest.div(m).is_some_and(|next| completes(&next, tail, space, forms))),
    }
}

fn render_term(t: &TemplateTerm, space: &WeightedSpace, forms: &[FormDecl]) -> String {
    let mut s = ParamPolynomial::term(t.coeff.clone(), t.monomial.clone()).to_string_in(space);
    for &f in &t.forms {
        s.push('*');
        s.push_str(&forms[f].name);
    }
    s
}

enum Ast {
    Num(Rational),
    Ident(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

struct Parser<'a> {
    label: &'a str,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> TemplateError {
        TemplateError::Parse { label: self.label.to_string(), pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Ast, TemplateError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, TemplateError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Ast, TemplateError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Ast::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.integer()?;
            let n = u32::try_from(n).map_err(|_| self.err("exponent too large"))?;
            return Ok(Ast::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, TemplateError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err("bad integer"))
    }

    fn atom(&mut self) -> Result<Ast, TemplateError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let n = i64::try_from(n).map_err(|_| self.err("integer too large"))?;
                Ok(Ast::Num(Rational::integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default().to_string();
                Ok(Ast::Ident(name))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

type Sum = Vec<TemplateTerm>;

fn normalize(mut terms: Sum) -> Sum {
    terms.sort_by(|a, b| (&a.monomial, &a.forms).cmp(&(&b.monomial, &b.forms)));
    let mut out: Sum = Vec::new();
    for t in terms {
        match out.last_mut() {
            Some(last) if last.monomial == t.monomial && last.forms == t.forms => {
                last.coeff = &last.coeff + &t.coeff;
            }
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

fn scalar(n: usize, c: ParamScalar) -> Sum {
    alloc::vec![TemplateTerm { coeff: c, monomial: Monomial::one(n), forms: Vec::new() }]
}

fn mul(a: &Sum, b: &Sum) -> Sum {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let mut forms = x.forms.clone();
            forms.extend_from_slice(&y.forms);
            forms.sort_unstable();
            out.push(TemplateTerm { coeff: &x.coeff * &y.coeff, monomial: x.monomial.mul(&y.monomial), forms });
        }
    }
    normalize(out)
}

fn expand(ast: &Ast, label: &str, space: &WeightedSpace, forms: &[FormDecl]) -> Result<Sum, TemplateError> {
    let n = space.len();
    Ok(match ast {
        Ast::Num(q) => normalize(scalar(n, ParamScalar::constant(q.clone()))),
        Ast::Ident(name) => {
            if let Some(i) = space.index_of(name) {
                alloc::vec![TemplateTerm { coeff: ParamScalar::one(), monomial: Monomial::var(n, i, 1), forms: Vec::new() }]
            } else if let Some(f) = forms.iter().position(|f| &f.name == name) {
                alloc::vec![TemplateTerm { coeff: ParamScalar::one(), monomial: Monomial::one(n), forms: alloc::vec![f] }]
            } else if let Some(p) = Param::from_name(name) {
                scalar(n, ParamScalar::param(p))
            } else {
                return Err(TemplateError::UnknownIdentifier { label: label.to_string(), name: name.clone() });
            }
        }
        Ast::Neg(a) => {
            let mut s = expand(a, label, space, forms)?;
            for t in &mut s {
                t.coeff = -&t.coeff;
            }
            s
        }
        Ast::Add(a, b) => {
            let mut s = expand(a, label, space, forms)?;
            s.extend(expand(b, label, space, forms)?);
            normalize(s)
        }
        Ast::Sub(a, b) => {
            let mut s = expand(a, label, space, forms)?;
            for mut t in expand(b, label, space, forms)? {
                t.coeff = -&t.coeff;
                s.push(t);
            }
            normalize(s)
        }
        Ast::Mul(a, b) => mul(&expand(a, label, space, forms)?, &expand(b, label, space, forms)?),
        Ast::Pow(a, k) => {
            let base = expand(a, label, space, forms)?;
            let mut acc = scalar(n, ParamScalar::one());
            for _ in 0..*k {
                acc = mul(&acc, &base);
            }
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> WeightedSpace {
        WeightedSpace::from_pairs(&[("p", 1), ("q", 6), ("r", 6), ("s", 7), ("t", 8), ("u", 9), ("v", 10), ("w", 11)]).unwrap()
    }

    fn p12(sp: &WeightedSpace) -> FormDecl {
        let r2 = Monomial::from_pairs(sp, &[("r", 2)]).unwrap();
        FormDecl { name: "P12".into(), degree: 12, known: alloc::vec![(r2, ParamScalar::param(Param::Lambda))], exact: false }
    }

    #[test]
    fn parse_and_expand() {
        let sp = space();
        let forms = [p12(&sp)];
        let t = Template::parse("F7", 20, "r*s^2 - w*u + t*P12", &sp, &forms).unwrap();
        assert_eq!(t.terms.len(), 3);
        assert!(t.set_aside.is_empty());
        let t2 = Template::parse("X", 18, "(w + p^4*s)*s - P12*q + u*(u + p^2*s)", &sp, &forms).unwrap();
        assert_eq!(t2.terms.len(), 5);
        let on = t2.collapse(&sp, &forms, sp.set_of(&["p", "q"]).unwrap()).unwrap();
        assert_eq!(on.to_string_in(&sp), "s*w + u^2");
    }

    #[test]
    fn errors() {
        let sp = space();
        assert!(matches!(
            Template::parse("X", 1, "p + zz", &sp, &[]),
            Err(TemplateError::UnknownIdentifier { .. })
        ));
        assert!(matches!(Template::parse("X", 1, "p + (q", &sp, &[]), Err(TemplateError::Parse { .. })));
        assert!(matches!(Template::parse("X", 1, "p q", &sp, &[]), Err(TemplateError::Parse { .. })));
    }

    #[test]
    fn off_degree_terms_are_set_aside() {
        let sp = space();
        let t = Template::parse("X", 21, "v*w + s*t*r - s*t*p^2", &sp, &[]).unwrap();
        assert_eq!(t.terms.len(), 2);
        assert_eq!(t.set_aside.len(), 1);
        assert_eq!(t.set_aside[0].1.degree, 17);
        assert!(t.set_aside_vanish_on(sp.set_of(&["p", "q"]).unwrap()));
        assert!(!t.set_aside_vanish_on(sp.set_of(&["q"]).unwrap()));
    }

    #[test]
    fn coefficients_through_forms() {
        let sp = space();
        let forms = [p12(&sp)];
        let t = Template::parse("F", 18, "(w + p^4*s)*s - P12*q + u*u", &sp, &forms).unwrap();
        let target = Monomial::from_pairs(&sp, &[("r", 2), ("q", 1)]).unwrap();
        assert_eq!(t.coefficient_of(&target, &sp, &forms).unwrap(), -&ParamScalar::param(Param::Lambda));
        // q^2 * q is reached through an unrecorded coefficient of P12.
        let q3 = Monomial::from_pairs(&sp, &[("q", 3)]).unwrap();
        assert!(matches!(t.coefficient_of(&q3, &sp, &forms), Err(TemplateError::UnknownCoefficient { .. })));
        // Off-stratum coefficients are unknown.
        assert!(forms[0].collapse(&sp, sp.set_of(&["p"]).unwrap()).is_err());
        assert_eq!(forms[0].collapse(&sp, sp.set_of(&["p", "q"]).unwrap()).unwrap().to_string_in(&sp), "lambda*r^2");
    }
}
