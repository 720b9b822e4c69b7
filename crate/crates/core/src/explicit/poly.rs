//! Polynomials in the ambient coordinates with [`ParamScalar`] coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::param::{AssumptionLedger, ParamScalar, NUM_PARAMS};
use crate::rational::Rational;
use crate::wps::{CoordSet, Monomial, WeightedSpace};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, ParamScalar>,
}

impl ParamPolynomial {
    pub fn zero(nvars: usize) -> Self {
        ParamPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: ParamScalar) -> Self {
        Self::term(c, Monomial::one(nvars))
    }

    pub fn term(c: ParamScalar, m: Monomial) -> Self {
        let mut p = Self::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(ParamScalar::one(), Monomial::var(nvars, i, 1))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, ParamScalar)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> ParamScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: ParamScalar) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn scale(&self, c: &ParamScalar) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(m, k)| (m.clone(), k * c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.nvars, ParamScalar::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Coordinates occurring in some term.
    pub fn support(&self) -> CoordSet {
        self.terms.keys().fold(CoordSet::EMPTY, |s, m| s.union(m.support()))
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(i)).max()
    }

    /// Coefficient of `x_i^k` as a polynomial in the other coordinates.
    pub fn coefficient_in(&self, i: usize, k: u32) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(m, _)| m.exp(i) == k).map(|(m, c)| (m.with_exp(i, 0), c.clone())),
        )
    }

    /// Drop every term divisible by a coordinate of `zeroed`.
    pub fn restrict(&self, zeroed: CoordSet) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .filter(|(m, _)| m.support().intersection(zeroed).is_empty())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Set `x_i = 1` (chart) keeping the variable count.
    pub fn dehomogenize(&self, i: usize) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.with_exp(i, 0), c.clone())))
    }

    /// Replace `x_i` by `value`.
    pub fn substitute(&self, i: usize, value: &ParamPolynomial) -> Self {
        let mut out = Self::zero(self.nvars);
        let mut powers: Vec<ParamPolynomial> = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            while powers.len() <= e {
                let next = match powers.last() {
                    None => Self::constant(self.nvars, ParamScalar::one()),
                    Some(p) => p * value,
                };
                powers.push(next);
            }
            let rest = Self::term(c.clone(), m.with_exp(i, 0));
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    /// Smallest `w`-weight of a term.
    pub fn min_weight(&self, w: &[u32]) -> Option<u64> {
        self.terms.keys().map(|m| m.weigh(w)).min()
    }

    /// The terms of smallest `w`-weight.
    pub fn initial_part(&self, w: &[u32]) -> Self {
        match self.min_weight(w) {
            None => self.clone(),
            Some(min) => Self::from_terms(
                self.nvars,
                self.terms.iter().filter(|(m, _)| m.weigh(w) == min).map(|(m, c)| (m.clone(), c.clone())),
            ),
        }
    }

    /// `Some(d)` if every term has weighted degree `d` in `space`.
    pub fn homogeneous_degree(&self, space: &WeightedSpace) -> Option<u64> {
        let mut it = self.terms.keys().map(|m| space.degree(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Linear in `x_i` with a certified-invertible scalar coefficient: returns
    /// `(c, g)` with `self = c x_i + g`, `g` free of `x_i`.
    pub fn linear_in(&self, i: usize, ledger: &AssumptionLedger) -> Option<(ParamScalar, ParamPolynomial)> {
        if self.degree_in(i)? != 1 {
            return None;
        }
        let lin = self.coefficient_in(i, 1);
        let c = lin.as_constant()?;
        if !c.is_certified_nonzero(ledger) {
            return None;
        }
        Some((c, self.coefficient_in(i, 0)))
    }

    pub fn as_constant(&self) -> Option<ParamScalar> {
        match self.terms.len() {
            0 => Some(ParamScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &ParamScalar)> {
        self.terms.iter().next_back()
    }

    /// `self = q * h` with `q` returned, using lex division; the leading
    /// coefficient of `h` must be certified invertible.
    pub fn div_exact(&self, h: &ParamPolynomial, ledger: &AssumptionLedger) -> Option<ParamPolynomial> {
        let (lm, lc) = h.leading_term()?;
        let inv = lc.inverse(ledger)?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c * &inv;
            let step = Self::term(qc, qm);
            rem = &rem - &(&step * h);
            quot = &quot + &step;
        }
        Some(quot)
    }

    /// `Some(u)` when `self = u * other` for a nonzero scalar `u`.
    pub fn unit_ratio(&self, other: &ParamPolynomial, ledger: &AssumptionLedger) -> Option<ParamScalar> {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let (m0, c0) = other.terms.iter().next()?;
        let inv = c0.inverse(ledger)?;
        let u = &self.coefficient(m0) * &inv;
        if u.is_zero() {
            return None;
        }
        (*self == other.scale(&u)).then_some(u)
    }

    pub fn instantiate(&self, values: &[Rational; NUM_PARAMS]) -> Option<ParamPolynomial> {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.instantiate(values)?);
        }
        Some(out)
    }

    /// Numeric value at a parameter point and coordinate point.
    pub fn eval(&self, params: &[Rational; NUM_PARAMS], point: &[Rational]) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let coeff = c.eval(params)?;
            let mono = m.evaluate(Rational::one(), point, |a, b| a * b);
            acc = &acc + &(&coeff * &mono);
        }
        Some(acc)
    }

    pub fn display<'a>(&'a self, space: &'a WeightedSpace) -> PolyDisplay<'a> {
        PolyDisplay { space, poly: self }
    }

    pub fn to_string_in(&self, space: &WeightedSpace) -> String {
        alloc::format!("{}", self.display(space))
    }
}

impl Add for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(self) -> ParamPolynomial {
        self.scale(&ParamScalar::integer(-1))
    }
}

impl Mul for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = ParamPolynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

pub struct PolyDisplay<'a> {
    space: &'a WeightedSpace,
    poly: &'a ParamPolynomial,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let (neg, mag) = match c.single_term() {
                Some((k, _)) if k.is_negative() => (true, -c),
                _ => (false, c.clone()),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let one = mag == ParamScalar::one();
            if m.is_one() {
                if mag.is_compound() {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
            } else {
                if mag.is_compound() {
                    write!(f, "({mag})*")?;
                } else if !one {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", self.space.display_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// A polynomial rendered for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedPolynomial {
    pub label: String,
    pub polynomial: String,
}

#[cfg(test)]
mod tests {
    use super::super::param::Param;
    use super::*;
    use alloc::string::ToString;

    fn space() -> WeightedSpace {
        WeightedSpace::from_pairs(&[("r", 6), ("s", 7), ("t", 8)]).unwrap()
    }

    fn x(i: usize) -> ParamPolynomial {
        ParamPolynomial::var(3, i)
    }

    fn lam() -> ParamScalar {
        ParamScalar::param(Param::Lambda)
    }

    #[test]
    fn display_orders_terms() {
        let sp = space();
        let p = &(&x(0).pow(2).scale(&lam()) - &x(1)) + &ParamPolynomial::constant(3, ParamScalar::integer(-1));
        assert_eq!(p.display(&sp).to_string(), "lambda*r^2 - s - 1");
        let q = x(2).scale(&(&lam() + &ParamScalar::one()));
        assert_eq!(q.display(&sp).to_string(), "(lambda + 1)*t");
    }

    #[test]
    fn substitute_and_divide() {
        let mut ledger = AssumptionLedger::new();
        ledger.assume_nonzero(Param::Lambda, "test");
        let g = &x(0).scale(&lam()) + &x(1);
        let f = &g * &(&x(2) + &x(1));
        assert_eq!(f.div_exact(&g, &ledger), Some(&x(2) + &x(1)));
        assert_eq!((&f + &x(2)).div_exact(&g, &ledger), None);
        let sub = f.substitute(1, &x(0).scale(&(-&lam())));
        assert!(sub.is_zero());
    }

    #[test]
    fn linear_and_unit_ratio() {
        let mut ledger = AssumptionLedger::new();
        let f = &x(0).scale(&lam()) + &x(1).pow(2);
        assert!(f.linear_in(0, &ledger).is_none());
        ledger.assume_nonzero(Param::Lambda, "test");
        let (c, g) = f.linear_in(0, &ledger).unwrap();
        assert_eq!(c, lam());
        assert_eq!(g, x(1).pow(2));
        assert!(f.linear_in(1, &ledger).is_none());
        let u = f.scale(&ParamScalar::integer(-2)).unit_ratio(&f, &ledger);
        assert_eq!(u, Some(ParamScalar::integer(-2)));
    }

    #[test]
    fn weights_and_initial_part() {
        let sp = space();
        let f = &(&x(0) * &x(1)) + &x(2).pow(2);
        assert_eq!(f.homogeneous_degree(&sp), None);
        let g = &x(0).pow(2) + &x(1);
        assert_eq!(g.initial_part(&[0, 2, 1]).display(&sp).to_string(), "r^2");
        assert_eq!((&x(0) * &x(0)).homogeneous_degree(&sp), Some(12));
    }
}
