//! Scalars in the generic parameters `lambda, mu, nu` and the nonzero-assumption ledger.
//!
//! A [`ParamScalar`] is a Laurent polynomial in the parameters with rational
//! coefficients. Negative exponents only arise by inverting a single term whose
//! parameters are all recorded nonzero in an [`AssumptionLedger`].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

pub const NUM_PARAMS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Lambda,
    Mu,
    Nu,
}

impl Param {
    pub const ALL: [Param; NUM_PARAMS] = [Param::Lambda, Param::Mu, Param::Nu];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::Lambda => "lambda",
            Param::Mu => "mu",
            Param::Nu => "nu",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == s)
    }
}

type Exps = [i32; NUM_PARAMS];

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ParamScalar {
    terms: BTreeMap<Exps, Rational>,
}

impl ParamScalar {
    pub fn zero() -> Self {
        ParamScalar::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; NUM_PARAMS], c);
        }
        ParamScalar { terms }
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(Rational::integer(n))
    }

    pub fn param(p: Param) -> Self {
        let mut e = [0; NUM_PARAMS];
        e[p.index()] = 1;
        Self::term(Rational::one(), e)
    }

    /// `c * lambda^e0 * mu^e1 * nu^e2`.
    pub fn term(c: Rational, exps: [i32; NUM_PARAMS]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        ParamScalar { terms }
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

    /// The rational value if free of parameters.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; NUM_PARAMS]).cloned(),
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&Rational, &[i32; NUM_PARAMS])> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, e))
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32; NUM_PARAMS], &Rational)> {
        self.terms.iter()
    }

    /// Parameters occurring with nonzero exponent.
    pub fn params(&self) -> Vec<Param> {
        Param::ALL
            .into_iter()
            .filter(|p| self.terms.keys().any(|e| e[p.index()] != 0))
            .collect()
    }

    /// Nonzero for every parameter value allowed by the ledger: a single term whose
    /// parameters are all recorded nonzero.
    pub fn is_certified_nonzero(&self, ledger: &AssumptionLedger) -> bool {
        match self.single_term() {
            Some((_, e)) => Param::ALL.iter().all(|p| e[p.index()] == 0 || ledger.is_nonzero(*p)),
            None => false,
        }
    }

    /// Inverse of a certified-nonzero single term.
    pub fn inverse(&self, ledger: &AssumptionLedger) -> Option<ParamScalar> {
        if !self.is_certified_nonzero(ledger) {
            return None;
        }
        let (c, e) = self.single_term()?;
        let mut inv = [0; NUM_PARAMS];
        for i in 0..NUM_PARAMS {
            inv[i] = -e[i];
        }
        Some(ParamScalar::term(c.recip()?, inv))
    }

    pub fn pow(&self, n: u32) -> ParamScalar {
        let mut acc = ParamScalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Value at a parameter point; `None` if a negative power of zero is needed.
    pub fn eval(&self, values: &[Rational; NUM_PARAMS]) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NUM_PARAMS {
                if e[i] < 0 && values[i].is_zero() {
                    return None;
                }
                t = &t * &values[i].pow(e[i]);
            }
            acc = &acc + &t;
        }
        Some(acc)
    }

    /// Substitute numeric values, keeping the scalar type.
    pub fn instantiate(&self, values: &[Rational; NUM_PARAMS]) -> Option<ParamScalar> {
        self.eval(values).map(ParamScalar::constant)
    }

    fn insert(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    /// Whether the display needs parentheses when used as a coefficient.
    pub fn is_compound(&self) -> bool {
        self.terms.len() > 1
    }
}

impl Add for &ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(*e, c.clone());
        }
        out
    }
}

impl Sub for &ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        self + &(-rhs)
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        let mut out = ParamScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let mut e = [0; NUM_PARAMS];
                for i in 0..NUM_PARAMS {
                    e[i] = e1[i] + e2[i];
                }
                out.insert(e, c1 * c2);
            }
        }
        out
    }
}

fn write_param_monomial(f: &mut fmt::Formatter<'_>, e: &Exps) -> Result<bool, fmt::Error> {
    let mut wrote = false;
    for p in Param::ALL {
        let k = e[p.index()];
        if k == 0 {
            continue;
        }
        if wrote {
            write!(f, "*")?;
        }
        write!(f, "{}", p.name())?;
        if k != 1 {
            write!(f, "^{k}")?;
        }
        wrote = true;
    }
    Ok(wrote)
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest parameter degree first.
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let is_const = e.iter().all(|&k| k == 0);
            if is_const {
                write!(f, "{mag}")?;
            } else {
                if mag != 1 {
                    write!(f, "{mag}*")?;
                }
                write_param_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ParamScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One recorded assumption.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumption {
    pub statement: String,
    /// Set when the statement is `param != 0`.
    pub nonzero: Option<Param>,
    pub provenance: String,
}

/// Append-only list of assumptions made during one computation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionLedger {
    entries: Vec<Assumption>,
}

impl AssumptionLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assume_nonzero(&mut self, p: Param, provenance: &str) {
        if self.is_nonzero(p) {
            return;
        }
        self.entries.push(Assumption {
            statement: alloc::format!("{} != 0", p.name()),
            nonzero: Some(p),
            provenance: provenance.to_string(),
        });
    }

    pub fn assume(&mut self, statement: &str, provenance: &str) {
        if self.entries.iter().any(|a| a.statement == statement) {
            return;
        }
        self.entries.push(Assumption { statement: statement.to_string(), nonzero: None, provenance: provenance.to_string() });
    }

    pub fn is_nonzero(&self, p: Param) -> bool {
        self.entries.iter().any(|a| a.nonzero == Some(p))
    }

    pub fn entries(&self) -> &[Assumption] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn lam() -> ParamScalar {
        ParamScalar::param(Param::Lambda)
    }

    fn mu() -> ParamScalar {
        ParamScalar::param(Param::Mu)
    }

    #[test]
    fn arithmetic_and_display() {
        let x = &(&lam() * &mu()) + &ParamScalar::integer(-2);
        assert_eq!(x.to_string(), "lambda*mu - 2");
        assert!((&x - &x).is_zero());
        let y = &lam().pow(2) * &ParamScalar::integer(3);
        assert_eq!(y.to_string(), "3*lambda^2");
        assert_eq!((-&mu()).to_string(), "-mu");
    }

    #[test]
    fn certified_inverse() {
        let mut ledger = AssumptionLedger::new();
        let x = &lam() * &mu();
        assert!(x.inverse(&ledger).is_none());
        ledger.assume_nonzero(Param::Lambda, "test");
        assert!(x.inverse(&ledger).is_none());
        ledger.assume_nonzero(Param::Mu, "test");
        let inv = x.inverse(&ledger).unwrap();
        assert_eq!(inv.to_string(), "lambda^-1*mu^-1");
        assert_eq!(&inv * &x, ParamScalar::one());
        assert!((&lam() + &mu()).inverse(&ledger).is_none());
        assert_eq!(ledger.entries().len(), 2);
    }

    #[test]
    fn evaluation() {
        let x = &(&lam() * &mu().pow(2)) + &ParamScalar::integer(1);
        let v = [Rational::new(2, 1), Rational::new(1, 3), Rational::new(5, 1)];
        assert_eq!(x.eval(&v), Some(Rational::new(11, 9)));
        let inv = ParamScalar::term(Rational::one(), [-1, 0, 0]);
        assert_eq!(inv.eval(&[Rational::zero(), Rational::one(), Rational::one()]), None);
        assert_eq!(x.params(), vec![Param::Lambda, Param::Mu]);
    }
}
