//! Weighted projective ambient spaces and their monomials.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("weighted space has no coordinates")]
    Empty,
    #[error("coordinate `{0}` has non-positive weight")]
    NonPositiveWeight(String),
    #[error("coordinate name `{0}` is used twice")]
    DuplicateName(String),
    #[error("at most 64 coordinates are supported, got {0}")]
    TooManyCoordinates(usize),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coordinate {
    pub name: String,
    pub weight: u32,
}

/// `P(a_0, ..., a_n)` with named homogeneous coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSpace {
    coords: Vec<Coordinate>,
}

impl WeightedSpace {
    pub fn new(coords: Vec<Coordinate>) -> Result<Self, SpaceError> {
        if coords.is_empty() {
            return Err(SpaceError::Empty);
        }
        if coords.len() > 64 {
            return Err(SpaceError::TooManyCoordinates(coords.len()));
        }
        for (i, c) in coords.iter().enumerate() {
            if c.weight == 0 {
                return Err(SpaceError::NonPositiveWeight(c.name.clone()));
            }
            if coords[..i].iter().any(|o| o.name == c.name) {
                return Err(SpaceError::DuplicateName(c.name.clone()));
            }
        }
        Ok(WeightedSpace { coords })
    }

    /// Convenience constructor from `(name, weight)` pairs.
    pub fn from_pairs(pairs: &[(&str, u32)]) -> Result<Self, SpaceError> {
        Self::new(
            pairs
                .iter()
                .map(|&(name, weight)| Coordinate { name: name.to_string(), weight })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.coords[i].weight
    }

    pub fn weights(&self) -> Vec<u32> {
        self.coords.iter().map(|c| c.weight).collect()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.coords[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, SpaceError> {
        self.index_of(name)
            .ok_or_else(|| SpaceError::UnknownCoordinate(name.to_string()))
    }

    /// Coordinate set from names; unknown names are an error.
    pub fn set_of(&self, names: &[&str]) -> Result<CoordSet, SpaceError> {
        let mut set = CoordSet::EMPTY;
        for n in names {
            set.insert(self.require(n)?);
        }
        Ok(set)
    }

    pub fn all(&self) -> CoordSet {
        CoordSet::full(self.len())
    }

    pub fn is_well_formed(&self) -> bool {
        well_formed(&self.weights())
    }

    pub fn degree(&self, m: &Monomial) -> u64 {
        m.exps
            .iter()
            .zip(&self.coords)
            .map(|(&e, c)| u64::from(e) * u64::from(c.weight))
            .sum()
    }

    /// Every monomial of weighted degree `d` supported on `allowed`, ascending
    /// lexicographically in exponent vectors.
    pub fn monomials_of_degree(&self, d: u64, allowed: CoordSet) -> Vec<Monomial> {
        let vars: Vec<usize> = allowed.iter().filter(|&i| i < self.len()).collect();
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.len()];
        self.enumerate(&vars, 0, d, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(
        &self,
        vars: &[usize],
        at: usize,
        remaining: u64,
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if at == vars.len() {
            if remaining == 0 {
                out.push(Monomial { exps: exps.clone() });
            }
            return;
        }
        let v = vars[at];
        let w = u64::from(self.weight(v));
        let max = remaining / w;
        for e in 0..=max {
            exps[v] = e as u32;
            self.enumerate(vars, at + 1, remaining - e * w, exps, out);
        }
        exps[v] = 0;
    }

    pub fn display_monomial<'a>(&'a self, m: &'a Monomial) -> MonomialDisplay<'a> {
        MonomialDisplay { space: self, mono: m }
    }

    pub fn display_set(&self, set: CoordSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.name(i)).collect();
        let mut s = String::from("{");
        s.push_str(&names.join(","));
        s.push('}');
        s
    }
}

impl fmt::Display for WeightedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}_{}", c.weight, c.name)?;
        }
        write!(f, ")")
    }
}

/// True iff every `n`-element subfamily of the `n + 1` weights has gcd 1.
pub fn well_formed(weights: &[u32]) -> bool {
    if weights.contains(&0) {
        return false;
    }
    (0..weights.len()).all(|skip| {
        weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .fold(0u32, |g, (_, &w)| g.gcd(&w))
            == 1
    })
}

/// The representative of `a` mod `r` in `(0, r]`; multiples of `r` map to `r`, not 0.
pub fn residue(a: i64, r: u32) -> u32 {
    assert!(r >= 1, "residue modulus must be positive");
    let r64 = i64::from(r);
    let m = a.rem_euclid(r64);
    if m == 0 {
        r
    } else {
        m as u32
    }
}

/// A small bitset of coordinate indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoordSet(u64);

impl CoordSet {
    pub const EMPTY: CoordSet = CoordSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            CoordSet(u64::MAX)
        } else {
            CoordSet((1u64 << n) - 1)
        }
    }

    pub fn single(i: usize) -> Self {
        CoordSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = CoordSet::EMPTY;
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn with(mut self, i: usize) -> Self {
        self.insert(i);
        self
    }

    pub fn union(self, o: CoordSet) -> Self {
        CoordSet(self.0 | o.0)
    }

    pub fn intersection(self, o: CoordSet) -> Self {
        CoordSet(self.0 & o.0)
    }

    pub fn difference(self, o: CoordSet) -> Self {
        CoordSet(self.0 & !o.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, o: CoordSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 & (1 << i) != 0)
    }

    /// All non-empty subsets, in increasing bit order.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = CoordSet> {
        let full = self.0;
        let mut sub = 0u64;
        let mut done = full == 0;
        core::iter::from_fn(move || {
            if done {
                return None;
            }
            sub = sub.wrapping_sub(full) & full;
            if sub == 0 {
                done = true;
                return None;
            }
            Some(CoordSet(sub))
        })
    }
}

impl fmt::Debug for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A monomial as an exponent vector indexed by coordinate position.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut m = Monomial::one(n);
        m.exps[i] = e;
        m
    }

    /// Build from `(name, exponent)` pairs against a space.
    pub fn from_pairs(space: &WeightedSpace, pairs: &[(&str, u32)]) -> Result<Self, SpaceError> {
        let mut m = Monomial::one(space.len());
        for &(name, e) in pairs {
            let i = space.require(name)?;
            m.exps[i] += e;
        }
        Ok(m)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn support(&self) -> CoordSet {
        CoordSet::from_indices(self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i))
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if self.exps.iter().zip(&o.exps).any(|(a, b)| a < b) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.exps[i] = e;
        m
    }

    /// Pure power `x_i^e` with `e > 0`: returns `(i, e)`.
    pub fn as_pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    /// Weighted sum `Σ e_i b_i`.
    pub fn weigh(&self, b: &[u32]) -> u64 {
        self.exps
            .iter()
            .zip(b)
            .map(|(&e, &w)| u64::from(e) * u64::from(w))
            .sum()
    }

    /// `Π x_i^{e_i}` with `x_i` given.
    pub fn evaluate<T, F>(&self, one: T, values: &[T], mul: F) -> T
    where
        T: Clone,
        F: Fn(&T, &T) -> T,
    {
        let mut acc = one;
        for (i, &e) in self.exps.iter().enumerate() {
            for _ in 0..e {
                acc = mul(&acc, &values[i]);
            }
        }
        acc
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

pub struct MonomialDisplay<'a> {
    space: &'a WeightedSpace,
    mono: &'a Monomial,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.mono.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.space.name(i))?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}
