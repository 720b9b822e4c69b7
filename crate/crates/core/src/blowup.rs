//! Numerics of the Kawamata blowup at a terminal quotient point.
//!
//! A divisor class on the blowup `Y` is written `(n, lam)` for `-n phi^*K_X - lam E`.
//! Mixed products of `phi^*K_X` and `E` vanish, so the cubic form only needs
//! `(-K_X)^3` and `E^3`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::candidate::BasketEntry;
use crate::rational::Rational;
use crate::wps::{residue, CoordSet, Monomial, WeightedSpace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlowupError {
    #[error("1/{r}(1,{a},{}) is not a terminal quotient singularity", r.saturating_sub(*a))]
    NotTerminal { r: u32, a: u32 },
    #[error("the coordinate set is empty")]
    EmptySet,
    #[error("the set contains the center coordinate `{0}`")]
    ContainsCenter(String),
    #[error("the point has no coordinate position")]
    NoPosition,
    #[error("coordinate `{0}` is not certified to vanish at the point")]
    NotVanishing(String),
    #[error("coordinate `{0}` is a local coordinate; its weight is fixed by the KBL condition")]
    LocalCoordinate(String),
    #[error("lowest-part fact was certified for a different weight")]
    StaleFact,
    #[error("invalid local coordinates: {0}")]
    BadLocalCoordinates(String),
}

/// A point of type `1/r(1, a, r-a)`, optionally sitting at a coordinate point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPoint {
    pub r: u32,
    pub a: u32,
    pub at_coordinate: Option<usize>,
}

impl QuotientPoint {
    pub fn new(r: u32, a: u32, at_coordinate: Option<usize>) -> Result<Self, BlowupError> {
        let entry = BasketEntry::new(r, a, 1);
        if !entry.is_terminal() {
            return Err(BlowupError::NotTerminal { r, a });
        }
        Ok(QuotientPoint { r, a: entry.a, at_coordinate })
    }

    pub fn from_basket(entry: &BasketEntry, at_coordinate: Option<usize>) -> Result<Self, BlowupError> {
        Self::new(entry.r, entry.a, at_coordinate)
    }

    pub fn type_label(&self) -> String {
        format!("1/{}(1,{},{})", self.r, self.a, self.r - self.a)
    }

    /// Coordinates that must vanish at the point: everything but the center when the
    /// position is known, otherwise those whose weight is not a multiple of `r`.
    pub fn vanishing(&self, space: &WeightedSpace) -> CoordSet {
        match self.at_coordinate {
            Some(k) => space.all().difference(CoordSet::single(k)),
            None => CoordSet::from_indices((0..space.len()).filter(|&i| !space.weight(i).is_multiple_of(self.r))),
        }
    }
}

/// `a (r - a)`.
pub fn weight_product(p: &QuotientPoint) -> u32 {
    p.a * (p.r - p.a)
}

/// `(E^3) = r^2 / (a (r - a))`.
pub fn e_cubed(p: &QuotientPoint) -> Rational {
    let r = i64::from(p.r);
    Rational::new(r * r, i64::from(weight_product(p)))
}

/// Initial vanishing ratio: `min residue(a_i, r) / (a_i r)` over `c`.
pub fn ivr(space: &WeightedSpace, p: &QuotientPoint, c: CoordSet) -> Result<Rational, BlowupError> {
    if c.is_empty() {
        return Err(BlowupError::EmptySet);
    }
    if let Some(k) = p.at_coordinate {
        if c.contains(k) {
            return Err(BlowupError::ContainsCenter(space.name(k).to_string()));
        }
    }
    let r = i64::from(p.r);
    let value = c
        .iter()
        .map(|i| {
            let a = i64::from(space.weight(i));
            Rational::new(i64::from(residue(a, p.r)), a * r)
        })
        .min()
        .expect("non-empty set");
    Ok(value)
}

/// The class `-n phi^*K_X - lam E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupClass {
    pub n: Rational,
    pub lam: Rational,
}

impl BlowupClass {
    pub fn new(n: Rational, lam: Rational) -> Self {
        BlowupClass { n, lam }
    }

    /// `-K_Y = (1, 1/r)`.
    pub fn anticanonical(p: &QuotientPoint) -> Self {
        BlowupClass { n: Rational::one(), lam: Rational::new(1, i64::from(p.r)) }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BlowupClass { n: &self.n * c, lam: &self.lam * c }
    }

    pub fn add(&self, o: &BlowupClass) -> Self {
        BlowupClass { n: &self.n + &o.n, lam: &self.lam + &o.lam }
    }
}

impl fmt::Display for BlowupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "-{} phi^*K_X - {} E", self.n, self.lam)
    }
}

/// `n1 n2 n3 (-K_X)^3 - lam1 lam2 lam3 (E^3)`.
pub fn y_triple(c1: &BlowupClass, c2: &BlowupClass, c3: &BlowupClass, p: &QuotientPoint, k3: &Rational) -> Rational {
    let pull = &(&(&c1.n * &c2.n) * &c3.n) * k3;
    let exc = &(&(&c1.lam * &c2.lam) * &c3.lam) * &e_cubed(p);
    pull - exc
}

/// `N . (-K_Y)^2 = n (-K_X)^3 - lam / wp`.
pub fn nef_pairing(n: &BlowupClass, p: &QuotientPoint, k3: &Rational) -> Rational {
    &n.n * k3 - &n.lam / &Rational::from(weight_product(p))
}

/// `constant + slope * e`, for an integer parameter `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineInE {
    pub constant: Rational,
    pub slope: Rational,
}

impl AffineInE {
    /// Recovers the affine form from two evaluations.
    pub fn interpolate<F: Fn(&Rational) -> Rational>(f: F) -> Self {
        let at0 = f(&Rational::zero());
        let at1 = f(&Rational::one());
        AffineInE { slope: &at1 - &at0, constant: at0 }
    }

    pub fn eval(&self, e: &Rational) -> Rational {
        &self.constant + &(&self.slope * e)
    }

    /// True iff the value is negative for every integer `e >= from`.
    pub fn negative_for_all_from(&self, from: i64) -> bool {
        !self.slope.is_positive() && self.eval(&Rational::integer(from)).is_negative()
    }
}

impl fmt::Display for AffineInE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        if self.slope.is_zero() {
            return Ok(());
        }
        let (sign, mag) = if self.slope.is_negative() { ("-", -&self.slope) } else { ("+", self.slope.clone()) };
        if mag == 1 {
            write!(f, " {sign} e")
        } else if mag.numer() == &num_bigint::BigInt::from(1) {
            write!(f, " {sign} e/{}", mag.denom())
        } else {
            write!(f, " {sign} {mag} e")
        }
    }
}

/// Where a certified order bound comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundSource {
    /// Residue of the degree under the initial weight.
    InitialWeight,
    /// Raised by `r` after certifying the lowest part of `equation`.
    Bumped { equation: String, monomial: String },
    /// Supplied by the strategy with a stated reason.
    Stated { reason: String },
}

/// Certified lower bound `ord_E(D_x) >= bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderBound {
    pub coordinate: String,
    /// `D_x ~ -n K_X`.
    pub n: Rational,
    pub bound: Rational,
    pub source: BoundSource,
}

impl OrderBound {
    pub fn stated(coordinate: &str, n: Rational, bound: Rational, reason: &str) -> Self {
        OrderBound {
            coordinate: coordinate.to_string(),
            n,
            bound,
            source: BoundSource::Stated { reason: reason.to_string() },
        }
    }

    /// Vanishing ratio `bound / n`.
    pub fn ratio(&self) -> Rational {
        &self.bound / &self.n
    }
}

impl fmt::Display for OrderBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ord_E(D_{}) \u{2265} {}", self.coordinate, self.bound)
    }
}

/// Certified statement that the `w`-lowest part of an equation is a single monomial
/// `x_k^m x_i` with nonzero coefficient. Only the certifying routines can build one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowestPartFact {
    equation: String,
    coordinate: usize,
    monomial: Monomial,
    certified_for: Vec<u32>,
}

impl LowestPartFact {
    pub(crate) fn new(equation: String, coordinate: usize, monomial: Monomial, certified_for: Vec<u32>) -> Self {
        LowestPartFact { equation, coordinate, monomial, certified_for }
    }

    pub fn equation(&self) -> &str {
        &self.equation
    }

    pub fn coordinate(&self) -> usize {
        self.coordinate
    }

    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }
}

/// `w(x_i) = b_i / r`, with `b_i = a_i mod r` and the center weighted 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleWeight {
    pub point: QuotientPoint,
    b: Vec<u32>,
    vanishing: CoordSet,
    local: Option<CoordSet>,
    sources: Vec<BoundSource>,
}

/// The initial weight: `b_i = residue(a_i, r)`.
pub fn initial_weight(p: &QuotientPoint, space: &WeightedSpace) -> AdmissibleWeight {
    let b = (0..space.len())
        .map(|i| if Some(i) == p.at_coordinate { 0 } else { residue(i64::from(space.weight(i)), p.r) })
        .collect::<Vec<_>>();
    AdmissibleWeight {
        point: *p,
        sources: b.iter().map(|_| BoundSource::InitialWeight).collect(),
        b,
        vanishing: p.vanishing(space),
        local: None,
    }
}

impl AdmissibleWeight {
    /// Numerators `b_i`; the center entry is 0.
    pub fn numerators(&self) -> &[u32] {
        &self.b
    }

    pub fn weight_of(&self, i: usize) -> Rational {
        Rational::new(i64::from(self.b[i]), i64::from(self.point.r))
    }

    /// `w`-weight numerator of a monomial.
    pub fn weigh(&self, m: &Monomial) -> u64 {
        m.weigh(&self.b)
    }

    /// Declare the three local orbifold coordinates. Their entries must equal the
    /// residues and realize the type `(1, a, r - a)` modulo `r`.
    pub fn with_local_coordinates(mut self, space: &WeightedSpace, local: CoordSet) -> Result<Self, BlowupError> {
        if local.len() != 3 {
            return Err(BlowupError::BadLocalCoordinates(format!("expected 3, got {}", local.len())));
        }
        let r = self.point.r;
        let mut got: Vec<u32> = Vec::new();
        for i in local.iter() {
            if Some(i) == self.point.at_coordinate {
                return Err(BlowupError::BadLocalCoordinates("center coordinate".into()));
            }
            let res = residue(i64::from(space.weight(i)), r);
            if self.b[i] != res {
                return Err(BlowupError::LocalCoordinate(space.name(i).to_string()));
            }
            got.push(res % r);
        }
        got.sort_unstable();
        let mut want = alloc::vec![1 % r, self.point.a % r, (r - self.point.a) % r];
        want.sort_unstable();
        if got != want {
            return Err(BlowupError::BadLocalCoordinates(format!(
                "residues {:?} do not realize {}",
                got,
                self.point.type_label()
            )));
        }
        self.local = Some(local);
        Ok(self)
    }

    pub fn local_coordinates(&self) -> Option<CoordSet> {
        self.local
    }

    /// True iff `b_i = a_i mod r` everywhere off the center.
    pub fn is_admissible(&self, space: &WeightedSpace) -> bool {
        let r = self.point.r;
        (0..space.len()).all(|i| {
            Some(i) == self.point.at_coordinate
                || (i64::from(self.b[i]) - i64::from(space.weight(i))).rem_euclid(i64::from(r)) == 0
        })
    }

    /// `ord_E(D_x) >= b_x / r` for a coordinate vanishing at the point.
    pub fn order_bound(&self, space: &WeightedSpace, i: usize) -> Result<OrderBound, BlowupError> {
        if !self.vanishing.contains(i) {
            return Err(BlowupError::NotVanishing(space.name(i).to_string()));
        }
        Ok(OrderBound {
            coordinate: space.name(i).to_string(),
            n: Rational::from(space.weight(i)),
            bound: self.weight_of(i),
            source: self.sources[i].clone(),
        })
    }

    /// Raise `b` of the fact's coordinate by `r`.
    pub fn weight_bump(&self, space: &WeightedSpace, fact: &LowestPartFact) -> Result<AdmissibleWeight, BlowupError> {
        if fact.certified_for != self.b {
            return Err(BlowupError::StaleFact);
        }
        let i = fact.coordinate;
        if Some(i) == self.point.at_coordinate {
            return Err(BlowupError::ContainsCenter(space.name(i).to_string()));
        }
        if self.local.is_some_and(|l| l.contains(i)) {
            return Err(BlowupError::LocalCoordinate(space.name(i).to_string()));
        }
        let mut next = self.clone();
        next.b[i] += self.point.r;
        next.sources[i] = BoundSource::Bumped {
            equation: fact.equation.clone(),
            monomial: space.display_monomial(&fact.monomial).to_string(),
        };
        Ok(next)
    }

    pub fn display(&self, space: &WeightedSpace) -> String {
        let mut names = Vec::new();
        let mut nums = Vec::new();
        for i in 0..space.len() {
            if Some(i) == self.point.at_coordinate {
                continue;
            }
            names.push(space.name(i));
            nums.push(self.b[i].to_string());
        }
        format!("w({}) = 1/{} ({})", names.join(","), self.point.r, nums.join(","))
    }
}

/// `gcd` helper shared with the stratum engine.
pub(crate) fn gcd_of(space: &WeightedSpace, set: CoordSet) -> u32 {
    set.iter().fold(0u32, |g, i| g.gcd(&space.weight(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidate::lookup;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn cls(n: Rational, lam: Rational) -> BlowupClass {
        BlowupClass::new(n, lam)
    }

    #[test]
    fn weight_products_and_e_cubed() {
        let p7 = QuotientPoint::new(7, 2, None).unwrap();
        assert_eq!(weight_product(&p7), 10);
        assert_eq!(weight_product(&QuotientPoint::new(2, 1, None).unwrap()), 1);
        let p6 = QuotientPoint::new(6, 1, None).unwrap();
        assert_eq!(weight_product(&p6), 5);
        assert_eq!(e_cubed(&QuotientPoint::new(5, 2, None).unwrap()), q(25, 6));
        assert_eq!(e_cubed(&p6), q(36, 5));
        assert_eq!(e_cubed(&QuotientPoint::new(2, 1, None).unwrap()), q(4, 1));
        assert!(QuotientPoint::new(4, 2, None).is_err());
    }

    #[test]
    fn ivr_values() {
        let c25 = lookup("#25").unwrap();
        let s = &c25.space;
        let p = QuotientPoint::new(5, 1, Some(1)).unwrap();
        assert_eq!(ivr(s, &p, s.set_of(&["p", "s", "u", "v"]).unwrap()).unwrap(), q(2, 35));
        assert_eq!(ivr(s, &p, s.set_of(&["v"]).unwrap()).unwrap(), q(5, 50));
        assert_eq!(ivr(s, &p, CoordSet::EMPTY), Err(BlowupError::EmptySet));
        assert!(matches!(ivr(s, &p, s.set_of(&["q"]).unwrap()), Err(BlowupError::ContainsCenter(_))));

        let c166 = lookup("#166").unwrap();
        let s = &c166.space;
        let p = QuotientPoint::new(2, 1, Some(0)).unwrap();
        assert_eq!(ivr(s, &p, s.set_of(&["q", "r", "s", "t", "u"]).unwrap()).unwrap(), q(1, 6));

        let c282 = lookup("#282").unwrap();
        let s = &c282.space;
        let p = QuotientPoint::new(7, 1, Some(3)).unwrap();
        assert_eq!(ivr(s, &p, s.set_of(&["p", "q", "r"]).unwrap()).unwrap(), q(1, 7));
    }

    #[test]
    fn triple_products() {
        let p6 = QuotientPoint::new(6, 1, None).unwrap();
        let k3 = q(1, 42);
        let form = AffineInE::interpolate(|e| {
            y_triple(&cls(q(1, 1), q(1, 6)), &cls(q(1, 1), q(1, 6)), &cls(q(6, 1), e / &q(6, 1)), &p6, &k3)
        });
        assert_eq!(form.constant, q(1, 7));
        assert_eq!(form.slope, q(-1, 30));
        assert!(form.negative_for_all_from(6));
        assert!(!form.negative_for_all_from(4));
        assert_eq!(form.to_string(), "1/7 - e/30");

        let p3 = QuotientPoint::new(3, 1, None).unwrap();
        let v = y_triple(&cls(q(8, 1), q(2, 3)), &cls(q(1, 1), q(1, 3)), &cls(q(1, 1), q(1, 3)), &p3, &q(1, 30));
        assert_eq!(v, q(-1, 15));
    }

    #[test]
    fn nef_pairings() {
        let p3 = QuotientPoint::new(3, 1, None).unwrap();
        assert_eq!(nef_pairing(&cls(q(1, 1), q(1, 21)), &p3, &q(1, 42)), Rational::zero());
        let p2 = QuotientPoint::new(2, 1, None).unwrap();
        assert_eq!(nef_pairing(&cls(q(11, 1), q(1, 2)), &p2, &q(1, 70)), q(11, 70) - q(1, 2));
        assert_eq!(nef_pairing(&cls(q(1, 1), Rational::zero()), &p2, &q(1, 70)), q(1, 70));
    }

    #[test]
    fn initial_weights() {
        let c = lookup("#308").unwrap();
        let s = &c.space;
        let p = QuotientPoint::new(5, 2, Some(1)).unwrap();
        let w = initial_weight(&p, s);
        assert_eq!(w.numerators(), &[1, 0, 1, 1, 2, 3, 4, 5]);
        assert_eq!(w.display(s), "w(p,r,s,t,u,v,w) = 1/5 (1,1,1,2,3,4,5)");

        let c = lookup("#282").unwrap();
        let p = QuotientPoint::new(6, 1, Some(2)).unwrap();
        let w = initial_weight(&p, &c.space);
        assert_eq!(w.display(&c.space), "w(p,q,s,t,u,v,w) = 1/6 (1,6,1,2,3,4,5)");
        assert!(w.is_admissible(&c.space));

        let p3 = QuotientPoint::new(3, 1, None).unwrap();
        let w = initial_weight(&p3, &c.space);
        let t = c.space.index_of("t").unwrap();
        assert_eq!(w.order_bound(&c.space, t).unwrap().bound, q(2, 3));
        assert_eq!(w.order_bound(&c.space, t).unwrap().to_string(), "ord_E(D_t) \u{2265} 2/3");
        let qi = c.space.index_of("q").unwrap();
        assert!(w.order_bound(&c.space, qi).is_err());
    }

    #[test]
    fn bump_requires_matching_fact() {
        let c = lookup("#308").unwrap();
        let s = &c.space;
        let p = QuotientPoint::new(5, 2, Some(1)).unwrap();
        let w = initial_weight(&p, s);
        let m = Monomial::from_pairs(s, &[("q", 3), ("p", 1)]).unwrap();
        let stale = LowestPartFact::new("F3".into(), 0, m.clone(), alloc::vec![0; 8]);
        assert_eq!(w.weight_bump(s, &stale), Err(BlowupError::StaleFact));
        let fact = LowestPartFact::new("F3".into(), 0, m, w.numerators().to_vec());
        let w2 = w.weight_bump(s, &fact).unwrap();
        assert_eq!(w2.order_bound(s, 0).unwrap().bound, q(6, 5));
        assert!(w2.is_admissible(s));

        let local = s.set_of(&["p", "t", "u"]).unwrap();
        let wl = w.clone().with_local_coordinates(s, local).unwrap();
        assert!(matches!(wl.weight_bump(s, &fact), Err(BlowupError::LocalCoordinate(_))));
        assert!(w.with_local_coordinates(s, s.set_of(&["p", "r", "s"]).unwrap()).is_err());
    }

    #[test]
    fn e_cubed_times_wp_is_r_squared() {
        for id in ["#25", "#166", "#282", "#308"] {
            for b in &lookup(id).unwrap().basket {
                let p = QuotientPoint::from_basket(b, None).unwrap();
                let r = i64::from(p.r);
                assert_eq!(&e_cubed(&p) * &Rational::from(weight_product(&p)), Rational::integer(r * r));
            }
        }
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| q(n, d))
    }

    fn class() -> impl Strategy<Value = BlowupClass> {
        (small(), small()).prop_map(|(n, l)| cls(n, l))
    }

    fn point() -> impl Strategy<Value = QuotientPoint> {
        (2u32..12, 1u32..12).prop_filter_map("terminal", |(r, a)| QuotientPoint::new(r, a % r, None).ok())
    }

    proptest! {
        #[test]
        fn y_triple_symmetric_and_linear(a in class(), b in class(), c in class(), d in class(),
                                         s in small(), p in point(), k3 in small()) {
            let base = y_triple(&a, &b, &c, &p, &k3);
            prop_assert_eq!(&base, &y_triple(&b, &a, &c, &p, &k3));
            prop_assert_eq!(&base, &y_triple(&c, &b, &a, &p, &k3));
            prop_assert_eq!(&base, &y_triple(&a, &c, &b, &p, &k3));
            let lhs = y_triple(&a.scale(&s).add(&d), &b, &c, &p, &k3);
            let rhs = &(&s * &base) + &y_triple(&d, &b, &c, &p, &k3);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn nef_pairing_is_triple_with_anticanonical(n in class(), p in point(), k3 in small()) {
            let ac = BlowupClass::anticanonical(&p);
            prop_assert_eq!(nef_pairing(&n, &p, &k3), y_triple(&n, &ac, &ac, &p, &k3));
        }

        #[test]
        fn ivr_of_union_is_min(m1 in 1u64..255, m2 in 1u64..255, idx in 0usize..4) {
            let c = lookup(["#25", "#166", "#282", "#308"][idx]).unwrap();
            let s = &c.space;
            let k = s.len() - 1;
            let p = QuotientPoint::new(s.weight(k).max(2), 1, Some(k)).unwrap();
            let c1 = CoordSet::from_indices((0..k).filter(|i| m1 & (1 << i) != 0));
            let c2 = CoordSet::from_indices((0..k).filter(|i| m2 & (1 << i) != 0));
            prop_assume!(!c1.is_empty() && !c2.is_empty());
            let u = ivr(s, &p, c1.union(c2)).unwrap();
            prop_assert_eq!(u, ivr(s, &p, c1).unwrap().min(ivr(s, &p, c2).unwrap()));
        }

        #[test]
        fn bump_preserves_admissibility(idx in 0usize..8) {
            let c = lookup("#308").unwrap();
            let s = &c.space;
            let p = QuotientPoint::new(5, 2, Some(1)).unwrap();
            prop_assume!(idx != 1);
            let w = initial_weight(&p, s);
            let fact = LowestPartFact::new("F".into(), idx, Monomial::var(8, idx, 1), w.numerators().to_vec());
            let w2 = w.weight_bump(s, &fact).unwrap();
            prop_assert!(w2.is_admissible(s));
            prop_assert_eq!(w2.numerators()[idx], w.numerators()[idx] + 5);
        }
    }
}
