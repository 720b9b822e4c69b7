//! Monotonicity of the exclusion lemmas in their order bounds, and a golden
//! transcript of the registry runs.

use fano_rigidity_core::blowup::{initial_weight, OrderBound, QuotientPoint};
use fano_rigidity_core::candidate::{lookup, CenterSpec, FanoCandidate};
use fano_rigidity_core::exclusion::{
    test_curve_family, test_nef, verify, ExclusionVerdict, PencilOrder, Status, SubCertificate, Verification,
    VerifyOptions,
};
use fano_rigidity_core::explicit::ClusterFormat;
use fano_rigidity_core::monomial_model::{guaranteed_pure_powers, stratum_status, Stratum};
use fano_rigidity_core::{CoordSet, Rational};
use proptest::prelude::*;

const IDS: [&str; 4] = ["#25", "#166", "#282", "#308"];

fn report(id: &str) -> Verification {
    let opts = VerifyOptions {
        isolating_product: (id == "#166").then_some(20),
        format: (id == "#282").then_some(ClusterFormat::G2),
        ..Default::default()
    };
    verify(&lookup(id).unwrap(), &opts).unwrap()
}

fn frac(num: u32, den: u32) -> Rational {
    Rational::new(i64::from(num), i64::from(den))
}

/// A quotient point of `c` (centered generically) with a divisor set drawn from
/// the coordinates that vanish there.
fn nef_setup(c: &FanoCandidate, pick: usize, mask: u16) -> Option<(QuotientPoint, Vec<OrderBound>, CoordSet)> {
    let quotients: Vec<_> = c.basket.iter().filter(|e| e.r > 2).collect();
    let entry = quotients.get(pick % quotients.len().max(1))?;
    let p = QuotientPoint::from_basket(entry, None).ok()?;
    let w = initial_weight(&p, &c.space);
    let vanishing: Vec<usize> = p.vanishing(&c.space).iter().collect();
    let set = CoordSet::from_indices(vanishing.iter().enumerate().filter(|(j, _)| mask & (1 << j) != 0).map(|(_, &i)| i));
    if set.is_empty() {
        return None;
    }
    let bounds = set.iter().map(|i| w.order_bound(&c.space, i).unwrap()).collect();
    Some((p, bounds, set))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weakening_a_nef_bound_never_excludes(
        id in 0usize..4, pick in 0usize..4, mask in 1u16..256, scale in 1i64..9, which in 0usize..8, cut in 0u32..8,
    ) {
        let c = lookup(IDS[id]).unwrap();
        let Some((p, bounds, set)) = nef_setup(&c, pick, mask) else { return Ok(()); };
        let facts = guaranteed_pure_powers(&c).unwrap();
        let cert = stratum_status(&c, &Stratum::new(&c.space, set), &facts);
        let center = CenterSpec::quotient(fano_rigidity_core::candidate::BasketEntry::new(p.r, p.a, 1), None);
        let strong = test_nef(&c, center.clone(), &p, &bounds, cert.clone(), Rational::integer(scale)).unwrap();
        let mut weak = bounds.clone();
        let j = which % weak.len();
        weak[j].bound = &weak[j].bound * &frac(cut, 8);
        let weaker = test_nef(&c, center, &p, &weak, cert, Rational::integer(scale)).unwrap();
        prop_assert!(!(strong.status == Status::Inconclusive && weaker.status == Status::Excluded));
        prop_assert_eq!(strong.replay(), strong.status);
    }

    #[test]
    fn weakening_curve_family_orders_never_excludes(
        id in 0usize..4, pick in 0usize..4, mask in 1u16..256,
        s_num in 0u32..30, l_num in 0u32..30, s_cut in 0u32..8, l_cut in 0u32..8,
    ) {
        let c = lookup(IDS[id]).unwrap();
        let Some((p, _, set)) = nef_setup(&c, pick, mask) else { return Ok(()); };
        let facts = guaranteed_pure_powers(&c).unwrap();
        let cert = stratum_status(&c, &Stratum::new(&c.space, set), &facts);
        let names: Vec<String> = set.iter().map(|i| c.space.name(i).to_string()).collect();
        let (first, rest) = names.split_first().unwrap();
        let w0 = c.space.weight(c.space.index_of(first).unwrap());
        let s = OrderBound::stated(first, Rational::integer(i64::from(w0)), frac(s_num, p.r), "test");
        let gens = if rest.is_empty() { vec![first.clone()] } else { rest.to_vec() };
        let l = PencilOrder { generators: gens, n: Rational::integer(1), order: frac(l_num, p.r), exact_by: String::from("test") };
        let center = CenterSpec::quotient(fano_rigidity_core::candidate::BasketEntry::new(p.r, p.a, 1), None);
        let strong = test_curve_family(&c, center.clone(), &p, &s, &l, cert.clone());
        let mut s2 = s.clone();
        s2.bound = &s.bound * &frac(s_cut, 8);
        let mut l2 = l.clone();
        l2.order = &l.order * &frac(l_cut, 8);
        let weaker = test_curve_family(&c, center, &p, &s2, &l2, cert);
        prop_assert!(!(strong.status == Status::Inconclusive && weaker.status == Status::Excluded));
    }
}

fn line(out: &mut String, indent: &str, v: &ExclusionVerdict) {
    let values: Vec<String> = v.computed_values.iter().map(|n| format!("{}={}", n.name, n.value)).collect();
    out.push_str(&format!("{indent}{} | {} | {:?} | {}\n", v.center.label(), v.lemma.name(), v.status, values.join("; ")));
    for sub in &v.sub_certificates {
        if let SubCertificate::Branch { branch } = sub {
            out.push_str(&format!("{indent}  branch {}\n", branch.label));
            line(out, &format!("{indent}    "), &branch.verdict);
        }
    }
}

fn transcript(v: &Verification) -> String {
    let mut out = String::new();
    for verdict in &v.verdicts {
        line(&mut out, "", verdict);
    }
    out
}

#[test]
fn golden_transcripts() {
    let golden = [
        ("#25", include_str!("golden/25.txt")),
        ("#166", include_str!("golden/166.txt")),
        ("#282", include_str!("golden/282.txt")),
        ("#308", include_str!("golden/308.txt")),
    ];
    for (id, want) in golden {
        assert_eq!(transcript(&report(id)), want, "{id}");
    }
}

#[test]
fn dropping_a_bound_to_zero_loses_the_exclusion() {
    // The 1/3 point of #308 is excluded with its initial bounds and not with a zero bound.
    let c = lookup("#308").unwrap();
    let facts = guaranteed_pure_powers(&c).unwrap();
    let entry = *c.basket.iter().find(|e| e.r == 3).unwrap();
    let p = QuotientPoint::from_basket(&entry, None).unwrap();
    let w = initial_weight(&p, &c.space);
    let set = c.space.set_of(&["p", "q", "u"]).unwrap();
    let bounds: Vec<OrderBound> = set.iter().map(|i| w.order_bound(&c.space, i).unwrap()).collect();
    let cert = stratum_status(&c, &Stratum::new(&c.space, set), &facts);
    let run = |b: &[OrderBound]| test_nef(&c, CenterSpec::quotient(entry, None), &p, b, cert.clone(), Rational::integer(8)).unwrap();
    assert_eq!(run(&bounds).status, Status::Excluded);
    let mut weak = bounds.clone();
    weak[0].bound = Rational::zero();
    assert_eq!(run(&weak).status, Status::Inconclusive);
}

#[test]
fn reports_are_deterministic() {
    for id in IDS {
        assert_eq!(format!("{:?}", report(id)), format!("{:?}", report(id)));
    }
}
