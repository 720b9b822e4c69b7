//! Monomial enumeration against a naive product over exponent ranges.

use std::collections::{BTreeMap, BTreeSet};

use fano_rigidity_core::candidate::{registry, RegistryEntry};
use fano_rigidity_core::{CoordSet, WeightedSpace};

const MAX_DEGREE: u64 = 40;

/// Every exponent vector of degree at most `MAX_DEGREE`, bucketed by degree. Plain
/// depth-first product over exponent ranges, cut only when the running degree
/// exceeds the bound.
fn brute_force(space: &WeightedSpace) -> BTreeMap<u64, BTreeSet<Vec<u32>>> {
    fn go(w: &[u32], e: &mut Vec<u32>, d: u64, out: &mut BTreeMap<u64, BTreeSet<Vec<u32>>>) {
        if e.len() == w.len() {
            out.entry(d).or_default().insert(e.clone());
            return;
        }
        let a = u64::from(w[e.len()]);
        let mut x = 0;
        while d + x * a <= MAX_DEGREE {
            e.push(x as u32);
            go(w, e, d + x * a, out);
            e.pop();
            x += 1;
        }
    }
    let mut out = BTreeMap::new();
    go(&space.weights(), &mut Vec::new(), 0, &mut out);
    out
}

/// Coefficients of `prod 1 / (1 - x^a)` up to `MAX_DEGREE`.
fn generating_counts(weights: &[u32]) -> Vec<u64> {
    let mut c = vec![0u64; MAX_DEGREE as usize + 1];
    c[0] = 1;
    for &a in weights {
        for d in a as usize..c.len() {
            c[d] += c[d - a as usize];
        }
    }
    c
}

fn ambients() -> Vec<(String, WeightedSpace)> {
    registry()
        .into_iter()
        .filter_map(|e| match e {
            RegistryEntry::Analyzable(c) => Some((c.id, c.space)),
            RegistryEntry::MetadataOnly { .. } => None,
        })
        .collect()
}

#[test]
fn enumeration_matches_brute_force_on_all_ambients() {
    for (id, space) in ambients() {
        let brute = brute_force(&space);
        let counts = generating_counts(&space.weights());
        for d in 0..=MAX_DEGREE {
            let got: Vec<Vec<u32>> =
                space.monomials_of_degree(d, space.all()).iter().map(|m| m.exponents().to_vec()).collect();
            let set: BTreeSet<Vec<u32>> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "{id} degree {d}: duplicates");
            let want = brute.get(&d).cloned().unwrap_or_default();
            assert_eq!(set, want, "{id} degree {d}");
            assert_eq!(got.len() as u64, counts[d as usize], "{id} degree {d}: generating function");
        }
        for bits in [0b0000_0001u64, 0b1010_1010, 0b1111_0000, 0b0111_1110, 0b1100_0011] {
            let allowed = CoordSet::from_indices((0..8).filter(|i| bits & (1 << i) != 0));
            for d in 0..=MAX_DEGREE {
                let got: BTreeSet<Vec<u32>> =
                    space.monomials_of_degree(d, allowed).iter().map(|m| m.exponents().to_vec()).collect();
                let want: BTreeSet<Vec<u32>> = brute
                    .get(&d)
                    .into_iter()
                    .flatten()
                    .filter(|e| e.iter().enumerate().all(|(i, &x)| x == 0 || allowed.contains(i)))
                    .cloned()
                    .collect();
                assert_eq!(got, want, "{id} degree {d} allowed {bits:b}");
            }
        }
    }
}
