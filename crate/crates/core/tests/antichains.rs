mod common;

use common::{as_vecs, brute_maximal_antichains, brute_valid_antichains, random_set, rng};
use proptest::prelude::*;
use sdt_core::{
    ac_less, is_maximal_antichain, is_valid_antichain, left_quotient, maximal_factorization,
    product, product_all, valid_antichains, Str, StringSet, Symbol,
};

fn set_strategy() -> impl Strategy<Value = StringSet> {
    (1u8..=3).prop_flat_map(|alpha| {
        prop::collection::vec(prop::collection::vec(0..alpha, 0..=6), 1..=12)
            .prop_map(|v| v.iter().map(|s| Str::from_symbols(s)).collect())
    })
}

/// Random sets with every string that prefixes another dropped.
fn antichain_strategy() -> impl Strategy<Value = StringSet> {
    set_strategy().prop_map(|s| {
        s.iter()
            .filter(|x| !s.iter().any(|y| y != *x && x.is_prefix_of(y)))
            .cloned()
            .collect()
    })
}

fn small_set_strategy() -> impl Strategy<Value = StringSet> {
    prop::collection::vec(prop::collection::vec(0u8..2, 0..=3), 1..=4)
        .prop_map(|v| v.iter().map(|s| Str::from_symbols(s)).collect())
}

proptest! {
    #[test]
    fn valid_antichains_match_subset_search(s in set_strategy()) {
        let listed = valid_antichains(&s).unwrap();
        let got: std::collections::BTreeSet<_> = listed.iter().map(as_vecs).collect();
        prop_assert_eq!(got.len(), listed.len());
        prop_assert_eq!(got, brute_valid_antichains(&s));
        prop_assert!(listed[0].is_lambda());
        for w in listed.windows(2) {
            prop_assert!(ac_less(&w[0], &w[1]));
            prop_assert!(!ac_less(&w[1], &w[0]));
        }
        prop_assert_eq!(listed.last() == Some(&s), s.is_antichain());
    }

    #[test]
    fn class_search_agrees_with_full_subset_search(s in small_set_strategy()) {
        let maximal = brute_maximal_antichains(&s);
        for p in &maximal {
            let as_set: StringSet = p.iter().map(|v| Str::from_symbols(v)).collect();
            prop_assert!(is_maximal_antichain(&as_set, &s));
        }
        let valid: std::collections::BTreeSet<_> = maximal
            .into_iter()
            .filter(|p| {
                let tree = common::prefix_closure(&s);
                let mut rs = p.iter().map(|x| common::residual(&tree, x));
                let first = rs.next().unwrap();
                rs.all(|r| r == first)
            })
            .collect();
        prop_assert_eq!(&valid, &brute_valid_antichains(&s));
        for p in &valid {
            let as_set: StringSet = p.iter().map(|v| Str::from_symbols(v)).collect();
            prop_assert!(is_valid_antichain(&as_set, &s));
        }
    }

    #[test]
    fn quotient_by_a_valid_antichain_reconstructs(s in antichain_strategy()) {
        for p in valid_antichains(&s).unwrap() {
            prop_assert_eq!(product(&p, &left_quotient(&p, &s)), s.clone());
        }
    }

    #[test]
    fn factorization_is_unique_and_maximal(s in set_strategy()) {
        match maximal_factorization(&s) {
            Err(_) => prop_assert!(!s.is_antichain()),
            Ok(factors) => {
                prop_assert_eq!(product_all(&factors), s.clone());
                for f in &factors {
                    let vac = valid_antichains(f).unwrap();
                    if f.is_lambda() {
                        prop_assert_eq!(vac, vec![StringSet::lambda()]);
                    } else {
                        prop_assert_eq!(vac, vec![StringSet::lambda(), f.clone()]);
                    }
                }
                prop_assert_eq!(maximal_factorization(&product_all(&factors)).unwrap(), factors);
            }
        }
    }
}

/// Outside antichains a quotient can lose members: `{a}` is valid for
/// `{λ, a}` but `{a} * {a}⁻¹{λ, a} = {a}`, and no factorization of `{λ, a}`
/// into sets with only trivial valid antichains exists.
#[test]
fn reconstruction_needs_an_antichain() {
    let s: StringSet = [Str::empty(), Str::from_symbols(&[0])]
        .into_iter()
        .collect();
    let a = StringSet::singleton(Str::from_symbols(&[0]));
    assert_eq!(
        valid_antichains(&s).unwrap(),
        vec![StringSet::lambda(), a.clone()]
    );
    assert_eq!(product(&a, &left_quotient(&a, &s)), a);
    assert!(maximal_factorization(&s).is_err());
}

/// `P * S` and `P⁻¹S` against their set-builder definitions.
#[test]
fn product_and_quotient_match_definitions() {
    let mut r = rng(11);
    for _ in 0..300 {
        let p = random_set(&mut r, 2, 4, 3);
        let s = random_set(&mut r, 2, 6, 5);
        let mut expected = std::collections::BTreeSet::new();
        for x in p.iter() {
            for y in s.iter() {
                let mut v: Vec<Symbol> = x.symbols().to_vec();
                v.extend_from_slice(y.symbols());
                expected.insert(v);
            }
        }
        assert_eq!(as_vecs(&product(&p, &s)), expected);
        let mut quotient = std::collections::BTreeSet::new();
        for z in s.iter() {
            for x in p.iter() {
                if z.symbols().starts_with(x.symbols()) {
                    quotient.insert(z.symbols()[x.len()..].to_vec());
                }
            }
        }
        assert_eq!(as_vecs(&left_quotient(&p, &s)), quotient);
    }
}

#[test]
fn antichain_order_is_total_on_valid_antichains() {
    let mut r = rng(5);
    for _ in 0..500 {
        let s = random_set(&mut r, 3, 12, 6);
        let vac = valid_antichains(&s).unwrap();
        for (i, p) in vac.iter().enumerate() {
            for (j, q) in vac.iter().enumerate() {
                assert_eq!(ac_less(p, q), i < j, "{p:?} vs {q:?}");
            }
        }
    }
}
