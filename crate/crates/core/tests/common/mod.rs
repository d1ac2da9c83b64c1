//! Slow reference implementations written straight from the definitions.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdt_core::{Sdt, Str, StringSet, Symbol};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_strings` random strings over `alpha` letters, each at most
/// `max_len` long. Half the time comparable strings are dropped so the
/// result is an antichain.
pub fn random_set(
    rng: &mut ChaCha8Rng,
    alpha: u8,
    max_strings: usize,
    max_len: usize,
) -> StringSet {
    let count = rng.random_range(1..=max_strings);
    let mut strings: Vec<Vec<Symbol>> = (0..count)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            (0..len).map(|_| rng.random_range(0..alpha)).collect()
        })
        .collect();
    if rng.random_bool(0.5) {
        strings.sort_by_key(|s| std::cmp::Reverse(s.len()));
        let mut kept: Vec<Vec<Symbol>> = Vec::new();
        for s in strings {
            if kept.iter().all(|k| !k.starts_with(&s)) {
                kept.push(s);
            }
        }
        strings = kept;
    }
    strings.iter().map(|s| Str::from_symbols(s)).collect()
}

pub fn prefix_closure(set: &StringSet) -> BTreeSet<Vec<Symbol>> {
    let mut nodes = BTreeSet::new();
    for s in set.iter() {
        for k in 0..=s.len() {
            nodes.insert(s.symbols()[..k].to_vec());
        }
    }
    nodes
}

pub fn residual(tree: &BTreeSet<Vec<Symbol>>, x: &[Symbol]) -> BTreeSet<Vec<Symbol>> {
    tree.iter()
        .filter(|n| n.starts_with(x))
        .map(|n| n[x.len()..].to_vec())
        .collect()
}

fn comparable(x: &[Symbol], y: &[Symbol]) -> bool {
    x.starts_with(y) || y.starts_with(x)
}

/// Every valid antichain of `set`, unordered.
///
/// Members of a valid antichain share one residual tree, so each candidate
/// is a subset of one residual class; every non-empty subset of every class
/// is tried.
pub fn brute_valid_antichains(set: &StringSet) -> BTreeSet<BTreeSet<Vec<Symbol>>> {
    let tree = prefix_closure(set);
    let nodes: Vec<&Vec<Symbol>> = tree.iter().collect();
    let mut classes: Vec<Vec<&Vec<Symbol>>> = Vec::new();
    for n in &nodes {
        let r = residual(&tree, n);
        match classes.iter_mut().find(|c| residual(&tree, c[0]) == r) {
            Some(c) => c.push(n),
            None => classes.push(vec![n]),
        }
    }
    let mut found = BTreeSet::new();
    for class in classes {
        assert!(class.len() <= 20, "class too large to enumerate");
        for mask in 1u32..(1 << class.len()) {
            let subset: Vec<&Vec<Symbol>> = (0..class.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| class[i])
                .collect();
            let antichain = subset
                .iter()
                .enumerate()
                .all(|(i, x)| subset[i + 1..].iter().all(|y| !comparable(x, y)));
            let covers = set
                .iter()
                .all(|y| subset.iter().any(|x| comparable(x, y.symbols())));
            if antichain && covers {
                found.insert(subset.into_iter().cloned().collect());
            }
        }
    }
    found
}

/// Every maximal antichain of a small set's prefix tree, by trying every
/// subset of the tree.
pub fn brute_maximal_antichains(set: &StringSet) -> Vec<BTreeSet<Vec<Symbol>>> {
    let tree: Vec<Vec<Symbol>> = prefix_closure(set).into_iter().collect();
    assert!(tree.len() <= 16, "tree too large to enumerate");
    let mut found = Vec::new();
    for mask in 1u32..(1 << tree.len()) {
        let subset: Vec<&Vec<Symbol>> = (0..tree.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &tree[i])
            .collect();
        let antichain = subset
            .iter()
            .enumerate()
            .all(|(i, x)| subset[i + 1..].iter().all(|y| !comparable(x, y)));
        let covers = set
            .iter()
            .all(|y| subset.iter().any(|x| comparable(x, y.symbols())));
        if antichain && covers {
            found.push(subset.into_iter().cloned().collect());
        }
    }
    found
}

pub fn as_vecs(set: &StringSet) -> BTreeSet<Vec<Symbol>> {
    set.iter().map(|s| s.symbols().to_vec()).collect()
}

/// Every translation of `x`: one output chosen per edge and one on `#`,
/// concatenated.
pub fn naive_translations(g: &Sdt, x: &[Symbol]) -> BTreeSet<Vec<Symbol>> {
    fn go(g: &Sdt, q: usize, x: &[Symbol], sofar: Vec<Symbol>, out: &mut BTreeSet<Vec<Symbol>>) {
        match x.split_first() {
            None => {
                if let Some(acc) = g.accept(q) {
                    for y in acc.iter() {
                        let mut full = sofar.clone();
                        full.extend_from_slice(y.symbols());
                        out.insert(full);
                    }
                }
            }
            Some((&a, rest)) => {
                if let Some(e) = g.edge(q, a) {
                    for y in e.output.iter() {
                        let mut next = sofar.clone();
                        next.extend_from_slice(y.symbols());
                        go(g, e.target, rest, next, out);
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(g, g.initial(), x, Vec::new(), &mut out);
    out
}

/// All inputs over `alpha` letters of length at most `max_len`, shortest
/// first and lexicographic within a length.
pub fn all_inputs(alpha: u8, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut level = vec![Vec::new()];
    let mut all = level.clone();
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|w| {
                (0..alpha).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        all.extend(level.iter().cloned());
    }
    all
}
