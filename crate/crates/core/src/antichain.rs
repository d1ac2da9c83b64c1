//! Prefix trees and the valid-antichain algebra on finite string sets.
//!
//! A *maximal antichain* of `S` is a set of pairwise incomparable nodes of
//! the prefix tree `T[S]` such that every member of `S` is comparable to one
//! of them. It is *valid* when all its members have the same residual tree
//! `T[S]_x`. For a finite set, the valid antichains form a chain under
//! [`ac_less`], and every finite antichain factors uniquely into a product of
//! sets that only admit the trivial valid antichains.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::strings::{Str, StringError, StringSet, Symbol};

/// A prefix-closed set of strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTree {
    nodes: BTreeSet<Str>,
}

impl PrefixTree {
    /// `T[S]`, the prefix closure of `set`.
    pub fn of(set: &StringSet) -> Self {
        let mut nodes = BTreeSet::new();
        for s in set {
            for p in s.prefixes() {
                nodes.insert(p);
            }
        }
        PrefixTree { nodes }
    }

    pub fn contains(&self, s: &Str) -> bool {
        self.nodes.contains(s)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Str> {
        self.nodes.iter()
    }

    /// `T_x = { z : xz ∈ T }`.
    pub fn residual(&self, x: &Str) -> BTreeSet<Str> {
        self.nodes
            .iter()
            .filter_map(|n| n.strip_prefix(x))
            .collect()
    }

    /// Assigns each node an id such that two nodes share an id iff their
    /// residual trees are equal.
    fn residual_classes(&self) -> HashMap<Str, usize> {
        let mut children: HashMap<&Str, Vec<(Symbol, &Str)>> = HashMap::new();
        for n in &self.nodes {
            if let Some(parent) = self.nodes.get(&n.truncate().unwrap_or_default()) {
                if !n.is_empty() {
                    children
                        .entry(parent)
                        .or_default()
                        .push((n.last().unwrap(), n));
                }
            }
        }
        let mut interned: HashMap<Vec<(Symbol, usize)>, usize> = HashMap::new();
        let mut ids: HashMap<Str, usize> = HashMap::new();
        // Longest first, so children are classified before parents.
        for n in self.nodes.iter().rev() {
            let mut sig: Vec<(Symbol, usize)> = children
                .get(n)
                .map(|cs| cs.iter().map(|(c, m)| (*c, ids[*m])).collect())
                .unwrap_or_default();
            sig.sort_unstable();
            let next = interned.len();
            let id = *interned.entry(sig).or_insert(next);
            ids.insert(n.clone(), id);
        }
        ids
    }
}

/// `P * S = { xy : x ∈ P, y ∈ S }`.
pub fn product(p: &StringSet, s: &StringSet) -> StringSet {
    p.iter()
        .flat_map(|x| s.iter().map(move |y| x.concat(y)))
        .collect()
}

/// Product of a sequence of sets; `{λ}` for the empty sequence.
pub fn product_all<'a, I: IntoIterator<Item = &'a StringSet>>(factors: I) -> StringSet {
    factors
        .into_iter()
        .fold(StringSet::lambda(), |acc, f| product(&acc, f))
}

/// `P⁻¹S = { y : ∃x ∈ P, xy ∈ S }`.
pub fn left_quotient(p: &StringSet, s: &StringSet) -> StringSet {
    s.iter()
        .flat_map(|z| p.iter().filter_map(move |x| z.strip_prefix(x)))
        .collect()
}

pub fn is_maximal_antichain(p: &StringSet, s: &StringSet) -> bool {
    let tree = PrefixTree::of(s);
    p.iter().all(|x| tree.contains(x))
        && p.is_antichain()
        && s.iter().all(|y| p.iter().any(|x| x.comparable(y)))
}

pub fn is_valid_antichain(p: &StringSet, s: &StringSet) -> bool {
    if !is_maximal_antichain(p, s) {
        return false;
    }
    let tree = PrefixTree::of(s);
    let mut residuals = p.iter().map(|x| tree.residual(x));
    match residuals.next() {
        None => true,
        Some(first) => residuals.all(|r| r == first),
    }
}

/// `P <_ac Q`: smaller sets first; equal sizes compare by the direction of
/// the prefix relation between their comparable members.
pub fn ac_less(p: &StringSet, q: &StringSet) -> bool {
    match p.len().cmp(&q.len()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => p.iter().all(|x| {
            q.iter()
                .filter(|y| x.comparable(y))
                .all(|y| x != y && x.is_prefix_of(y))
        }),
    }
}

/// All valid antichains of `set`, ascending under `<_ac`.
///
/// Every valid antichain contains a node comparable to the llex-least member
/// of `set`, and consists of exactly the nodes sharing that node's residual
/// tree, so the candidates are the residual classes of those nodes.
pub fn valid_antichains(set: &StringSet) -> Result<Vec<StringSet>, StringError> {
    let least = set.least().ok_or(StringError::EmptySet)?;
    let tree = PrefixTree::of(set);
    let classes = tree.residual_classes();
    let mut members: BTreeMap<usize, StringSet> = BTreeMap::new();
    for n in tree.nodes() {
        members.entry(classes[n]).or_default().insert(n.clone());
    }
    let mut seen = BTreeSet::new();
    let mut found = Vec::new();
    for n in tree.nodes().filter(|n| n.comparable(least)) {
        let class = classes[n];
        if !seen.insert(class) {
            continue;
        }
        let candidate = &members[&class];
        if set
            .iter()
            .all(|y| candidate.iter().any(|x| x.comparable(y)))
        {
            let height = tree.residual(n).len();
            found.push((candidate.len(), Reverse(height), candidate.clone()));
        }
    }
    found.sort();
    Ok(found.into_iter().map(|(_, _, p)| p).collect())
}

/// One step of the maximal factorization: a factor and the quotient left
/// after removing the product of all factors so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorStep {
    pub factor: StringSet,
    pub remainder: StringSet,
}

/// The unique maximal factorization of a finite antichain, with the
/// remainder after each factor. The last remainder is `{λ}`.
pub fn factorization_steps(set: &StringSet) -> Result<Vec<FactorStep>, StringError> {
    if set.is_empty() {
        return Err(StringError::EmptySet);
    }
    if let Some((x, y)) = set.comparable_pair() {
        return Err(StringError::NotAntichain(
            format!("{x:?}"),
            format!("{y:?}"),
        ));
    }
    if set.is_lambda() {
        return Ok(vec![FactorStep {
            factor: StringSet::lambda(),
            remainder: StringSet::lambda(),
        }]);
    }
    let mut steps = Vec::new();
    let mut current = set.clone();
    while !current.is_lambda() {
        let vac = valid_antichains(&current)?;
        // `current` is a non-trivial antichain, so it is its own greatest
        // valid antichain and vac has at least two elements.
        let factor = vac[1].clone();
        let remainder = left_quotient(&factor, &current);
        steps.push(FactorStep {
            factor,
            remainder: remainder.clone(),
        });
        current = remainder;
    }
    Ok(steps)
}

pub fn maximal_factorization(set: &StringSet) -> Result<Vec<StringSet>, StringError> {
    Ok(factorization_steps(set)?
        .into_iter()
        .map(|s| s.factor)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{s12, s24, s26};
    use crate::strings::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn set(t: &str) -> StringSet {
        ab().parse_set(t).unwrap()
    }

    #[test]
    fn product_is_not_commutative() {
        assert_eq!(product(&set("a"), &set("a,b")), set("aa,ab"));
        assert_eq!(product(&set("a,b"), &set("a")), set("aa,ba"));
        assert_eq!(product(&set("-"), &s12()), s12());
    }

    #[test]
    fn quotient_of_worked_factorization() {
        assert_eq!(left_quotient(&set("-"), &s26()), s26());
        assert_eq!(
            left_quotient(&set("a,b"), &s24()),
            set("aaaa,aaab,aabaa,aabab,aabba,aabbb,baa,bab,bbaa,bbab,bbba,bbbb")
        );
    }

    #[test]
    fn maximal_antichains_of_worked_example() {
        let s = s12();
        assert!(is_maximal_antichain(&set("-"), &s));
        assert!(is_maximal_antichain(&set("aa,ba,bb"), &s));
        assert!(!is_maximal_antichain(&StringSet::new(), &s));
        assert!(is_valid_antichain(&set("aa,ba,bb"), &s));
        assert!(is_valid_antichain(&set("-"), &s));
        // The non-valid maximal antichain drawn in the example: the depth-3
        // nodes of T[S12].
        let dotted = set("aaa,aab,baa,bab,bba,bbb");
        assert!(is_maximal_antichain(&dotted, &s));
        assert!(!is_valid_antichain(&dotted, &s));
    }

    #[test]
    fn valid_antichains_of_worked_example() {
        let vac = valid_antichains(&s12()).unwrap();
        assert_eq!(
            vac,
            vec![
                set("-"),
                set("aa,ba,bb"),
                set("aaaa,aab,baaa,bab,bbaa,bbb"),
                s12()
            ]
        );
    }

    #[test]
    fn singleton_prefixes_are_valid() {
        let abc = Alphabet::from_chars("abc").unwrap();
        let s = abc.parse_set("abc").unwrap();
        let vac = valid_antichains(&s).unwrap();
        let expect: Vec<StringSet> = ["-", "a", "ab", "abc"]
            .iter()
            .map(|t| abc.parse_set(t).unwrap())
            .collect();
        assert_eq!(vac, expect);
    }

    #[test]
    fn empty_set_is_rejected() {
        assert_eq!(
            valid_antichains(&StringSet::new()),
            Err(StringError::EmptySet)
        );
        assert_eq!(
            maximal_factorization(&StringSet::new()),
            Err(StringError::EmptySet)
        );
    }

    #[test]
    fn ac_order_examples() {
        assert!(ac_less(
            &set("aa,ba,bb"),
            &set("aaaa,aab,baaa,bab,bbaa,bbb")
        ));
        assert!(!ac_less(&set("aa,ba,bb"), &set("aa,ba,bb")));
        assert!(!ac_less(&set("ab"), &set("a")));
        assert!(ac_less(&set("a"), &set("ab")));
        assert!(ac_less(&set("-"), &set("a,b")));
    }

    #[test]
    fn worked_factorization() {
        let steps = factorization_steps(&s24()).unwrap();
        let factors: Vec<_> = steps.iter().map(|s| s.factor.clone()).collect();
        assert_eq!(
            factors,
            vec![set("a,b"), set("aa,b"), set("a,ba,bb"), set("a,b")]
        );
        assert_eq!(
            steps[0].remainder,
            set("aaaa,aaab,aabaa,aabab,aabba,aabbb,baa,bab,bbaa,bbab,bbba,bbbb")
        );
        assert_eq!(steps[1].remainder, set("aa,ab,baa,bab,bba,bbb"));
        assert_eq!(steps[3].remainder, set("-"));
        assert_eq!(product_all(&factors), s24());
    }

    #[test]
    fn quoted_26_string_example_does_not_split_on_first_letter() {
        let vac = valid_antichains(&s26()).unwrap();
        assert!(!vac.contains(&set("a,b")));
        let factors = maximal_factorization(&s26()).unwrap();
        assert_eq!(product_all(&factors), s26());
    }

    #[test]
    fn degenerate_factorizations() {
        assert_eq!(maximal_factorization(&set("-")).unwrap(), vec![set("-")]);
        assert_eq!(
            maximal_factorization(&set("a,b")).unwrap(),
            vec![set("a,b")]
        );
        assert!(matches!(
            maximal_factorization(&set("a,ab")),
            Err(StringError::NotAntichain(..))
        ));
    }

    #[test]
    fn non_antichain_sets_still_list_valid_antichains() {
        // {ab} is valid for {a, ab}: the string `a` is comparable to it.
        let vac = valid_antichains(&set("a,ab")).unwrap();
        assert_eq!(vac, vec![set("-"), set("a"), set("ab")]);
    }
}
