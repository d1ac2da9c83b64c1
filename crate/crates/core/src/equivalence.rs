//! Isomorphism, bounded equivalence and canonical forms.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::antichain::{left_quotient, product, valid_antichains};
use crate::learner::{learn, LearnError};
use crate::oracle::machine_oracle;
use crate::strings::{Str, StringSet, Symbol};
use crate::transducer::{Sdt, SdtBuilder, SdtError, StateId, DEFAULT_PAIR_CAP};

/// Default bound on inputs visited plus set nodes in [`bounded_equiv`].
pub const DEFAULT_EQUIV_CAP: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("machines are over different alphabets")]
    AlphabetMismatch,
    #[error("a translation set grew past {cap} strings")]
    Explosion { cap: usize },
    #[error("no stable canonical machine after {rounds} rounds")]
    NoConvergence { rounds: usize },
    #[error("onwarding did not reach a fixpoint")]
    NoFixpoint,
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Sdt(#[from] SdtError),
}

fn same_alphabets(g1: &Sdt, g2: &Sdt) -> bool {
    g1.input_alphabet() == g2.input_alphabet() && g1.output_alphabet() == g2.output_alphabet()
}

/// Pairs states from the two initial states along matching symbols and
/// requires the pairing to be a bijection preserving every output set.
pub fn isomorphic(g1: &Sdt, g2: &Sdt) -> bool {
    if !same_alphabets(g1, g2) || g1.num_states() != g2.num_states() {
        return false;
    }
    let mut fwd: Vec<Option<StateId>> = vec![None; g1.num_states()];
    let mut bwd: Vec<Option<StateId>> = vec![None; g2.num_states()];
    let mut queue = VecDeque::from([(g1.initial(), g2.initial())]);
    fwd[g1.initial()] = Some(g2.initial());
    bwd[g2.initial()] = Some(g1.initial());
    while let Some((p, q)) = queue.pop_front() {
        if g1.accept(p) != g2.accept(q) {
            return false;
        }
        let e1: Vec<_> = g1.edges_from(p).collect();
        let e2: Vec<_> = g2.edges_from(q).collect();
        if e1.len() != e2.len() {
            return false;
        }
        for ((a1, x1), (a2, x2)) in e1.into_iter().zip(e2) {
            if a1 != a2 || x1.output != x2.output {
                return false;
            }
            match (fwd[x1.target], bwd[x2.target]) {
                (None, None) => {
                    fwd[x1.target] = Some(x2.target);
                    bwd[x2.target] = Some(x1.target);
                    queue.push_back((x1.target, x2.target));
                }
                (Some(t2), Some(t1)) if t2 == x2.target && t1 == x1.target => {}
                _ => return false,
            }
        }
    }
    fwd.iter().all(Option::is_some)
}

/// Compares domains and translation sets on every input of length at most
/// `depth`. Returns the llex-least input where they differ.
pub fn bounded_equiv(g1: &Sdt, g2: &Sdt, depth: usize) -> Result<Option<Str>, EquivError> {
    bounded_equiv_capped(g1, g2, depth, DEFAULT_EQUIV_CAP)
}

/// `cap` bounds the inputs visited plus the nodes used to store
/// translation sets.
pub fn bounded_equiv_capped(
    g1: &Sdt,
    g2: &Sdt,
    depth: usize,
    cap: usize,
) -> Result<Option<Str>, EquivError> {
    if !same_alphabets(g1, g2) {
        return Err(EquivError::AlphabetMismatch);
    }
    type Run = Option<(StateId, SetId)>;
    let mut sets = SetDag::new();
    let finish = |sets: &mut SetDag, g: &Sdt, run: Run| -> Option<SetId> {
        let (q, out) = run?;
        let acc = g.accept(q)?;
        let tail = sets.code(acc.as_set(), SetDag::LAMBDA);
        Some(sets.append(out, tail))
    };
    let advance = |sets: &mut SetDag, g: &Sdt, run: Run, a| -> Run {
        let (q, out) = run?;
        let e = g.edge(q, a)?;
        let tail = sets.code(e.output.as_set(), SetDag::LAMBDA);
        Some((e.target, sets.append(out, tail)))
    };
    let start = |g: &Sdt| Some((g.initial(), SetDag::LAMBDA));
    let mut queue: VecDeque<(Str, Run, Run)> =
        VecDeque::from([(Str::empty(), start(g1), start(g2))]);
    let mut visited = 0;
    while let Some((x, r1, r2)) = queue.pop_front() {
        visited += 1;
        if visited + sets.len() > cap {
            return Err(EquivError::Explosion { cap });
        }
        if finish(&mut sets, g1, r1) != finish(&mut sets, g2, r2) {
            return Ok(Some(x));
        }
        if x.len() == depth {
            continue;
        }
        for a in g1.input_alphabet().symbols() {
            let n1 = advance(&mut sets, g1, r1, a);
            let n2 = advance(&mut sets, g2, r2, a);
            if n1.is_some() || n2.is_some() {
                queue.push_back((x.push(a), n1, n2));
            }
        }
    }
    Ok(None)
}

type SetId = usize;

/// Finite prefix codes stored as hash-consed acyclic automata, so equal
/// sets get equal ids and products share their common tails.
struct SetDag {
    nodes: Vec<(bool, Vec<(Symbol, SetId)>)>,
    index: HashMap<(bool, Vec<(Symbol, SetId)>), SetId>,
}

impl SetDag {
    /// `{λ}`.
    const LAMBDA: SetId = 0;

    fn new() -> Self {
        let mut dag = SetDag {
            nodes: Vec::new(),
            index: HashMap::new(),
        };
        dag.intern(true, Vec::new());
        dag
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn intern(&mut self, accept: bool, children: Vec<(Symbol, SetId)>) -> SetId {
        let key = (accept, children);
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        self.nodes.push(key.clone());
        self.index.insert(key, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    /// `code · tail` for a prefix code `code`.
    fn code(&mut self, code: &StringSet, tail: SetId) -> SetId {
        let mut strings: Vec<&[Symbol]> = code.iter().map(|s| s.symbols()).collect();
        strings.sort();
        self.code_from(&strings, tail)
    }

    /// `strings` must be sorted lexicographically.
    fn code_from(&mut self, strings: &[&[Symbol]], tail: SetId) -> SetId {
        if strings.iter().any(|s| s.is_empty()) {
            debug_assert_eq!(strings.len(), 1, "not a prefix code");
            return tail;
        }
        let mut children = Vec::new();
        let mut rest = strings;
        while let Some(first) = rest.first() {
            let a = first[0];
            let split = rest.iter().position(|s| s[0] != a).unwrap_or(rest.len());
            let group: Vec<&[Symbol]> = rest[..split].iter().map(|s| &s[1..]).collect();
            children.push((a, self.code_from(&group, tail)));
            rest = &rest[split..];
        }
        self.intern(false, children)
    }

    /// `set · tail` where every string of `set` ends at `{λ}`.
    fn append(&mut self, set: SetId, tail: SetId) -> SetId {
        let mut memo = HashMap::new();
        self.append_memo(set, tail, &mut memo)
    }

    fn append_memo(&mut self, set: SetId, tail: SetId, memo: &mut HashMap<SetId, SetId>) -> SetId {
        if set == Self::LAMBDA {
            return tail;
        }
        if let Some(&id) = memo.get(&set) {
            return id;
        }
        let (accept, children) = self.nodes[set].clone();
        debug_assert!(!accept, "accepting inner node in a prefix code");
        let children = children
            .into_iter()
            .map(|(a, c)| (a, self.append_memo(c, tail, memo)))
            .collect();
        let id = self.intern(false, children);
        memo.insert(set, id);
        id
    }
}

/// The `<_ac`-greatest antichain valid for every set in `sets`.
fn greatest_common_vac<'a>(sets: impl IntoIterator<Item = &'a StringSet>) -> Option<StringSet> {
    let mut common: Option<Vec<StringSet>> = None;
    for s in sets {
        let vac = valid_antichains(s).expect("translation sets are non-empty");
        common = Some(match common {
            None => vac,
            Some(prev) => prev.into_iter().filter(|p| vac.contains(p)).collect(),
        });
    }
    common.map(|c| c.last().cloned().expect("{λ} is always common"))
}

/// For each state, the greatest antichain that every translation of its
/// future starts with, found as a greatest fixpoint from "unconstrained".
pub fn future_antichains(g: &Sdt) -> Result<Vec<StringSet>, EquivError> {
    let mut phi: Vec<Option<StringSet>> = vec![None; g.num_states()];
    let limit = 4 * (g.num_states() + 1) * (g.max_output_len() + 2) * g.num_states().max(1);
    for _ in 0..limit {
        let mut changed = false;
        for q in g.states() {
            let mut constraints: Vec<StringSet> = Vec::new();
            if let Some(acc) = g.accept(q) {
                constraints.push(acc.as_set().clone());
            }
            for (_, e) in g.edges_from(q) {
                if let Some(next) = &phi[e.target] {
                    constraints.push(product(e.output.as_set(), next));
                }
            }
            let value = greatest_common_vac(&constraints);
            if value.is_some() && value != phi[q] {
                phi[q] = value;
                changed = true;
            }
        }
        if !changed {
            return phi
                .into_iter()
                .map(|p| p.ok_or(EquivError::NoFixpoint))
                .collect();
        }
    }
    Err(EquivError::NoFixpoint)
}

/// Pushes each state's future antichain onto its incoming edges. The
/// initial state gets a fresh copy that advances nothing, since no output
/// can precede the empty input.
pub fn onwarded(g: &Sdt) -> Result<Sdt, EquivError> {
    let phi = future_antichains(g)?;
    let mut b = SdtBuilder::new(g.input_alphabet().clone(), g.output_alphabet().clone());
    let start = b.add_state("start");
    let ids: Vec<StateId> = g.states().map(|q| b.add_state(g.state_name(q))).collect();
    b.set_initial(start);
    let lambda = StringSet::lambda();
    let emit = |b: &mut SdtBuilder, from: StateId, pushed: &StringSet, q: StateId| {
        for (a, e) in g.edges_from(q) {
            let out = left_quotient(pushed, &product(e.output.as_set(), &phi[e.target]));
            b.add_transition(from, a, ids[e.target], out);
        }
        if let Some(acc) = g.accept(q) {
            b.add_accept(from, left_quotient(pushed, acc.as_set()));
        }
    };
    emit(&mut b, start, &lambda, g.initial());
    for q in g.states() {
        emit(&mut b, ids[q], &phi[q], q);
    }
    let raw = b.build()?;
    Ok(raw.normalized())
}

/// Merges states with identical outputs and transition structure.
pub fn minimized(g: &Sdt) -> Sdt {
    let n = g.num_states();
    let signature = |q: StateId| {
        let edges: Vec<_> = g
            .edges_from(q)
            .map(|(a, e)| (a, e.output.clone()))
            .collect();
        (g.accept(q).cloned(), edges)
    };
    let mut ids: HashMap<_, usize> = HashMap::new();
    let mut class: Vec<usize> = (0..n)
        .map(|q| {
            let next = ids.len();
            *ids.entry(signature(q)).or_insert(next)
        })
        .collect();
    loop {
        let mut ids: HashMap<(usize, Vec<(u8, usize)>), usize> = HashMap::new();
        let refined: Vec<usize> = (0..n)
            .map(|q| {
                let key = (
                    class[q],
                    g.edges_from(q).map(|(a, e)| (a, class[e.target])).collect(),
                );
                let next = ids.len();
                *ids.entry(key).or_insert(next)
            })
            .collect();
        let stable = ids.len()
            == class
                .iter()
                .collect::<std::collections::BTreeSet<_>>()
                .len();
        class = refined;
        if stable {
            break;
        }
    }
    let mut rep: BTreeMap<usize, StateId> = BTreeMap::new();
    for q in g.states() {
        rep.entry(class[q]).or_insert(q);
    }
    let mut b = SdtBuilder::new(g.input_alphabet().clone(), g.output_alphabet().clone());
    let new_ids: BTreeMap<usize, StateId> = rep
        .keys()
        .map(|&c| (c, b.add_state(format!("c{c}"))))
        .collect();
    b.set_initial(new_ids[&class[g.initial()]]);
    for (&c, &q) in &rep {
        for (a, e) in g.edges_from(q) {
            b.add_transition(
                new_ids[&c],
                a,
                new_ids[&class[e.target]],
                e.output.as_set().clone(),
            );
        }
        if let Some(acc) = g.accept(q) {
            b.add_accept(new_ids[&c], acc.as_set().clone());
        }
    }
    b.build()
        .expect("minimizing preserves validity")
        .normalized()
}

/// The canonical machine computed directly: onward every state, then
/// merge states that became indistinguishable.
pub fn canonical_form(g: &Sdt) -> Result<Sdt, EquivError> {
    Ok(minimized(&onwarded(g)?))
}

#[derive(Debug, Clone)]
pub struct CanonicalReport {
    pub machine: Sdt,
    /// Enumeration depths tried.
    pub rounds: usize,
    pub stable: bool,
    pub final_depth: usize,
}

/// Learns `g` from its own pairs at increasing depth until two successive
/// depths give isomorphic machines that agree with `g` up to that depth.
pub fn canonicalize(g: &Sdt) -> Result<CanonicalReport, EquivError> {
    canonicalize_with(g, g.num_states() + 2, 8)
}

pub fn canonicalize_with(
    g: &Sdt,
    start_depth: usize,
    max_rounds: usize,
) -> Result<CanonicalReport, EquivError> {
    let mut previous: Option<Sdt> = None;
    for round in 1..=max_rounds {
        let k = start_depth + round - 1;
        let data = g.enumerate_pairs(k, DEFAULT_PAIR_CAP)?;
        let h = learn(&data, &machine_oracle(g.clone()))?;
        let agrees = bounded_equiv(&h, g, k)?.is_none();
        if agrees && previous.as_ref().is_some_and(|p| isomorphic(p, &h)) {
            return Ok(CanonicalReport {
                machine: h,
                rounds: round,
                stable: true,
                final_depth: k,
            });
        }
        previous = Some(h);
    }
    Err(EquivError::NoConvergence { rounds: max_rounds })
}
