use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Sdt, SdtBuilder};
use crate::strings::{Alphabet, Str, StringSet, Symbol};

#[derive(Debug, Clone)]
pub struct RandomSdtParams {
    pub n_states: usize,
    pub input: Alphabet,
    pub output: Alphabet,
    pub max_out_len: usize,
    pub max_out_set: usize,
    pub seed: u64,
    /// Chance that a free `(state, symbol)` slot gets an extra edge.
    pub edge_prob: f64,
    /// Chance that a state accepts, before trimming forces more.
    pub accept_prob: f64,
}

impl RandomSdtParams {
    pub fn new(n_states: usize, input: Alphabet, output: Alphabet, seed: u64) -> Self {
        RandomSdtParams {
            n_states,
            input,
            output,
            max_out_len: 2,
            max_out_set: 2,
            seed,
            edge_prob: 0.4,
            accept_prob: 0.4,
        }
    }
}

fn random_string(rng: &mut ChaCha8Rng, alpha: &Alphabet, max_len: usize) -> Str {
    let len = rng.random_range(0..=max_len);
    let symbols: Vec<Symbol> = (0..len)
        .map(|_| rng.random_range(0..alpha.len()) as Symbol)
        .collect();
    Str(symbols)
}

/// A prefix code of at most `max_size` strings of length at most `max_len`.
pub(crate) fn random_antichain(
    rng: &mut ChaCha8Rng,
    alpha: &Alphabet,
    max_len: usize,
    max_size: usize,
) -> StringSet {
    let target = rng.random_range(1..=max_size.max(1));
    let mut set = StringSet::new();
    for _ in 0..8 * target {
        if set.len() == target {
            break;
        }
        let s = random_string(rng, alpha, max_len);
        if set.iter().all(|t| !t.comparable(&s)) {
            set.insert(s);
        }
    }
    set
}

/// A random trim machine, fully determined by `params`.
///
/// State 0 is initial. A random spanning tree makes every state reachable,
/// extra edges are added at random, and any state that cannot reach an
/// accepting state is made accepting.
pub fn random_sdt(params: &RandomSdtParams) -> Sdt {
    assert!(params.n_states >= 1, "need at least one state");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n_states;
    let k = params.input.len();
    let mut targets: Vec<Vec<Option<usize>>> = vec![vec![None; k]; n];
    for q in 1..n {
        let mut slots: Vec<(usize, usize)> = (0..q)
            .flat_map(|p| (0..k).map(move |a| (p, a)))
            .filter(|&(p, a)| targets[p][a].is_none())
            .collect();
        slots.shuffle(&mut rng);
        let (p, a) = slots[0];
        targets[p][a] = Some(q);
    }
    for row in targets.iter_mut() {
        for slot in row.iter_mut() {
            if slot.is_none() && rng.random_bool(params.edge_prob) {
                *slot = Some(rng.random_range(0..n));
            }
        }
    }
    let mut accepting: Vec<bool> = (0..n)
        .map(|_| rng.random_bool(params.accept_prob))
        .collect();
    // Reverse topological fix-up: a state with no accepting future accepts.
    loop {
        let mut live = accepting.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if !live[q] && targets[q].iter().flatten().any(|&t| live[t]) {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        match (0..n).rev().find(|&q| !live[q]) {
            Some(q) => accepting[q] = true,
            None => break,
        }
    }
    let mut b = SdtBuilder::new(params.input.clone(), params.output.clone());
    for q in 0..n {
        b.add_state(format!("s{q}"));
    }
    b.set_initial(0);
    for q in 0..n {
        for a in 0..k {
            if let Some(t) = targets[q][a] {
                let out = random_antichain(
                    &mut rng,
                    &params.output,
                    params.max_out_len,
                    params.max_out_set,
                );
                b.add_transition(q, a as Symbol, t, out);
            }
        }
    }
    for q in 0..n {
        if accepting[q] {
            let out = random_antichain(
                &mut rng,
                &params.output,
                params.max_out_len,
                params.max_out_set,
            );
            b.add_accept(q, out);
        }
    }
    b.build()
        .expect("random outputs are prefix codes")
        .normalized()
}
