//! Characteristic samples: enough translation pairs for the learner to
//! onward and merge exactly as the canonical machine dictates.
//!
//! Everything is computed on the canonical form of the machine. Searches
//! over futures stop at `2·|states| + max output length + 2` symbols past
//! the string they extend; hitting that bound is an error.

use std::collections::VecDeque;

use thiserror::Error;

use crate::antichain::{left_quotient, product, valid_antichains, PrefixTree};
use crate::dataset::Dataset;
use crate::equivalence::{canonical_form, EquivError};
use crate::learner::ops::{survives, Evidence};
use crate::oracle::machine_oracle;
use crate::strings::{Str, StringSet, Symbol};
use crate::transducer::{Sdt, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("no {what} within {bound} symbols of {input}")]
    SearchBoundExceeded {
        what: &'static str,
        input: String,
        bound: usize,
    },
    #[error(transparent)]
    Canonical(#[from] EquivError),
}

pub fn search_bound(g: &Sdt) -> usize {
    2 * g.num_states() + g.max_output_len() + 2
}

#[derive(Debug, Clone)]
pub struct CharacteristicSample {
    pub n0: Dataset,
    pub n1: Dataset,
    pub n2: Dataset,
    /// Union of the three.
    pub sample: Dataset,
}

/// One member of `W`: a minimal access string or a one-symbol extension
/// of one.
struct Frontier {
    input: Str,
    state: StateId,
    /// State and symbol of the last step, `None` for the empty string.
    via: Option<(StateId, Symbol)>,
}

struct Canonical {
    machine: Sdt,
    access: Vec<Str>,
    /// Product of edge outputs along each minimal access string.
    reach: Vec<StringSet>,
    bound: usize,
}

impl Canonical {
    fn of(g: &Sdt) -> Result<Self, SampleError> {
        let machine = canonical_form(g)?;
        let access: Vec<Str> = machine
            .access_strings()
            .into_iter()
            .map(|a| a.expect("canonical machines are trim"))
            .collect();
        let reach = access
            .iter()
            .map(|x| machine.path_output(x).expect("access strings have runs"))
            .collect();
        let bound = search_bound(&machine);
        Ok(Canonical {
            machine,
            access,
            reach,
            bound,
        })
    }

    fn data(&self) -> Dataset {
        Dataset::new(
            self.machine.input_alphabet().clone(),
            self.machine.output_alphabet().clone(),
        )
    }

    fn render(&self, x: &Str) -> String {
        self.machine.input_alphabet().render(x)
    }

    fn hat(&self, x: &Str) -> Str {
        self.machine
            .least_completion(x)
            .expect("canonical machines are trim")
    }

    fn frontier(&self) -> Vec<Frontier> {
        let mut w: Vec<Frontier> = Vec::new();
        for q in self.machine.states() {
            if q == self.machine.initial() {
                w.push(Frontier {
                    input: Str::empty(),
                    state: q,
                    via: None,
                });
            }
            for (a, e) in self.machine.edges_from(q) {
                w.push(Frontier {
                    input: self.access[q].push(a),
                    state: e.target,
                    via: Some((q, a)),
                });
            }
        }
        w.sort_by(|p, q| p.input.cmp(&q.input));
        w
    }

    /// Accepted extensions of `x` in llex order, at most `bound` symbols
    /// longer.
    fn accepted_extensions(&self, x: &Str) -> Vec<Str> {
        let g = &self.machine;
        let Some(start) = g.run(x) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut queue = VecDeque::from([(Str::empty(), start)]);
        while let Some((w, q)) = queue.pop_front() {
            if g.is_accepting(q) {
                out.push(x.concat(&w));
            }
            if w.len() < self.bound {
                for (a, e) in g.edges_from(q) {
                    queue.push_back((w.push(a), e.target));
                }
            }
        }
        out
    }

    /// The llex-least `z` on which the futures of `p` and `q` differ.
    fn distinguishing_suffix(&self, p: StateId, q: StateId) -> Option<Str> {
        type Run = Option<(StateId, StringSet)>;
        let g = &self.machine;
        let start = |s| Some((s, StringSet::lambda()));
        let mut queue: VecDeque<(Str, Run, Run)> =
            VecDeque::from([(Str::empty(), start(p), start(q))]);
        let finish = |run: &Run| {
            run.as_ref()
                .and_then(|(s, out)| g.accept(*s).map(|acc| product(out, acc.as_set())))
        };
        while let Some((z, rp, rq)) = queue.pop_front() {
            if finish(&rp) != finish(&rq) {
                return Some(z);
            }
            if z.len() == self.bound {
                continue;
            }
            for a in g.input_alphabet().symbols() {
                let step = |run: &Run| {
                    let (s, out) = run.as_ref()?;
                    let e = g.edge(*s, a)?;
                    Some((e.target, product(out, e.output.as_set())))
                };
                let (np, nq) = (step(&rp), step(&rq));
                if np.is_some() || nq.is_some() {
                    queue.push_back((z.push(a), np, nq));
                }
            }
        }
        None
    }
}

fn least(set: &StringSet) -> &Str {
    set.least().expect("output sets are non-empty")
}

/// For each state's minimal access string `xᵢ`: the pair `⟨x̂ᵢ, ZX⟩` and one
/// witness per prefix of `X` that no valid antichain contains.
pub fn n0(g: &Sdt) -> Result<Dataset, SampleError> {
    n0_of(&Canonical::of(g)?)
}

fn n0_of(c: &Canonical) -> Result<Dataset, SampleError> {
    let mut data = c.data();
    for x in &c.access {
        let p = match x.truncate() {
            Some(parent) => c.machine.path_output(&parent).expect("parent has a run"),
            None => StringSet::lambda(),
        };
        let hat = c.hat(x);
        let tree = left_quotient(&p, &c.machine.translations(&hat));
        let big_x = least(&tree).clone();
        let z = least(&p).clone();
        data.insert(hat.clone(), z.concat(&big_x));
        let members: StringSet = valid_antichains(&tree)
            .expect("translation sets are non-empty")
            .into_iter()
            .flat_map(StringSet::into_set)
            .collect();
        let prefixes = PrefixTree::of(&tree);
        for k in 0..big_x.len() {
            let x0 = big_x.prefix(k);
            if members.contains(&x0) {
                continue;
            }
            let future = prefixes.residual(&x0);
            let witness = tree
                .iter()
                .find(|y| y.prefixes().all(|y0| prefixes.residual(&y0) != future));
            if let Some(y) = witness {
                data.insert(hat.clone(), z.concat(y));
            }
        }
    }
    Ok(data)
}

/// For each `x ∈ W` past the empty string: one llex-least pair ruling out
/// each valid antichain of `f(x̂)` greater than the edge output into `x`.
pub fn n1(g: &Sdt) -> Result<Dataset, SampleError> {
    n1_of(&Canonical::of(g)?)
}

fn n1_of(c: &Canonical) -> Result<Dataset, SampleError> {
    let oracle = machine_oracle(c.machine.clone());
    let mut data = c.data();
    for f in c.frontier() {
        let Some((r, a)) = f.via else { continue };
        let edge = c.machine.edge(r, a).expect("frontier edges exist");
        let base = &c.reach[r];
        let prefix = least(base);
        let hat = c.hat(&f.input);
        let tree = left_quotient(base, &c.machine.translations(&hat));
        let candidates = valid_antichains(&tree).expect("translation sets are non-empty");
        let position = candidates
            .iter()
            .position(|p| p == edge.output.as_set())
            .expect("edge outputs of an onward machine are valid");
        let futures = c.accepted_extensions(&f.input);
        for candidate in &candidates[position + 1..] {
            let mut found = false;
            'search: for y in &futures {
                let remainders = left_quotient(base, &c.machine.translations(y));
                for t in remainders.iter() {
                    let single = Evidence {
                        input: y.clone(),
                        remainders: StringSet::singleton(t.clone()),
                    };
                    if !survives(&oracle, prefix, candidate, &[single]).expect("unbudgeted") {
                        data.insert(y.clone(), prefix.concat(t));
                        found = true;
                        break 'search;
                    }
                }
                let whole = Evidence {
                    input: y.clone(),
                    remainders: remainders.clone(),
                };
                if !survives(&oracle, prefix, candidate, &[whole]).expect("unbudgeted") {
                    for t in remainders.iter() {
                        data.insert(y.clone(), prefix.concat(t));
                    }
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(SampleError::SearchBoundExceeded {
                    what: "pair ruling out an antichain",
                    input: c.render(&f.input),
                    bound: c.bound,
                });
            }
        }
    }
    Ok(data)
}

/// `f(x̂)` for each `x ∈ W`, pairs separating `x` from every state it does
/// not reach, and `N₂*` of every transition and `#`-transition.
pub fn n2(g: &Sdt) -> Result<Dataset, SampleError> {
    n2_of(&Canonical::of(g)?)
}

fn n2_of(c: &Canonical) -> Result<Dataset, SampleError> {
    let g = &c.machine;
    let mut data = c.data();
    for f in c.frontier() {
        let hat = c.hat(&f.input);
        for y in g.translations(&hat) {
            data.insert(hat.clone(), y);
        }
        let reach_x = g.path_output(&f.input).expect("frontier strings have runs");
        for r in g.states().filter(|&r| r != f.state) {
            let z = c.distinguishing_suffix(r, f.state).ok_or_else(|| {
                SampleError::SearchBoundExceeded {
                    what: "suffix separating two states",
                    input: c.render(&f.input),
                    bound: c.bound,
                }
            })?;
            let on_r = g.translate_from(r, &z).unwrap_or_default();
            let on_x = g.translate_from(f.state, &z).unwrap_or_default();
            if let Some(t) = on_r.iter().find(|t| !on_x.contains(t)) {
                data.insert(c.access[r].concat(&z), least(&c.reach[r]).concat(t));
            }
            if let Some(t) = on_x.iter().find(|t| !on_r.contains(t)) {
                data.insert(f.input.concat(&z), least(&reach_x).concat(t));
            };
        }
    }
    for (q, a, _) in g.transitions() {
        data.union_with(&n2_star(g, q, Some(a)));
    }
    for q in g.states().filter(|&q| g.is_accepting(q)) {
        data.union_with(&n2_star(g, q, None));
    }
    Ok(data)
}

/// For the transition leaving `q` on `symbol` (`None` for `#`): the llex-least
/// accepted input through it, once with each of its outputs, each time with
/// the llex-least translation.
pub fn n2_star(g: &Sdt, q: StateId, symbol: Option<Symbol>) -> Dataset {
    let mut data = Dataset::new(g.input_alphabet().clone(), g.output_alphabet().clone());
    let Some(Some(access)) = g.access_strings().into_iter().nth(q) else {
        return data;
    };
    let before = least(&g.path_output(&access).expect("access strings have runs")).clone();
    let (input, outputs, after) = match symbol {
        Some(a) => {
            let Some(e) = g.edge(q, a) else { return data };
            let Some(w) = g.least_accepted_suffix(e.target) else {
                return data;
            };
            let after = least(&g.translate_from(e.target, &w).expect("accepted")).clone();
            (access.push(a).concat(&w), e.output.as_set(), after)
        }
        None => {
            let Some(acc) = g.accept(q) else { return data };
            (access, acc.as_set(), Str::empty())
        }
    };
    for o in outputs.iter() {
        data.insert(input.clone(), before.concat(o).concat(&after));
    }
    data
}

pub fn characteristic_sample(g: &Sdt) -> Result<Dataset, SampleError> {
    Ok(sample_components(g)?.sample)
}

pub fn sample_components(g: &Sdt) -> Result<CharacteristicSample, SampleError> {
    let c = Canonical::of(g)?;
    let (n0, n1, n2) = (n0_of(&c)?, n1_of(&c)?, n2_of(&c)?);
    let mut sample = n0.clone();
    sample.union_with(&n1);
    sample.union_with(&n2);
    Ok(CharacteristicSample { n0, n1, n2, sample })
}
