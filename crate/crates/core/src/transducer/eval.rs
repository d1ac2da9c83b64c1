use std::collections::VecDeque;

use super::{Sdt, SdtError, StateId};
use crate::antichain::product;
use crate::dataset::Dataset;
use crate::strings::{Str, StringSet, Symbol};

pub const DEFAULT_PAIR_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Edge {
        from: StateId,
        symbol: Symbol,
        to: StateId,
    },
    Accept {
        state: StateId,
    },
}

/// The unique run on an input, optionally ending with the `#`-transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub steps: Vec<Step>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self.steps.last(), Some(Step::Accept { .. }))
    }
}

impl Sdt {
    /// The state `q_x` reached by reading `x`.
    pub fn run_from(&self, start: StateId, x: &Str) -> Option<StateId> {
        x.symbols()
            .iter()
            .try_fold(start, |q, &a| self.edge(q, a).map(|e| e.target))
    }

    pub fn run(&self, x: &Str) -> Option<StateId> {
        self.run_from(self.initial, x)
    }

    pub fn path_of(&self, x: &Str) -> Option<Path> {
        let mut steps = Vec::with_capacity(x.len() + 1);
        let mut q = self.initial;
        for &a in x.symbols() {
            let e = self.edge(q, a)?;
            steps.push(Step::Edge {
                from: q,
                symbol: a,
                to: e.target,
            });
            q = e.target;
        }
        if self.is_accepting(q) {
            steps.push(Step::Accept { state: q });
        }
        Some(Path { steps })
    }

    /// Product of the edge outputs along the run on `x`, ignoring `#`.
    pub fn path_output(&self, x: &Str) -> Result<StringSet, SdtError> {
        self.path_output_from(self.initial, x)
            .map(|(_, out)| out)
            .ok_or_else(|| SdtError::UndefinedPath(format!("{:?}", x.symbols())))
    }

    /// The end state and edge-output product of reading `z` from `start`.
    pub fn path_output_from(&self, start: StateId, z: &Str) -> Option<(StateId, StringSet)> {
        let mut q = start;
        let mut out = StringSet::lambda();
        for &a in z.symbols() {
            let e = self.edge(q, a)?;
            out = product(&out, e.output.as_set());
            q = e.target;
        }
        Some((q, out))
    }

    pub fn translate(&self, x: &Str) -> Option<StringSet> {
        self.translate_from(self.initial, x)
    }

    /// Outputs of reading `z` from `start` and then taking `#`.
    pub fn translate_from(&self, start: StateId, z: &Str) -> Option<StringSet> {
        let (q, out) = self.path_output_from(start, z)?;
        let acc = self.accept(q)?;
        Some(product(&out, acc.as_set()))
    }

    pub fn in_domain(&self, x: &Str) -> bool {
        self.run(x).is_some_and(|q| self.is_accepting(q))
    }

    /// Greedy matching: each output set is a prefix code, so at most one
    /// member can start the unread part of `y`.
    pub fn contains_translation(&self, x: &Str, y: &Str) -> bool {
        self.contains_translation_from(self.initial, x, y)
    }

    pub fn contains_translation_from(&self, start: StateId, x: &Str, y: &Str) -> bool {
        let ys = y.symbols();
        let mut pos = 0;
        let mut q = start;
        let consume = |set: &super::OutputSet, pos: &mut usize| -> bool {
            let rest = Str::from_symbols(&ys[*pos..]);
            match set.prefix_member_of(&rest) {
                Some(m) => {
                    *pos += m.len();
                    true
                }
                None => false,
            }
        };
        for &a in x.symbols() {
            let Some(e) = self.edge(q, a) else {
                return false;
            };
            if !consume(&e.output, &mut pos) {
                return false;
            }
            q = e.target;
        }
        match self.accept(q) {
            Some(acc) => consume(acc, &mut pos) && pos == ys.len(),
            None => false,
        }
    }

    /// The llex-least accepted extension of `x`.
    pub fn least_completion(&self, x: &Str) -> Option<Str> {
        let start = self.run(x)?;
        self.least_accepted_suffix(start).map(|w| x.concat(&w))
    }

    /// The llex-least `w` such that `w` leads from `q` to an accepting state.
    pub fn least_accepted_suffix(&self, q: StateId) -> Option<Str> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([(q, Str::empty())]);
        seen[q] = true;
        while let Some((p, w)) = queue.pop_front() {
            if self.is_accepting(p) {
                return Some(w);
            }
            for (a, e) in self.edges_from(p) {
                if !seen[e.target] {
                    seen[e.target] = true;
                    queue.push_back((e.target, w.push(a)));
                }
            }
        }
        None
    }

    /// Length of the shortest accepted suffix from each state.
    fn distance_to_accept(&self) -> Vec<Option<usize>> {
        let mut dist: Vec<Option<usize>> = self
            .states()
            .map(|q| self.is_accepting(q).then_some(0))
            .collect();
        let mut changed = true;
        while changed {
            changed = false;
            for q in self.states() {
                let best = self
                    .edges_from(q)
                    .filter_map(|(_, e)| dist[e.target].map(|d| d + 1))
                    .min();
                if let Some(b) = best {
                    if dist[q].is_none_or(|d| b < d) {
                        dist[q] = Some(b);
                        changed = true;
                    }
                }
            }
        }
        dist
    }

    /// All pairs with input length at most `max_len`, failing once more than
    /// `cap` pairs would be produced.
    pub fn enumerate_pairs(&self, max_len: usize, cap: usize) -> Result<Dataset, SdtError> {
        let dist = self.distance_to_accept();
        let mut data = Dataset::new(self.input.clone(), self.output.clone());
        let mut stack = vec![(Str::empty(), self.initial, StringSet::lambda())];
        while let Some((x, q, out)) = stack.pop() {
            let remaining = max_len - x.len();
            if dist[q].is_none_or(|d| d > remaining) {
                continue;
            }
            if out.len() > cap {
                return Err(SdtError::PairCapExceeded { cap });
            }
            if let Some(acc) = self.accept(q) {
                if data.len() + out.len() * acc.len() > cap {
                    return Err(SdtError::PairCapExceeded { cap });
                }
                for y in product(&out, acc.as_set()) {
                    data.insert(x.clone(), y);
                }
            }
            if remaining > 0 {
                for (a, e) in self.edges_from(q) {
                    stack.push((x.push(a), e.target, product(&out, e.output.as_set())));
                }
            }
        }
        Ok(data)
    }

    /// Every translation pair of `x` as an owned set, `{}` outside the domain.
    pub fn translations(&self, x: &Str) -> StringSet {
        self.translate(x).unwrap_or_default()
    }
}
