//! Semi-deterministic transducers.
//!
//! An [`Sdt`] is input-deterministic: every `(state, symbol)` pair has at
//! most one outgoing edge. Each edge carries an [`OutputSet`], a finite
//! non-empty prefix code over the output alphabet. The `#`-transition of a
//! state is stored as its accept set; by convention it returns to the
//! initial state.

mod dot;
mod eval;
mod format;
mod random;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::strings::{Alphabet, Str, StringError, StringSet, Symbol};

pub use dot::to_dot;
pub use eval::{Path, Step, DEFAULT_PAIR_CAP};
pub use random::{random_sdt, RandomSdtParams};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SdtError {
    #[error("invalid transducer: {}", violations_summary(.0))]
    Invalid(Vec<Violation>),
    #[error("no path for input {0}")]
    UndefinedPath(String),
    #[error("pair enumeration exceeded the cap of {cap} pairs")]
    PairCapExceeded { cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    String(#[from] StringError),
}

fn violations_summary(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// One broken invariant, naming the offending state or transition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("machine has no states")]
    NoStates,
    #[error("no initial state")]
    NoInitial,
    #[error("state {state}: two transitions on {symbol:?} (determinism)")]
    Nondeterministic { state: String, symbol: char },
    #[error("state {state}: more than one #-transition")]
    DuplicateAccept { state: String },
    #[error("state {state} on {label}: comparable outputs {first} and {second}")]
    ComparableOutputs {
        state: String,
        label: String,
        first: String,
        second: String,
    },
    #[error("state {state} on {label}: empty output set")]
    EmptyOutput { state: String, label: String },
    #[error("state {state}: string {text} is not over the {which} alphabet")]
    ForeignString {
        state: String,
        which: &'static str,
        text: String,
    },
    #[error("state {state} is unreachable from the initial state")]
    Unreachable { state: String },
    #[error("state {state} cannot reach an accepting state")]
    NotCoReachable { state: String },
}

/// A finite, non-empty antichain of output strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutputSet(StringSet);

impl OutputSet {
    /// Fails with the offending pair when `set` is empty or not prefix-free.
    pub fn new(set: StringSet) -> Result<Self, (Str, Str)> {
        if set.is_empty() {
            return Err((Str::empty(), Str::empty()));
        }
        if let Some((x, y)) = set.comparable_pair() {
            return Err((x.clone(), y.clone()));
        }
        Ok(OutputSet(set))
    }

    pub fn lambda() -> Self {
        OutputSet(StringSet::lambda())
    }

    pub fn as_set(&self) -> &StringSet {
        &self.0
    }

    pub fn into_set(self) -> StringSet {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn least(&self) -> &Str {
        self.0.least().expect("output sets are non-empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = &Str> {
        self.0.iter()
    }

    /// The unique member that prefixes `s`.
    pub fn prefix_member_of(&self, s: &Str) -> Option<&Str> {
        self.0.prefix_member_of(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub target: StateId,
    pub output: OutputSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sdt {
    input: Alphabet,
    output: Alphabet,
    names: Vec<String>,
    initial: StateId,
    edges: Vec<BTreeMap<Symbol, Edge>>,
    accepts: Vec<Option<OutputSet>>,
}

impl Sdt {
    pub fn builder(input: Alphabet, output: Alphabet) -> SdtBuilder {
        SdtBuilder::new(input, output)
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edge(&self, q: StateId, symbol: Symbol) -> Option<&Edge> {
        self.edges[q].get(&symbol)
    }

    pub fn edges_from(&self, q: StateId) -> impl Iterator<Item = (Symbol, &Edge)> {
        self.edges[q].iter().map(|(s, e)| (*s, e))
    }

    /// Every non-# transition as `(source, symbol, edge)`.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, &Edge)> {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(q, m)| m.iter().map(move |(s, e)| (q, *s, e)))
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(BTreeMap::len).sum()
    }

    pub fn accept(&self, q: StateId) -> Option<&OutputSet> {
        self.accepts[q].as_ref()
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepts[q].is_some()
    }

    /// Total number of output symbols over all edge and accept sets.
    pub fn total_output_symbols(&self) -> usize {
        let edges: usize = self
            .transitions()
            .map(|(_, _, e)| e.output.iter().map(Str::len).sum::<usize>())
            .sum();
        let accepts: usize = self
            .accepts
            .iter()
            .flatten()
            .map(|o| o.iter().map(Str::len).sum::<usize>())
            .sum();
        edges + accepts
    }

    /// Longest string in any output set.
    pub fn max_output_len(&self) -> usize {
        self.transitions()
            .map(|(_, _, e)| e.output.as_set().max_len())
            .chain(self.accepts.iter().flatten().map(|o| o.as_set().max_len()))
            .max()
            .unwrap_or(0)
    }

    /// The llex-least input reaching each state, `None` if unreachable.
    pub fn access_strings(&self) -> Vec<Option<Str>> {
        let mut access: Vec<Option<Str>> = vec![None; self.num_states()];
        access[self.initial] = Some(Str::empty());
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            let base = access[q]
                .clone()
                .expect("queued states have access strings");
            for (symbol, edge) in self.edges_from(q) {
                if access[edge.target].is_none() {
                    access[edge.target] = Some(base.push(symbol));
                    queue.push_back(edge.target);
                }
            }
        }
        access
    }

    /// States from which some accepting state is reachable.
    pub fn co_reachable(&self) -> Vec<bool> {
        let mut live: Vec<bool> = self.accepts.iter().map(Option::is_some).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for q in self.states() {
                if !live[q] && self.edges_from(q).any(|(_, e)| live[e.target]) {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        live
    }

    /// Checks trimness; the other invariants are enforced at construction.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        let access = self.access_strings();
        let live = self.co_reachable();
        for q in self.states() {
            if access[q].is_none() {
                violations.push(Violation::Unreachable {
                    state: self.names[q].clone(),
                });
            } else if !live[q] {
                violations.push(Violation::NotCoReachable {
                    state: self.names[q].clone(),
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// `q_` followed by the llex-least access string, `q_λ` for the initial
    /// state; `None` for unreachable states.
    pub fn access_names(&self) -> Vec<Option<String>> {
        self.access_strings()
            .into_iter()
            .map(|a| a.map(|s| access_name(&self.input, &s)))
            .collect()
    }

    /// Copy with unreachable states removed, states numbered in llex order
    /// of their access strings and named after them.
    pub fn normalized(&self) -> Sdt {
        let access = self.access_strings();
        let mut order: Vec<StateId> = self.states().filter(|&q| access[q].is_some()).collect();
        order.sort_by(|&a, &b| access[a].cmp(&access[b]));
        let mut builder = SdtBuilder::new(self.input.clone(), self.output.clone());
        let mut renum = vec![usize::MAX; self.num_states()];
        for &q in &order {
            let name = access_name(&self.input, access[q].as_ref().expect("reachable"));
            renum[q] = builder.add_state(name);
        }
        builder.set_initial(renum[self.initial]);
        for &q in &order {
            for (symbol, edge) in self.edges_from(q) {
                builder.add_transition(
                    renum[q],
                    symbol,
                    renum[edge.target],
                    edge.output.as_set().clone(),
                );
            }
            if let Some(acc) = self.accept(q) {
                builder.add_accept(renum[q], acc.as_set().clone());
            }
        }
        builder.build().expect("renaming preserves validity")
    }
}

/// Display name of the state reached by `access`.
pub fn access_name(input: &Alphabet, access: &Str) -> String {
    if access.is_empty() {
        "q_λ".to_string()
    } else {
        format!("q_{}", input.render(access))
    }
}

impl fmt::Display for Sdt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Incremental construction. Structural invariants are checked by
/// [`SdtBuilder::build`]; trimness is checked by [`Sdt::validate`].
#[derive(Debug, Clone)]
pub struct SdtBuilder {
    input: Alphabet,
    output: Alphabet,
    names: Vec<String>,
    initial: Option<StateId>,
    transitions: Vec<(StateId, Symbol, StateId, StringSet)>,
    accepts: Vec<(StateId, StringSet)>,
}

impl SdtBuilder {
    pub fn new(input: Alphabet, output: Alphabet) -> Self {
        SdtBuilder {
            input,
            output,
            names: Vec::new(),
            initial: None,
            transitions: Vec::new(),
            accepts: Vec::new(),
        }
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn set_initial(&mut self, q: StateId) -> &mut Self {
        self.initial = Some(q);
        self
    }

    pub fn add_transition(
        &mut self,
        from: StateId,
        symbol: Symbol,
        to: StateId,
        output: StringSet,
    ) -> &mut Self {
        self.transitions.push((from, symbol, to, output));
        self
    }

    pub fn add_accept(&mut self, q: StateId, output: StringSet) -> &mut Self {
        self.accepts.push((q, output));
        self
    }

    fn check_output(
        &self,
        state: StateId,
        label: String,
        set: &StringSet,
        violations: &mut Vec<Violation>,
    ) -> Option<OutputSet> {
        let name = self.names[state].clone();
        if let Some(bad) = set.iter().find(|s| !self.output.contains_str(s)) {
            violations.push(Violation::ForeignString {
                state: name,
                which: "output",
                text: format!("{:?}", bad.symbols()),
            });
            return None;
        }
        match OutputSet::new(set.clone()) {
            Ok(o) => Some(o),
            Err(_) if set.is_empty() => {
                violations.push(Violation::EmptyOutput { state: name, label });
                None
            }
            Err((x, y)) => {
                violations.push(Violation::ComparableOutputs {
                    state: name,
                    label,
                    first: self.output.render(&x),
                    second: self.output.render(&y),
                });
                None
            }
        }
    }

    pub fn build(&self) -> Result<Sdt, SdtError> {
        let mut violations = Vec::new();
        if self.names.is_empty() {
            violations.push(Violation::NoStates);
        }
        let initial = match self.initial {
            Some(q) if q < self.names.len() => Some(q),
            _ => {
                violations.push(Violation::NoInitial);
                None
            }
        };
        let n = self.names.len();
        let mut edges: Vec<BTreeMap<Symbol, Edge>> = vec![BTreeMap::new(); n];
        for (from, symbol, to, set) in &self.transitions {
            let (from, to) = (*from, *to);
            assert!(
                from < n && to < n,
                "transition references an unknown state id"
            );
            if usize::from(*symbol) >= self.input.len() {
                violations.push(Violation::ForeignString {
                    state: self.names[from].clone(),
                    which: "input",
                    text: format!("[{symbol}]"),
                });
                continue;
            }
            let c = self.input.char_of(*symbol);
            if edges[from].contains_key(symbol) {
                violations.push(Violation::Nondeterministic {
                    state: self.names[from].clone(),
                    symbol: c,
                });
                continue;
            }
            if let Some(output) = self.check_output(from, c.to_string(), set, &mut violations) {
                edges[from].insert(*symbol, Edge { target: to, output });
            }
        }
        let mut accepts: Vec<Option<OutputSet>> = vec![None; n];
        for (q, set) in &self.accepts {
            assert!(*q < n, "accept references an unknown state id");
            if accepts[*q].is_some() {
                violations.push(Violation::DuplicateAccept {
                    state: self.names[*q].clone(),
                });
                continue;
            }
            accepts[*q] = self.check_output(*q, "#".to_string(), set, &mut violations);
        }
        if !violations.is_empty() {
            return Err(SdtError::Invalid(violations));
        }
        Ok(Sdt {
            input: self.input.clone(),
            output: self.output.clone(),
            names: self.names.clone(),
            initial: initial.expect("checked above"),
            edges,
            accepts,
        })
    }
}
