//! Learning an SDT from translation pairs and translation queries.
//!
//! The learner builds the tree transducer of the data, then walks its
//! states in llex order of access string. Each state whose parent is fixed
//! ("red") is onwarded, moving the largest output antichain shared by all
//! of its futures onto its incoming edge, and then merged into the first
//! red state whose future agrees with it under queries. A state that
//! merges nowhere becomes red itself.

mod hypothesis;
pub(crate) mod ops;

use thiserror::Error;

use crate::dataset::Dataset;
use crate::oracle::{Oracle, OracleError, OracleStats};
use crate::strings::{Str, StringSet};
use crate::transducer::{Sdt, SdtError};

pub use hypothesis::{Hypothesis, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error("the dataset is empty")]
    EmptyDataset,
    #[error("input {input} has comparable outputs {first} and {second}")]
    InconsistentData {
        input: String,
        first: String,
        second: String,
    },
    #[error("folding state {state} would need two output sets on one transition")]
    FoldConflict { state: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("learned machine is invalid: {0}")]
    Invalid(#[from] SdtError),
}

/// The tree transducer recognizing exactly the pairs of `data`.
pub fn initial_transducer(data: &Dataset) -> Result<Sdt, LearnError> {
    Hypothesis::initial(data)?.to_sdt()
}

/// COMPARE: for every `⟨x, Z·R⟩` and `⟨x, W·S⟩` in `data`, both `[x, W·R]`
/// and `[x, Z·S]` hold.
pub fn compare<O: Oracle + ?Sized>(
    x: &Str,
    z: &Str,
    w: &Str,
    data: &Dataset,
    oracle: &O,
) -> Result<bool, OracleError> {
    match data.outputs(x) {
        Some(outputs) => ops::compare_outputs(oracle, x, outputs, z, w),
        None => Ok(true),
    }
}

/// VAC: candidate valid antichains of the outputs of `x` that extend
/// `least_prefix`, with that prefix removed.
pub fn vac_candidates<O: Oracle + ?Sized>(
    data: &Dataset,
    x: &Str,
    least_prefix: &Str,
    oracle: &O,
) -> Result<Vec<StringSet>, OracleError> {
    let tree: StringSet = data
        .outputs(x)
        .into_iter()
        .flatten()
        .filter_map(|y| y.strip_prefix(least_prefix))
        .collect();
    ops::vac_from(oracle, x, least_prefix, &tree)
}

/// TESTVPS: the greatest of `candidates` that splits every output below
/// `x` extending `least_prefix` in a way that survives all member swaps.
pub fn test_vps<O: Oracle + ?Sized>(
    x: &Str,
    least_prefix: &Str,
    candidates: &[StringSet],
    data: &Dataset,
    oracle: &O,
) -> Result<StringSet, OracleError> {
    let evidence = ops::evidence_below(data, x, least_prefix);
    ops::test_vps_from(oracle, least_prefix, candidates, &evidence)
}

/// Step-by-step access to the learning loop.
pub struct Learner<'a, O: Oracle + ?Sized> {
    data: &'a Dataset,
    oracle: &'a O,
    hypothesis: Hypothesis,
    merges: usize,
}

impl<'a, O: Oracle + ?Sized> Learner<'a, O> {
    pub fn new(data: &'a Dataset, oracle: &'a O) -> Result<Self, LearnError> {
        Ok(Learner {
            data,
            oracle,
            hypothesis: Hypothesis::initial(data)?,
            merges: 0,
        })
    }

    pub fn hypothesis(&self) -> &Hypothesis {
        &self.hypothesis
    }

    /// The llex-least non-red state whose parent is red.
    pub fn next_blue(&self) -> Option<NodeId> {
        self.hypothesis.blue().first().copied()
    }

    pub fn onward(&mut self, x: NodeId) -> Result<StringSet, LearnError> {
        self.hypothesis.onward(x, self.oracle)
    }

    pub fn future_agrees(&self, r: NodeId, x: NodeId) -> Result<bool, LearnError> {
        self.hypothesis.future_agrees(r, x, self.data, self.oracle)
    }

    /// MERGE: folds `x` into red `r` when their futures agree. Returns
    /// whether the merge happened; on a fold conflict the hypothesis is
    /// unchanged and the conflict is reported.
    pub fn merge_states(&mut self, r: NodeId, x: NodeId) -> Result<bool, LearnError> {
        if !self.future_agrees(r, x)? {
            return Ok(false);
        }
        self.hypothesis.fold_into(r, x)?;
        self.merges += 1;
        Ok(true)
    }

    pub fn promote(&mut self, x: NodeId) {
        self.hypothesis.promote(x);
    }

    /// Processes one blue state; `false` once none are left.
    pub fn step(&mut self) -> Result<bool, LearnError> {
        let Some(x) = self.next_blue() else {
            return Ok(false);
        };
        self.onward(x)?;
        for r in self.hypothesis.red().to_vec() {
            match self.merge_states(r, x) {
                Ok(true) => return Ok(true),
                Ok(false) | Err(LearnError::FoldConflict { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        self.promote(x);
        Ok(true)
    }

    pub fn run(mut self) -> Result<LearnReport, LearnError> {
        while self.step()? {}
        let machine = self.hypothesis.to_sdt()?;
        if let Err(v) = machine.validate() {
            return Err(LearnError::Invalid(SdtError::Invalid(v)));
        }
        Ok(LearnReport {
            machine,
            merges: self.merges,
            oracle: self.oracle.stats(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct LearnReport {
    pub machine: Sdt,
    pub merges: usize,
    pub oracle: OracleStats,
}

pub fn learn<O: Oracle + ?Sized>(data: &Dataset, oracle: &O) -> Result<Sdt, LearnError> {
    learn_with_report(data, oracle).map(|r| r.machine)
}

pub fn learn_with_report<O: Oracle + ?Sized>(
    data: &Dataset,
    oracle: &O,
) -> Result<LearnReport, LearnError> {
    Learner::new(data, oracle)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g0, g1, g2, s12};
    use crate::oracle::{budgeted, machine_oracle};
    use crate::strings::Alphabet;
    use crate::transducer::DEFAULT_PAIR_CAP;

    fn unary() -> (Alphabet, Alphabet) {
        (
            Alphabet::from_chars("a").unwrap(),
            Alphabet::from_chars("AB").unwrap(),
        )
    }

    fn data(text: &str) -> Dataset {
        let (i, o) = unary();
        Dataset::parse(text, &i, &o).unwrap()
    }

    fn istr(t: &str) -> Str {
        unary().0.parse_str(t).unwrap()
    }

    fn ostr(t: &str) -> Str {
        unary().1.parse_str(t).unwrap()
    }

    fn oset(t: &str) -> StringSet {
        unary().1.parse_set(t).unwrap()
    }

    #[test]
    fn initial_tree() {
        let g = initial_transducer(&data("a\tA\n")).unwrap();
        assert_eq!(g.num_states(), 2);
        assert_eq!(g.edge(0, 0).unwrap().output.as_set(), &StringSet::lambda());
        assert_eq!(g.accept(1).unwrap().as_set(), &oset("A"));
        assert!(g.accept(0).is_none());

        let g = initial_transducer(&data("-\t-\n")).unwrap();
        assert_eq!(g.num_states(), 1);
        assert_eq!(g.accept(0).unwrap().as_set(), &StringSet::lambda());

        let d = data("a\tA\na\tB\naa\tAA\n");
        let g = initial_transducer(&d).unwrap();
        assert_eq!(g.accept(1).unwrap().as_set(), &oset("A,B"));
        assert_eq!(g.accept(2).unwrap().as_set(), &oset("AA"));
        for x in ["", "a", "aa", "aaa"] {
            assert_eq!(g.translations(&istr(x)), d.translations(&istr(x)));
        }
        assert_eq!(initial_transducer(&data("")), Err(LearnError::EmptyDataset));
    }

    #[test]
    fn compare_cases() {
        let o = machine_oracle(g1());
        let d = data("aa\tAA\naa\tBA\n");
        let x = istr("aa");
        assert!(compare(&x, &ostr("A"), &ostr("A"), &d, &o).unwrap());
        assert_eq!(o.stats().total(), 0);
        assert!(compare(&x, &ostr("A"), &ostr("B"), &d, &o).unwrap());
        // Swapping `A` for `λ` asks whether `A` alone translates `aa`.
        assert!(!compare(&x, &ostr("A"), &ostr(""), &d, &o).unwrap());
        assert!(compare(&istr("a"), &ostr("A"), &ostr("B"), &d, &o).unwrap());
    }

    #[test]
    fn vac_of_two_letters() {
        let o = machine_oracle(g0());
        let d = data("a\tA\na\tB\n");
        let vac = vac_candidates(&d, &istr("a"), &Str::empty(), &o).unwrap();
        assert_eq!(vac, vec![StringSet::lambda(), oset("A,B")]);
    }

    #[test]
    fn vac_of_singleton_lists_its_prefixes() {
        let o = machine_oracle(g1());
        let d = data("aa\tAA\n");
        let vac = vac_candidates(&d, &istr("aa"), &Str::empty(), &o).unwrap();
        assert_eq!(vac, vec![oset("-"), oset("A"), oset("AA")]);
    }

    /// A machine whose only translations of `aaaa` are the twelve strings
    /// of the worked example, written over `{A, B}`.
    fn s12_machine() -> (Sdt, Dataset) {
        let (i, o) = unary();
        let upper = |s: &Str| s.clone();
        let outs: StringSet = s12().iter().map(upper).collect();
        let mut b = Sdt::builder(i.clone(), o.clone());
        let q0 = b.add_state("q0");
        let q1 = b.add_state("q1");
        b.set_initial(q0)
            .add_transition(q0, 0, q1, StringSet::lambda())
            .add_accept(q1, outs.clone());
        let g = b.build().unwrap();
        let mut d = Dataset::new(i, o);
        for y in outs.iter() {
            d.insert(istr("a"), y.clone());
        }
        (g, d)
    }

    #[test]
    fn vac_of_worked_example() {
        let (g, d) = s12_machine();
        let o = machine_oracle(g);
        let vac = vac_candidates(&d, &istr("a"), &Str::empty(), &o).unwrap();
        let expect: Vec<StringSet> = crate::antichain::valid_antichains(&s12()).unwrap();
        assert_eq!(vac, expect);
    }

    #[test]
    fn test_vps_keeps_lambda() {
        let o = machine_oracle(g1());
        let d = data("a\tA\n");
        let p = test_vps(&istr("a"), &Str::empty(), &[StringSet::lambda()], &d, &o).unwrap();
        assert!(p.is_lambda());
    }

    #[test]
    fn test_vps_rejects_an_antichain_the_future_breaks() {
        // Every non-empty input of G1 starts its output with A or B, but the
        // empty input outputs λ, so {A, B} cannot be advanced above it.
        let o = machine_oracle(g1());
        let d = data("-\t-\na\tA\na\tB\naa\tAA\naa\tBA\n");
        let candidates = vec![StringSet::lambda(), oset("A,B")];
        let p = test_vps(&istr(""), &Str::empty(), &candidates, &d, &o).unwrap();
        assert!(p.is_lambda());
        let p = test_vps(&istr("a"), &Str::empty(), &candidates, &d, &o).unwrap();
        assert_eq!(p, oset("A,B"));
    }

    #[test]
    fn onward_pushes_g1_edge_forward() {
        let g = g1();
        let d = g.enumerate_pairs(2, DEFAULT_PAIR_CAP).unwrap();
        let o = machine_oracle(g);
        let mut learner = Learner::new(&d, &o).unwrap();
        let x = learner.next_blue().unwrap();
        assert_eq!(learner.hypothesis().access(x), istr("a"));
        assert_eq!(learner.onward(x).unwrap(), oset("A,B"));
        let h = learner.hypothesis().to_sdt().unwrap();
        let qa = h.run(&istr("a")).unwrap();
        assert_eq!(h.edge(0, 0).unwrap().output.as_set(), &oset("A,B"));
        assert_eq!(h.accept(qa).unwrap().as_set(), &StringSet::lambda());
        for (x, y) in d.iter() {
            assert!(h.contains_translation(x, y));
        }
    }

    #[test]
    fn future_separates_g1_states() {
        let g = g1();
        let d = g.enumerate_pairs(3, DEFAULT_PAIR_CAP).unwrap();
        let o = machine_oracle(g);
        let mut learner = Learner::new(&d, &o).unwrap();
        let x = learner.next_blue().unwrap();
        learner.onward(x).unwrap();
        let root = learner.hypothesis().root();
        assert!(!learner.future_agrees(root, x).unwrap());
        let before = learner.hypothesis().to_sdt().unwrap();
        assert!(!learner.merge_states(root, x).unwrap());
        assert_eq!(learner.hypothesis().to_sdt().unwrap(), before);
    }

    #[test]
    fn learns_fixtures() {
        let g = g0();
        let d = g.enumerate_pairs(3, DEFAULT_PAIR_CAP).unwrap();
        let h = learn(&d, &machine_oracle(g.clone())).unwrap();
        assert_eq!(h.num_states(), 1);
        assert_eq!(h.edge(0, 0).unwrap().output.as_set(), &oset("A,B"));

        for (g, k, states) in [(g1(), 4, 2), (g2(), 5, 3)] {
            let d = g.enumerate_pairs(k, DEFAULT_PAIR_CAP).unwrap();
            let h = learn(&d, &machine_oracle(g.clone())).unwrap();
            assert_eq!(h.num_states(), states);
            assert_eq!(h, g);
        }
    }

    #[test]
    fn budget_exhaustion_aborts() {
        let g = g1();
        let d = g.enumerate_pairs(3, DEFAULT_PAIR_CAP).unwrap();
        let o = budgeted(machine_oracle(g), 0);
        assert!(matches!(
            learn(&d, &o),
            Err(LearnError::Oracle(OracleError::BudgetExhausted {
                budget: 0
            }))
        ));
    }
}
