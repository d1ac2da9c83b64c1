//! Translation queries `[x, y]` and domain queries `DK(x)`.

use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::strings::Str;
use crate::transducer::Sdt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("query budget of {budget} distinct questions exhausted")]
    BudgetExhausted { budget: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub translation_queries: usize,
    pub domain_queries: usize,
    pub cache_hits: usize,
}

impl OracleStats {
    pub fn total(&self) -> usize {
        self.translation_queries + self.domain_queries
    }
}

/// Answers must be deterministic. Implementations are shared by reference
/// and may be called from several threads.
pub trait Oracle: Sync {
    /// Is `y` a translation of `x`?
    fn query(&self, x: &Str, y: &Str) -> Result<bool, OracleError>;
    /// Is `x` in the input language?
    fn dk(&self, x: &Str) -> Result<bool, OracleError>;
    fn stats(&self) -> OracleStats;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Question {
    Translation(Str, Str),
    Domain(Str),
}

#[derive(Debug, Default)]
struct Memo {
    answers: HashMap<Question, bool>,
    stats: OracleStats,
}

impl Memo {
    fn lookup(&mut self, q: &Question) -> Option<bool> {
        let hit = self.answers.get(q).copied();
        if hit.is_some() {
            self.stats.cache_hits += 1;
        }
        hit
    }

    fn record(&mut self, q: Question, answer: bool) {
        match q {
            Question::Translation(..) => self.stats.translation_queries += 1,
            Question::Domain(_) => self.stats.domain_queries += 1,
        }
        self.answers.insert(q, answer);
    }
}

/// Answers from a hidden target machine, memoized.
#[derive(Debug)]
pub struct MachineOracle {
    target: Sdt,
    memo: Mutex<Memo>,
}

pub fn machine_oracle(target: Sdt) -> MachineOracle {
    MachineOracle {
        target,
        memo: Mutex::new(Memo::default()),
    }
}

impl MachineOracle {
    fn ask(&self, q: Question) -> bool {
        let mut memo = self.memo.lock().unwrap();
        if let Some(a) = memo.lookup(&q) {
            return a;
        }
        let answer = match &q {
            Question::Translation(x, y) => self.target.contains_translation(x, y),
            Question::Domain(x) => self.target.in_domain(x),
        };
        memo.record(q, answer);
        answer
    }
}

impl Oracle for MachineOracle {
    fn query(&self, x: &Str, y: &Str) -> Result<bool, OracleError> {
        Ok(self.ask(Question::Translation(x.clone(), y.clone())))
    }

    fn dk(&self, x: &Str) -> Result<bool, OracleError> {
        Ok(self.ask(Question::Domain(x.clone())))
    }

    fn stats(&self) -> OracleStats {
        self.memo.lock().unwrap().stats
    }
}

/// Delegates at most `max_queries` distinct questions to `inner`.
#[derive(Debug)]
pub struct Budgeted<O> {
    inner: O,
    budget: usize,
    memo: Mutex<Memo>,
}

pub fn budgeted<O: Oracle>(inner: O, max_queries: usize) -> Budgeted<O> {
    Budgeted {
        inner,
        budget: max_queries,
        memo: Mutex::new(Memo::default()),
    }
}

impl<O: Oracle> Budgeted<O> {
    pub fn inner(&self) -> &O {
        &self.inner
    }

    fn ask(&self, q: Question) -> Result<bool, OracleError> {
        let mut memo = self.memo.lock().unwrap();
        if let Some(a) = memo.lookup(&q) {
            return Ok(a);
        }
        if memo.stats.total() >= self.budget {
            return Err(OracleError::BudgetExhausted {
                budget: self.budget,
            });
        }
        let answer = match &q {
            Question::Translation(x, y) => self.inner.query(x, y)?,
            Question::Domain(x) => self.inner.dk(x)?,
        };
        memo.record(q, answer);
        Ok(answer)
    }
}

impl<O: Oracle> Oracle for Budgeted<O> {
    fn query(&self, x: &Str, y: &Str) -> Result<bool, OracleError> {
        self.ask(Question::Translation(x.clone(), y.clone()))
    }

    fn dk(&self, x: &Str) -> Result<bool, OracleError> {
        self.ask(Question::Domain(x.clone()))
    }

    fn stats(&self) -> OracleStats {
        self.memo.lock().unwrap().stats
    }
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn query(&self, x: &Str, y: &Str) -> Result<bool, OracleError> {
        (**self).query(x, y)
    }

    fn dk(&self, x: &Str) -> Result<bool, OracleError> {
        (**self).dk(x)
    }

    fn stats(&self) -> OracleStats {
        (**self).stats()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g0, g1};
    use crate::strings::Alphabet;

    fn i(t: &str) -> Str {
        Alphabet::from_chars("a").unwrap().parse_str(t).unwrap()
    }

    fn o(t: &str) -> Str {
        Alphabet::from_chars("AB").unwrap().parse_str(t).unwrap()
    }

    #[test]
    fn machine_answers() {
        assert_eq!(machine_oracle(g0()).query(&i("a"), &o("B")), Ok(true));
        let or = machine_oracle(g1());
        assert_eq!(or.query(&i("aa"), &o("BB")), Ok(false));
        assert_eq!(or.dk(&i("aaa")), Ok(true));
        assert_eq!(or.query(&i("aa"), &o("BB")), Ok(false));
        assert_eq!(
            or.stats(),
            OracleStats {
                translation_queries: 1,
                domain_queries: 1,
                cache_hits: 1
            }
        );
    }

    #[test]
    fn budget_zero() {
        let or = budgeted(machine_oracle(g1()), 0);
        assert_eq!(
            or.query(&i("a"), &o("A")),
            Err(OracleError::BudgetExhausted { budget: 0 })
        );
    }

    #[test]
    fn budget_counts_distinct_questions() {
        let or = budgeted(machine_oracle(g1()), 2);
        assert_eq!(or.query(&i("a"), &o("A")), Ok(true));
        assert_eq!(or.query(&i("a"), &o("A")), Ok(true));
        assert_eq!(or.query(&i("a"), &o("B")), Ok(true));
        assert!(or.query(&i("a"), &o("AB")).is_err());
        assert_eq!(or.stats().translation_queries, 2);
        assert_eq!(or.stats().cache_hits, 1);
    }
}
