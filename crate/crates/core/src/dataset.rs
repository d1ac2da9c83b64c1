//! Finite sets of translation pairs `⟨input, output⟩`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::strings::{Alphabet, Str, StringError, StringSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("line {line}: expected `input<TAB>output`")]
    MissingTab { line: usize },
    #[error("line {line}: {source}")]
    BadString { line: usize, source: StringError },
}

/// Pairs grouped by input; both levels iterate in llex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    input: Alphabet,
    output: Alphabet,
    pairs: BTreeMap<Str, BTreeSet<Str>>,
    len: usize,
}

impl Dataset {
    pub fn new(input: Alphabet, output: Alphabet) -> Self {
        Dataset {
            input,
            output,
            pairs: BTreeMap::new(),
            len: 0,
        }
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn insert(&mut self, input: Str, output: Str) -> bool {
        let added = self.pairs.entry(input).or_default().insert(output);
        if added {
            self.len += 1;
        }
        added
    }

    pub fn contains(&self, input: &Str, output: &Str) -> bool {
        self.pairs.get(input).is_some_and(|ys| ys.contains(output))
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn num_inputs(&self) -> usize {
        self.pairs.len()
    }

    pub fn inputs(&self) -> impl Iterator<Item = &Str> {
        self.pairs.keys()
    }

    pub fn outputs(&self, input: &Str) -> Option<&BTreeSet<Str>> {
        self.pairs.get(input)
    }

    /// The observed translations of `input`; empty if it is absent.
    pub fn translations(&self, input: &Str) -> StringSet {
        self.pairs
            .get(input)
            .map(|ys| ys.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Str, &Str)> {
        self.pairs
            .iter()
            .flat_map(|(x, ys)| ys.iter().map(move |y| (x, y)))
    }

    pub fn grouped(&self) -> impl Iterator<Item = (&Str, &BTreeSet<Str>)> {
        self.pairs.iter()
    }

    /// Inputs extending `prefix`, with their outputs.
    pub fn extending<'a>(
        &'a self,
        prefix: &'a Str,
    ) -> impl Iterator<Item = (&'a Str, &'a BTreeSet<Str>)> + 'a {
        self.pairs
            .iter()
            .filter(move |(x, _)| prefix.is_prefix_of(x))
    }

    pub fn union_with(&mut self, other: &Dataset) {
        assert_eq!(
            (&self.input, &self.output),
            (&other.input, &other.output),
            "datasets over different alphabets"
        );
        for (x, y) in other.iter() {
            self.insert(x.clone(), y.clone());
        }
    }

    /// Sum of input and output lengths over all pairs.
    pub fn total_size(&self) -> usize {
        self.iter().map(|(x, y)| x.len() + y.len()).sum()
    }

    pub fn max_input_len(&self) -> usize {
        self.pairs.keys().map(Str::len).max().unwrap_or(0)
    }

    /// One `input<TAB>output` line per pair, `-` for the empty string.
    pub fn to_text(&self) -> String {
        let mut text = String::new();
        for (x, y) in self.iter() {
            writeln!(text, "{}\t{}", self.input.render(x), self.output.render(y)).unwrap();
        }
        text
    }

    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str, input: &Alphabet, output: &Alphabet) -> Result<Self, DatasetError> {
        let mut data = Dataset::new(input.clone(), output.clone());
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (x, y) = trimmed
                .split_once('\t')
                .ok_or(DatasetError::MissingTab { line })?;
            let x = input
                .parse_str(x.trim())
                .map_err(|source| DatasetError::BadString { line, source })?;
            let y = output
                .parse_str(y.trim())
                .map_err(|source| DatasetError::BadString { line, source })?;
            data.insert(x, y);
        }
        Ok(data)
    }
}
