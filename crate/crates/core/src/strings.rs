//! Alphabets, strings and finite string sets.
//!
//! Strings are stored as sequences of symbol indices into an [`Alphabet`];
//! the index order is the alphabet's declared order, so comparing indices
//! compares symbols. The total order on [`Str`] is length-lexicographic
//! (llex), which makes every `BTreeSet<Str>` iterate in llex order.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Index of a symbol inside its alphabet.
pub type Symbol = u8;

/// The end-of-word marker. Never a member of an alphabet.
pub const END_MARKER: char = '#';

/// Token used for the empty string in every text format.
pub const LAMBDA_TOKEN: &str = "-";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StringError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(char),
    #[error("symbol {0:?} is reserved and cannot appear in an alphabet")]
    ReservedSymbol(char),
    #[error("alphabet exceeds 255 symbols")]
    AlphabetTooLarge,
    #[error("symbol {symbol:?} is not in the alphabet {alphabet}")]
    UnknownSymbol { symbol: char, alphabet: String },
    #[error("operation requires a non-empty string set")]
    EmptySet,
    #[error("operation requires an antichain, but {0} and {1} are comparable")]
    NotAntichain(String, String),
}

/// An ordered list of distinct characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self, StringError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(StringError::EmptyAlphabet);
        }
        if symbols.len() > usize::from(Symbol::MAX) {
            return Err(StringError::AlphabetTooLarge);
        }
        for (i, &c) in symbols.iter().enumerate() {
            // `-` and `,` are syntax in the set literal and file formats.
            if c == END_MARKER || c == ',' || c == '-' || c.is_whitespace() {
                return Err(StringError::ReservedSymbol(c));
            }
            if symbols[..i].contains(&c) {
                return Err(StringError::DuplicateSymbol(c));
            }
        }
        Ok(Self { symbols })
    }

    /// Builds an alphabet from the characters of `s`, in order.
    pub fn from_chars(s: &str) -> Result<Self, StringError> {
        Self::new(s.chars())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn chars(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.symbols.len()).map(|i| i as Symbol)
    }

    pub fn index_of(&self, c: char) -> Option<Symbol> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| i as Symbol)
    }

    pub fn char_of(&self, s: Symbol) -> char {
        self.symbols[usize::from(s)]
    }

    pub fn contains_str(&self, s: &Str) -> bool {
        s.0.iter().all(|&c| usize::from(c) < self.symbols.len())
    }

    /// Parses a string literal; `-` denotes the empty string.
    pub fn parse_str(&self, text: &str) -> Result<Str, StringError> {
        if text == LAMBDA_TOKEN {
            return Ok(Str::empty());
        }
        text.chars()
            .map(|c| {
                self.index_of(c).ok_or_else(|| StringError::UnknownSymbol {
                    symbol: c,
                    alphabet: self.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Str)
    }

    /// Parses a comma-separated set literal such as `-,a,ab`.
    pub fn parse_set(&self, text: &str) -> Result<StringSet, StringError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(StringSet::new());
        }
        text.split(',').map(|t| self.parse_str(t.trim())).collect()
    }

    /// Renders a string, using `-` for λ.
    pub fn render(&self, s: &Str) -> String {
        if s.is_empty() {
            LAMBDA_TOKEN.to_string()
        } else {
            s.0.iter().map(|&c| self.char_of(c)).collect()
        }
    }

    pub fn render_set(&self, set: &StringSet) -> String {
        set.iter()
            .map(|s| self.render(s))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// How two strings relate under the prefix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixRel {
    Equal,
    /// The left string is a strict prefix of the right one.
    StrictPrefix,
    /// The left string strictly extends the right one.
    StrictExtension,
    Incomparable,
}

impl PrefixRel {
    pub fn comparable(self) -> bool {
        self != PrefixRel::Incomparable
    }
}

/// A finite string of symbol indices. Ordered length-lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Str(pub Vec<Symbol>);

impl Str {
    pub fn empty() -> Self {
        Str(Vec::new())
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Self {
        Str(symbols.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn last(&self) -> Option<Symbol> {
        self.0.last().copied()
    }

    /// `x↾k`: the first `k` symbols.
    pub fn prefix(&self, k: usize) -> Str {
        Str(self.0[..k.min(self.0.len())].to_vec())
    }

    /// `x⁻`: drops the last symbol. `None` for λ.
    pub fn truncate(&self) -> Option<Str> {
        if self.0.is_empty() {
            None
        } else {
            Some(Str(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// All prefixes in order of increasing length, λ and `self` included.
    pub fn prefixes(&self) -> impl Iterator<Item = Str> + '_ {
        (0..=self.0.len()).map(move |k| self.prefix(k))
    }

    pub fn concat(&self, other: &Str) -> Str {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Str(v)
    }

    pub fn push(&self, symbol: Symbol) -> Str {
        let mut v = self.0.clone();
        v.push(symbol);
        Str(v)
    }

    /// `x ⪯ y`
    pub fn is_prefix_of(&self, other: &Str) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Returns `z` with `prefix · z = self`.
    pub fn strip_prefix(&self, prefix: &Str) -> Option<Str> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|s| Str(s.to_vec()))
    }

    pub fn prefix_rel(&self, other: &Str) -> PrefixRel {
        match (self.is_prefix_of(other), other.is_prefix_of(self)) {
            (true, true) => PrefixRel::Equal,
            (true, false) => PrefixRel::StrictPrefix,
            (false, true) => PrefixRel::StrictExtension,
            (false, false) => PrefixRel::Incomparable,
        }
    }

    pub fn comparable(&self, other: &Str) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }
}

impl Ord for Str {
    fn cmp(&self, other: &Self) -> Ordering {
        llex_cmp(self, other)
    }
}

impl PartialOrd for Str {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shorter strings first; equal lengths compare lexicographically.
pub fn llex_cmp(x: &Str, y: &Str) -> Ordering {
    x.0.len().cmp(&y.0.len()).then_with(|| x.0.cmp(&y.0))
}

pub fn prefix_rel(x: &Str, y: &Str) -> PrefixRel {
    x.prefix_rel(y)
}

/// A finite, duplicate-free set of strings, iterated in llex order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringSet(BTreeSet<Str>);

impl StringSet {
    pub fn new() -> Self {
        StringSet(BTreeSet::new())
    }

    /// `{λ}`
    pub fn lambda() -> Self {
        Self::singleton(Str::empty())
    }

    pub fn singleton(s: Str) -> Self {
        let mut set = BTreeSet::new();
        set.insert(s);
        StringSet(set)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: &Str) -> bool {
        self.0.contains(s)
    }

    pub fn insert(&mut self, s: Str) -> bool {
        self.0.insert(s)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Str> + ExactSizeIterator {
        self.0.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<Str> {
        &self.0
    }

    pub fn into_set(self) -> BTreeSet<Str> {
        self.0
    }

    /// The llex-least member.
    pub fn least(&self) -> Option<&Str> {
        self.0.iter().next()
    }

    pub fn is_lambda(&self) -> bool {
        self.0.len() == 1 && self.0.iter().next().is_some_and(Str::is_empty)
    }

    pub fn extend<I: IntoIterator<Item = Str>>(&mut self, iter: I) {
        self.0.extend(iter)
    }

    pub fn union(&self, other: &StringSet) -> StringSet {
        StringSet(self.0.union(&other.0).cloned().collect())
    }

    /// Pairwise incomparable under the prefix order.
    pub fn is_antichain(&self) -> bool {
        self.comparable_pair().is_none()
    }

    /// Some comparable pair of distinct members, if any.
    pub fn comparable_pair(&self) -> Option<(&Str, &Str)> {
        // In a set sorted lexicographically (not llex), a string is followed
        // by its extensions, so checking neighbours suffices.
        let mut lex: Vec<&Str> = self.0.iter().collect();
        lex.sort_by(|a, b| a.0.cmp(&b.0));
        lex.windows(2)
            .find(|w| w[0].is_prefix_of(w[1]))
            .map(|w| (w[0], w[1]))
    }

    /// The unique member that is a prefix of `s`, assuming an antichain.
    pub fn prefix_member_of(&self, s: &Str) -> Option<&Str> {
        (0..=s.len()).find_map(|k| self.0.get(&s.prefix(k)))
    }

    /// Longest member length.
    pub fn max_len(&self) -> usize {
        self.0.iter().map(Str::len).max().unwrap_or(0)
    }
}

impl FromIterator<Str> for StringSet {
    fn from_iter<I: IntoIterator<Item = Str>>(iter: I) -> Self {
        StringSet(iter.into_iter().collect())
    }
}

impl IntoIterator for StringSet {
    type Item = Str;
    type IntoIter = std::collections::btree_set::IntoIter<Str>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a StringSet {
    type Item = &'a Str;
    type IntoIter = std::collections::btree_set::Iter<'a, Str>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
