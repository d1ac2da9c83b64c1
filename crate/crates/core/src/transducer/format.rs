//! Line-oriented text format.
//!
//! ```text
//! # comment
//! inalpha a b
//! outalpha A B
//! states q0 q1
//! initial q0
//! trans q0 a q1 A,B
//! accept q1 -
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::{Sdt, SdtBuilder, SdtError, StateId};
use crate::strings::Alphabet;

fn err(line: usize, message: impl Into<String>) -> SdtError {
    SdtError::Parse {
        line,
        message: message.into(),
    }
}

fn single_char(line: usize, token: &str) -> Result<char, SdtError> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(err(
            line,
            format!("symbol {token:?} is not a single character"),
        )),
    }
}

impl Sdt {
    pub fn to_text(&self) -> String {
        let mut text = String::new();
        let join = |a: &Alphabet| {
            a.chars()
                .iter()
                .map(char::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(text, "inalpha {}", join(&self.input)).unwrap();
        writeln!(text, "outalpha {}", join(&self.output)).unwrap();
        writeln!(text, "states {}", self.names.join(" ")).unwrap();
        writeln!(text, "initial {}", self.names[self.initial]).unwrap();
        for (q, a, e) in self.transitions() {
            writeln!(
                text,
                "trans {} {} {} {}",
                self.names[q],
                self.input.char_of(a),
                self.names[e.target],
                self.output.render_set(e.output.as_set())
            )
            .unwrap();
        }
        for q in self.states() {
            if let Some(acc) = self.accept(q) {
                writeln!(
                    text,
                    "accept {} {}",
                    self.names[q],
                    self.output.render_set(acc.as_set())
                )
                .unwrap();
            }
        }
        text
    }

    /// Strict parse: unknown directives, repeated directives, duplicate
    /// transitions and malformed output sets are all errors. Trimness is
    /// not checked here; see [`Sdt::validate`].
    pub fn parse(text: &str) -> Result<Sdt, SdtError> {
        let mut input: Option<Alphabet> = None;
        let mut output: Option<Alphabet> = None;
        let mut builder: Option<SdtBuilder> = None;
        let mut ids: HashMap<String, StateId> = HashMap::new();
        let mut initial_seen = false;
        let mut seen_trans: BTreeSet<(StateId, char)> = BTreeSet::new();
        let mut seen_accept: BTreeSet<StateId> = BTreeSet::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            let args = &tokens[1..];
            match tokens[0] {
                "inalpha" | "outalpha" => {
                    let slot = if tokens[0] == "inalpha" {
                        &mut input
                    } else {
                        &mut output
                    };
                    if slot.is_some() {
                        return Err(err(line, format!("repeated `{}`", tokens[0])));
                    }
                    let chars = args
                        .iter()
                        .map(|t| single_char(line, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    *slot = Some(Alphabet::new(chars).map_err(|e| err(line, e.to_string()))?);
                }
                "states" => {
                    if builder.is_some() {
                        return Err(err(line, "repeated `states`"));
                    }
                    let (Some(i_alpha), Some(o_alpha)) = (&input, &output) else {
                        return Err(err(line, "`states` before both alphabets"));
                    };
                    if args.is_empty() {
                        return Err(err(line, "`states` needs at least one name"));
                    }
                    let mut b = SdtBuilder::new(i_alpha.clone(), o_alpha.clone());
                    for name in args {
                        if ids.contains_key(*name) {
                            return Err(err(line, format!("state {name} declared twice")));
                        }
                        ids.insert(name.to_string(), b.add_state(*name));
                    }
                    builder = Some(b);
                }
                directive @ ("initial" | "trans" | "accept") => {
                    let b = builder
                        .as_mut()
                        .ok_or_else(|| err(line, format!("`{directive}` before `states`")))?;
                    let state = |name: &str| {
                        ids.get(name)
                            .copied()
                            .ok_or_else(|| err(line, format!("unknown state {name}")))
                    };
                    let set = |t: &str, b: &SdtBuilder| {
                        b.output_alphabet()
                            .parse_set(t)
                            .map_err(|e| err(line, e.to_string()))
                    };
                    match (directive, args) {
                        ("initial", [q]) => {
                            if initial_seen {
                                return Err(err(line, "repeated `initial`"));
                            }
                            initial_seen = true;
                            b.set_initial(state(q)?);
                        }
                        ("trans", [p, a, q, out]) => {
                            let (p, q) = (state(p)?, state(q)?);
                            let c = single_char(line, a)?;
                            let symbol = b.input_alphabet().index_of(c).ok_or_else(|| {
                                err(line, format!("{c:?} is not an input symbol"))
                            })?;
                            if !seen_trans.insert((p, c)) {
                                return Err(err(line, format!("second transition on {c:?}")));
                            }
                            let out = set(out, b)?;
                            check_code(line, &out, b.output_alphabet())?;
                            b.add_transition(p, symbol, q, out);
                        }
                        ("accept", [q, out]) => {
                            let q = state(q)?;
                            if !seen_accept.insert(q) {
                                return Err(err(line, "second accept for the same state"));
                            }
                            let out = set(out, b)?;
                            check_code(line, &out, b.output_alphabet())?;
                            b.add_accept(q, out);
                        }
                        _ => {
                            return Err(err(
                                line,
                                format!("wrong number of arguments to `{directive}`"),
                            ))
                        }
                    }
                }
                other => return Err(err(line, format!("unknown directive `{other}`"))),
            }
        }
        let builder = builder.ok_or_else(|| err(0, "missing `states`"))?;
        if !initial_seen {
            return Err(err(0, "missing `initial`"));
        }
        builder.build()
    }
}

fn check_code(
    line: usize,
    set: &crate::strings::StringSet,
    alpha: &Alphabet,
) -> Result<(), SdtError> {
    if let Some((x, y)) = set.comparable_pair() {
        return Err(err(
            line,
            format!(
                "comparable outputs {} and {}",
                alpha.render(x),
                alpha.render(y)
            ),
        ));
    }
    Ok(())
}
