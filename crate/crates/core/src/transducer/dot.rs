use std::fmt::Write as _;

use super::Sdt;
use crate::strings::{Alphabet, StringSet};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn label_set(alpha: &Alphabet, set: &StringSet) -> String {
    set.iter()
        .map(|s| {
            if s.is_empty() {
                "λ".to_string()
            } else {
                alpha.render(s)
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Graphviz rendering of the useful part of `g`. Accepting states get a
/// double border and an `xlabel` with their `#` output; the initial state
/// is drawn bold. Unreachable and dead states are left out, except that
/// the initial state is always shown.
pub fn to_dot(g: &Sdt) -> String {
    let access = g.access_strings();
    let live = g.co_reachable();
    let shown: Vec<bool> = g
        .states()
        .map(|q| q == g.initial() || (access[q].is_some() && live[q]))
        .collect();
    let mut out = String::from("digraph sdt {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in g.states().filter(|&q| shown[q]) {
        let mut attrs = Vec::new();
        if let Some(acc) = g.accept(q) {
            attrs.push("shape=doublecircle".to_string());
            let text = format!("# : {}", label_set(g.output_alphabet(), acc.as_set()));
            attrs.push(format!("xlabel={}", quote(&text)));
        }
        if q == g.initial() {
            attrs.push("style=bold".to_string());
        }
        if attrs.is_empty() {
            writeln!(out, "  {};", quote(g.state_name(q))).unwrap();
        } else {
            writeln!(out, "  {} [{}];", quote(g.state_name(q)), attrs.join(", ")).unwrap();
        }
    }
    for (p, a, e) in g.transitions() {
        if !(shown[p] && shown[e.target]) {
            continue;
        }
        let text = format!(
            "{} : {}",
            g.input_alphabet().char_of(a),
            label_set(g.output_alphabet(), e.output.as_set())
        );
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(g.state_name(p)),
            quote(g.state_name(e.target)),
            quote(&text)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
