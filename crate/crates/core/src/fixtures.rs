//! Small worked examples shared by tests, benches and the CLI.

use crate::strings::{Alphabet, StringSet};
use crate::transducer::{random_sdt, RandomSdtParams, Sdt};

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").expect("valid alphabet")
}

fn set(text: &str) -> StringSet {
    ab().parse_set(text)
        .expect("fixture strings are over {a, b}")
}

/// Twelve strings whose valid antichains are `{λ}`, `{aa, ba, bb}`,
/// `{aaaa, aab, baaa, bab, bbaa, bbb}` and the set itself.
pub fn s12() -> StringSet {
    set("aaaaa,aaaab,aaba,aabb,baaaa,baaab,baba,babb,bbaaa,bbaab,bbba,bbbb")
}

/// The 26-string factorization example exactly as it is usually quoted.
///
/// Its `b` branch is not a copy of its `a` branch, so `{a, b}` is not a
/// valid antichain of it; see [`s24`] for the set the factorization
/// `{a,b} * {aa,b} * … * {a,b}` actually describes.
pub fn s26() -> StringSet {
    set(
        "aaaaa,aaaab,aaabaa,aaabab,aaabba,aaabbb,abaa,abab,abbaa,abbab,abbba,abbbb,\
         baaaa,baaab,baabaa,baabab,baabba,baabbb,bbaa,bbab,bbbaa,bbbab,bbbbaa,bbbbab,\
         bbbbba,bbbbbb",
    )
}

/// `{a,b} * {aa,b} * {a,ba,bb} * {a,b}`: the set whose quotients are
/// `{aaaa, aaab, aabaa, …, bbbb}` and then `{aa, ab, baa, bab, bba, bbb}`.
pub fn s24() -> StringSet {
    set(
        "aaaaa,aaaab,aaabaa,aaabab,aaabba,aaabbb,abaa,abab,abbaa,abbab,abbba,abbbb,\
         baaaa,baaab,baabaa,baabab,baabba,baabbb,bbaa,bbab,bbbaa,bbbab,bbbba,bbbbb",
    )
}

fn unary_to_ab() -> (Alphabet, Alphabet) {
    (
        Alphabet::from_chars("a").expect("valid alphabet"),
        Alphabet::from_chars("AB").expect("valid alphabet"),
    )
}

/// One state looping on `a` with outputs `{A, B}`, accepting with `{λ}`.
pub fn g0() -> Sdt {
    let (i, o) = unary_to_ab();
    let both = o.parse_set("A,B").unwrap();
    let mut b = Sdt::builder(i, o);
    let q = b.add_state("q_λ");
    b.set_initial(q)
        .add_transition(q, 0, q, both)
        .add_accept(q, StringSet::lambda());
    b.build().expect("fixture is valid")
}

/// `{A, B}` on the first `a`, then `{A}` on every later one.
pub fn g1() -> Sdt {
    let (i, o) = unary_to_ab();
    let both = o.parse_set("A,B").unwrap();
    let a_only = o.parse_set("A").unwrap();
    let mut b = Sdt::builder(i, o);
    let q0 = b.add_state("q_λ");
    let q1 = b.add_state("q_a");
    b.set_initial(q0)
        .add_transition(q0, 0, q1, both)
        .add_transition(q1, 0, q1, a_only)
        .add_accept(q0, StringSet::lambda())
        .add_accept(q1, StringSet::lambda());
    b.build().expect("fixture is valid")
}

/// `{A, B}` on the first two `a`s, then `{A}` on every later one.
pub fn g2() -> Sdt {
    let (i, o) = unary_to_ab();
    let both = o.parse_set("A,B").unwrap();
    let a_only = o.parse_set("A").unwrap();
    let mut b = Sdt::builder(i, o);
    let q0 = b.add_state("q_λ");
    let q1 = b.add_state("q_a");
    let q2 = b.add_state("q_aa");
    b.set_initial(q0)
        .add_transition(q0, 0, q1, both.clone())
        .add_transition(q1, 0, q2, both)
        .add_transition(q2, 0, q2, a_only)
        .add_accept(q0, StringSet::lambda())
        .add_accept(q1, StringSet::lambda())
        .add_accept(q2, StringSet::lambda());
    b.build().expect("fixture is valid")
}

/// `q0 -a:{λ}-> q1` with `{A}` on the `#`-transition of `q1`.
pub fn late_output() -> Sdt {
    two_steps("-", "A")
}

/// The same bi-language as [`late_output`] with `{A}` on the edge.
pub fn early_output() -> Sdt {
    two_steps("A", "-")
}

fn two_steps(edge: &str, accept: &str) -> Sdt {
    let (i, o) = unary_to_ab();
    let edge = o.parse_set(edge).unwrap();
    let accept = o.parse_set(accept).unwrap();
    let mut b = Sdt::builder(i, o);
    let q0 = b.add_state("q0");
    let q1 = b.add_state("q1");
    b.set_initial(q0)
        .add_transition(q0, 0, q1, edge)
        .add_accept(q1, accept);
    b.build().expect("fixture is valid")
}

/// Random trim machine number `seed` of the test suite: `1 + seed % 5`
/// states, input `{a}` or `{a, b}`, output `{A, B}`, at most two outputs of
/// length at most two per transition.
pub fn random_machine(seed: u64) -> Sdt {
    let n = 1 + (seed % 5) as usize;
    let input = if seed.is_multiple_of(3) { "a" } else { "ab" };
    let params = RandomSdtParams::new(
        n,
        Alphabet::from_chars(input).expect("valid alphabet"),
        Alphabet::from_chars("AB").expect("valid alphabet"),
        seed,
    );
    random_sdt(&params)
}

/// `G₀`, `G₁`, `G₂`, the two placements of one output, and the first
/// `random` random machines, with names.
pub fn suite(random: u64) -> Vec<(String, Sdt)> {
    let mut all = vec![
        ("g0".to_string(), g0()),
        ("g1".to_string(), g1()),
        ("g2".to_string(), g2()),
        ("late_output".to_string(), late_output()),
        ("early_output".to_string(), early_output()),
    ];
    all.extend((0..random).map(|seed| (format!("random_{seed}"), random_machine(seed))));
    all
}
