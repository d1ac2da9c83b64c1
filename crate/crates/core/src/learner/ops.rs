//! COMPARE, VAC and TESTVPS over explicit evidence.
//!
//! The learner calls these with data read off its hypothesis; the public
//! wrappers in the parent module feed them straight from a [`Dataset`].

use crate::antichain::left_quotient;
use crate::dataset::Dataset;
use crate::oracle::{Oracle, OracleError};
use crate::strings::{Str, StringSet};

/// Every output of `x` that extends `z` must still be a translation with
/// `z` swapped for `w`, and vice versa.
pub(crate) fn compare_outputs<'a, O: Oracle + ?Sized>(
    oracle: &O,
    x: &Str,
    outputs: impl IntoIterator<Item = &'a Str> + Clone,
    z: &Str,
    w: &Str,
) -> Result<bool, OracleError> {
    if z == w {
        return Ok(true);
    }
    for (from, to) in [(z, w), (w, z)] {
        for y in outputs.clone() {
            if let Some(rest) = y.strip_prefix(from) {
                if !oracle.query(x, &to.concat(&rest))? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Candidate valid antichains of `tree`, the outputs of `x` with the common
/// prefix `prefix` removed, in ascending `<_ac` order.
///
/// Each prefix `Ẑ` of the least member `Z`, `Z` itself included, seeds one
/// candidate; every other member `R` contributes its shortest prefix that
/// COMPARE cannot tell apart from `Ẑ`.
pub(crate) fn vac_from<O: Oracle + ?Sized>(
    oracle: &O,
    x: &Str,
    prefix: &Str,
    tree: &StringSet,
) -> Result<Vec<StringSet>, OracleError> {
    let Some(z) = tree.least() else {
        return Ok(vec![StringSet::lambda()]);
    };
    let outputs: Vec<Str> = tree.iter().map(|t| prefix.concat(t)).collect();
    let mut found: Vec<StringSet> = Vec::new();
    for k in 0..=z.len() {
        let z_hat = z.prefix(k);
        let anchor = prefix.concat(&z_hat);
        let mut candidate = StringSet::singleton(z_hat);
        let mut complete = true;
        for r in tree.iter().filter(|r| *r != z) {
            let mut matched = None;
            for j in 0..=r.len() {
                let r_hat = r.prefix(j);
                if compare_outputs(oracle, x, &outputs, &anchor, &prefix.concat(&r_hat))? {
                    matched = Some(r_hat);
                    break;
                }
            }
            match matched {
                Some(r_hat) => {
                    candidate.insert(r_hat);
                }
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if complete && candidate.is_antichain() && !found.contains(&candidate) {
            found.push(candidate);
        }
    }
    Ok(found)
}

/// One observed input with the outputs left after removing a known prefix.
#[derive(Debug, Clone)]
pub(crate) struct Evidence {
    pub input: Str,
    pub remainders: StringSet,
}

/// Does `candidate` split every remainder, with each split surviving a
/// swap of the leading member for every other member?
pub(crate) fn survives<O: Oracle + ?Sized>(
    oracle: &O,
    prefix: &Str,
    candidate: &StringSet,
    evidence: &[Evidence],
) -> Result<bool, OracleError> {
    for ev in evidence {
        for t in ev.remainders.iter() {
            let Some(r) = candidate.prefix_member_of(t) else {
                return Ok(false);
            };
            let w = t.strip_prefix(r).expect("r prefixes t");
            for q in candidate.iter() {
                let y = prefix.concat(q).concat(&w);
                if !oracle.query(&ev.input, &y)? {
                    return Ok(false);
                }
            }
        }
        if !left_quotient(candidate, &ev.remainders).is_antichain() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The greatest candidate consistent with the evidence; `{λ}` if none is.
pub(crate) fn test_vps_from<O: Oracle + ?Sized>(
    oracle: &O,
    prefix: &Str,
    candidates: &[StringSet],
    evidence: &[Evidence],
) -> Result<StringSet, OracleError> {
    for candidate in candidates.iter().rev() {
        if candidate.is_lambda() {
            return Ok(candidate.clone());
        }
        if survives(oracle, prefix, candidate, evidence)? {
            return Ok(candidate.clone());
        }
    }
    Ok(StringSet::lambda())
}

/// Pairs of `data` whose input extends `x` and whose output extends
/// `prefix`, with `prefix` stripped.
pub(crate) fn evidence_below(data: &Dataset, x: &Str, prefix: &Str) -> Vec<Evidence> {
    data.extending(x)
        .filter_map(|(input, outputs)| {
            let remainders: StringSet = outputs
                .iter()
                .filter_map(|y| y.strip_prefix(prefix))
                .collect();
            (!remainders.is_empty()).then(|| Evidence {
                input: input.clone(),
                remainders,
            })
        })
        .collect()
}
