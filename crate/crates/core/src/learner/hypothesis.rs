use std::collections::{BTreeMap, VecDeque};

use super::ops::{test_vps_from, vac_from, Evidence};
use super::LearnError;
use crate::antichain::{left_quotient, product};
use crate::dataset::Dataset;
use crate::oracle::Oracle;
use crate::strings::{Alphabet, Str, StringSet, Symbol};
use crate::transducer::{Sdt, SdtBuilder};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
struct HEdge {
    target: NodeId,
    out: StringSet,
}

#[derive(Debug, Clone)]
struct Node {
    parent: Option<(NodeId, Symbol)>,
    children: BTreeMap<Symbol, HEdge>,
    accept: Option<StringSet>,
    alive: bool,
    /// Access string and least path output, frozen on promotion.
    red: Option<(Str, Str)>,
}

impl Node {
    fn fresh(parent: Option<(NodeId, Symbol)>) -> Self {
        Node {
            parent,
            children: BTreeMap::new(),
            accept: None,
            alive: true,
            red: None,
        }
    }
}

/// A machine under construction: red states form a fixed graph, and every
/// other state lies in a tree hanging off a red state.
///
/// Inside those trees every edge outputs `{λ}`, so an accept set below a
/// blue state holds outputs relative to the product along the blue
/// state's access path.
#[derive(Debug, Clone)]
pub struct Hypothesis {
    input: Alphabet,
    output: Alphabet,
    nodes: Vec<Node>,
    red: Vec<NodeId>,
}

impl Hypothesis {
    /// The tree transducer of `data`: one state per input prefix, `{λ}` on
    /// every edge and each input's outputs on its `#`-transition.
    pub fn initial(data: &Dataset) -> Result<Self, LearnError> {
        if data.is_empty() {
            return Err(LearnError::EmptyDataset);
        }
        let mut nodes = vec![Node::fresh(None)];
        for (x, outputs) in data.grouped() {
            let mut q = 0;
            for &a in x.symbols() {
                q = match nodes[q].children.get(&a) {
                    Some(e) => e.target,
                    None => {
                        nodes.push(Node::fresh(Some((q, a))));
                        let id = nodes.len() - 1;
                        nodes[q].children.insert(
                            a,
                            HEdge {
                                target: id,
                                out: StringSet::lambda(),
                            },
                        );
                        id
                    }
                };
            }
            let set: StringSet = outputs.iter().cloned().collect();
            if let Some((y, z)) = set.comparable_pair() {
                let o = data.output_alphabet();
                return Err(LearnError::InconsistentData {
                    input: data.input_alphabet().render(x),
                    first: o.render(y),
                    second: o.render(z),
                });
            }
            nodes[q].accept = Some(set);
        }
        nodes[0].red = Some((Str::empty(), Str::empty()));
        Ok(Hypothesis {
            input: data.input_alphabet().clone(),
            output: data.output_alphabet().clone(),
            nodes,
            red: vec![0],
        })
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn red(&self) -> &[NodeId] {
        &self.red
    }

    pub fn is_red(&self, n: NodeId) -> bool {
        self.nodes[n].red.is_some()
    }

    pub fn access(&self, n: NodeId) -> Str {
        if let Some((access, _)) = &self.nodes[n].red {
            return access.clone();
        }
        let (p, a) = self.nodes[n].parent.expect("non-red nodes have parents");
        self.access(p).push(a)
    }

    /// `X_ℓ`: the llex-least output along the access path, taken edge by
    /// edge.
    pub fn least_prefix(&self, n: NodeId) -> Str {
        if let Some((_, least)) = &self.nodes[n].red {
            return least.clone();
        }
        let (p, a) = self.nodes[n].parent.expect("non-red nodes have parents");
        let edge = &self.nodes[p].children[&a];
        self.least_prefix(p)
            .concat(edge.out.least().expect("edge outputs are non-empty"))
    }

    /// The node reached by `x`, following edges from the root.
    pub fn node_at(&self, x: &Str) -> Option<NodeId> {
        x.symbols()
            .iter()
            .try_fold(0, |q, a| self.nodes[q].children.get(a).map(|e| e.target))
    }

    /// Non-red children of red states.
    pub fn blue(&self) -> Vec<NodeId> {
        let mut blue: Vec<NodeId> = self
            .red
            .iter()
            .flat_map(|&r| self.nodes[r].children.values().map(|e| e.target))
            .filter(|&n| !self.is_red(n))
            .collect();
        blue.sort_by_cached_key(|&n| self.access(n));
        blue.dedup();
        blue
    }

    /// Nodes of the tree below a non-red node in llex order of their path
    /// from it, with those paths.
    fn subtree(&self, top: NodeId) -> Vec<(NodeId, Str)> {
        let mut out = Vec::new();
        let mut queue = VecDeque::from([(top, Str::empty())]);
        while let Some((n, w)) = queue.pop_front() {
            for (&a, e) in &self.nodes[n].children {
                debug_assert!(!self.is_red(e.target), "red state inside a tree");
                debug_assert!(e.out.is_lambda(), "non-λ edge inside a tree");
                queue.push_back((e.target, w.push(a)));
            }
            out.push((n, w));
        }
        out
    }

    /// Observed outputs below `top`, relative to its path product.
    fn evidence(&self, top: NodeId, base: &Str) -> Vec<Evidence> {
        self.subtree(top)
            .into_iter()
            .filter_map(|(n, w)| {
                self.nodes[n].accept.as_ref().map(|acc| Evidence {
                    input: base.concat(&w),
                    remainders: acc.clone(),
                })
            })
            .collect()
    }

    /// Strips the path product of a red access path from `y`, choosing at
    /// each edge the one member that prefixes what is left.
    fn strip_path(&self, access: &Str, y: &Str) -> Option<Str> {
        let mut q = 0;
        let mut rest = y.clone();
        for a in access.symbols() {
            let e = self.nodes[q].children.get(a)?;
            let m = e.out.prefix_member_of(&rest)?;
            rest = rest.strip_prefix(m).expect("member is a prefix");
            q = e.target;
        }
        Some(rest)
    }

    /// ONWARD at a non-red node whose parent is red. Returns the antichain
    /// moved onto the incoming edge.
    pub fn onward<O: Oracle + ?Sized>(
        &mut self,
        x: NodeId,
        oracle: &O,
    ) -> Result<StringSet, LearnError> {
        let access = self.access(x);
        let least = self.least_prefix(x);
        let evidence = self.evidence(x, &access);
        let Some(first) = evidence.first() else {
            return Ok(StringSet::lambda());
        };
        let candidates = vac_from(oracle, &first.input, &least, &first.remainders)?;
        let p = test_vps_from(oracle, &least, &candidates, &evidence)?;
        if p.is_lambda() {
            return Ok(p);
        }
        let (parent, a) = self.nodes[x].parent.expect("blue nodes have parents");
        let edge = self.nodes[parent].children.get_mut(&a).expect("edge to x");
        edge.out = product(&edge.out, &p);
        for (n, _) in self.subtree(x) {
            if let Some(acc) = self.nodes[n].accept.take() {
                self.nodes[n].accept = Some(left_quotient(&p, &acc));
            }
        }
        Ok(p)
    }

    /// FUTURE for a red `r` and an onwarded non-red `x`: every observed
    /// continuation of one must survive being grafted onto the other.
    pub fn future_agrees<O: Oracle + ?Sized>(
        &self,
        r: NodeId,
        x: NodeId,
        data: &Dataset,
        oracle: &O,
    ) -> Result<bool, LearnError> {
        let (r_access, x_access) = (self.access(r), self.access(x));
        let (r_least, x_least) = (self.least_prefix(r), self.least_prefix(x));
        for (z, outputs) in data.extending(&r_access) {
            let w = z.strip_prefix(&r_access).expect("z extends r");
            let input = x_access.concat(&w);
            for y in outputs {
                let Some(rest) = self.strip_path(&r_access, y) else {
                    return Ok(false);
                };
                if !oracle.query(&input, &x_least.concat(&rest))? {
                    return Ok(false);
                }
            }
        }
        for ev in self.evidence(x, &Str::empty()) {
            let input = r_access.concat(&ev.input);
            for t in ev.remainders.iter() {
                if !oracle.query(&input, &r_least.concat(t))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Redirects the edge into `x` to `r` and folds the tree below `x` onto
    /// the graph at `r`. Leaves `self` untouched on a fold conflict.
    pub fn fold_into(&mut self, r: NodeId, x: NodeId) -> Result<(), LearnError> {
        let mut next = self.clone();
        let (parent, a) = next.nodes[x].parent.expect("blue nodes have parents");
        next.nodes[parent]
            .children
            .get_mut(&a)
            .expect("edge to x")
            .target = r;
        next.nodes[x].parent = None;
        if next.fold(x, r) {
            *self = next;
            Ok(())
        } else {
            Err(LearnError::FoldConflict {
                state: self.input.render(&self.access(x)),
            })
        }
    }

    fn fold(&mut self, b: NodeId, r: NodeId) -> bool {
        if let Some(acc) = self.nodes[b].accept.take() {
            let merged = match &self.nodes[r].accept {
                Some(old) => old.union(&acc),
                None => acc,
            };
            if !merged.is_antichain() {
                return false;
            }
            self.nodes[r].accept = Some(merged);
        }
        let children = std::mem::take(&mut self.nodes[b].children);
        self.nodes[b].alive = false;
        for (a, eb) in children {
            match self.nodes[r].children.get(&a).cloned() {
                Some(er) => {
                    if !self.requotient(eb.target, &eb.out, &er.out)
                        || !self.fold(eb.target, er.target)
                    {
                        return false;
                    }
                }
                None => {
                    self.nodes[eb.target].parent = Some((r, a));
                    self.nodes[r].children.insert(a, eb);
                }
            }
        }
        true
    }

    /// Re-expresses the tree below `top`, reached so far through `from`, as
    /// reached through `to`.
    fn requotient(&mut self, top: NodeId, from: &StringSet, to: &StringSet) -> bool {
        if from == to {
            return true;
        }
        for (n, _) in self.subtree(top) {
            if let Some(acc) = &self.nodes[n].accept {
                let full = product(from, acc);
                if full.iter().any(|y| to.prefix_member_of(y).is_none()) {
                    return false;
                }
                let rest = left_quotient(to, &full);
                if !rest.is_antichain() {
                    return false;
                }
                self.nodes[n].accept = Some(rest);
            }
        }
        true
    }

    pub fn promote(&mut self, x: NodeId) {
        let frozen = (self.access(x), self.least_prefix(x));
        self.nodes[x].red = Some(frozen);
        self.red.push(x);
    }

    /// The hypothesis as a machine, states named after access strings.
    pub fn to_sdt(&self) -> Result<Sdt, LearnError> {
        let mut builder = SdtBuilder::new(self.input.clone(), self.output.clone());
        let mut ids = vec![usize::MAX; self.nodes.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([0]);
        ids[0] = builder.add_state("root");
        while let Some(n) = queue.pop_front() {
            order.push(n);
            for e in self.nodes[n].children.values() {
                if ids[e.target] == usize::MAX {
                    debug_assert!(self.nodes[e.target].alive);
                    ids[e.target] = builder.add_state(format!("n{}", e.target));
                    queue.push_back(e.target);
                }
            }
        }
        builder.set_initial(ids[0]);
        for &n in &order {
            for (&a, e) in &self.nodes[n].children {
                builder.add_transition(ids[n], a, ids[e.target], e.out.clone());
            }
            if let Some(acc) = &self.nodes[n].accept {
                builder.add_accept(ids[n], acc.clone());
            }
        }
        Ok(builder.build()?.normalized())
    }
}
