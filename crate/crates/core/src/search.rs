//! Rule-table graph search and its two classic instances, Bayes-Ball and
//! directed reachability.
//!
//! A search walks *ways*: sequences of edges where each vertex may be
//! entered at most once through an incoming edge and once through an outgoing
//! edge. Which step is allowed from `V` to a neighbour `W` is decided by a
//! [`RuleTable`] that only sees the two vertices and the shape of the step.
//! Every search here is iterative with an explicit stack.

use alloc::vec::Vec;

use crate::error::{check_disjoint, check_universe, QueryError};
use crate::graph::{Dag, EdgeMask};
use crate::nodeset::NodeSet;

/// Shape of a two-edge step `… V … W` as seen from the middle vertex `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// `init V -> W`: `V` is a start vertex, `W` a child.
    InitChild,
    /// `init V <- W`: `V` is a start vertex, `W` a parent.
    InitParent,
    /// `-> V -> W`
    Chain,
    /// `<- V <- W`
    BackChain,
    /// `<- V -> W`
    Fork,
    /// `-> V <- W`
    Collider,
}

impl Case {
    pub const ALL: [Case; 6] = [
        Case::InitChild,
        Case::InitParent,
        Case::Chain,
        Case::BackChain,
        Case::Fork,
        Case::Collider,
    ];

    /// Whether `W` is a child of `V` in this case.
    pub fn to_child(self) -> bool {
        matches!(self, Case::InitChild | Case::Chain | Case::Fork)
    }
}

/// What a rule allows for `W`: continue the search from it, and/or report it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Step {
    pub cont: bool,
    pub yields: bool,
}

impl Step {
    pub const NONE: Step = Step {
        cont: false,
        yields: false,
    };
    pub const BOTH: Step = Step {
        cont: true,
        yields: true,
    };

    pub fn new(cont: bool, yields: bool) -> Step {
        Step { cont, yields }
    }

    /// `cont` and `yields` both equal to `cond`.
    pub fn when(cond: bool) -> Step {
        Step {
            cont: cond,
            yields: cond,
        }
    }
}

/// A static continue/yield table over the six step shapes.
///
/// Implementations must be pure in `(case, v, w)`: the same arguments always
/// give the same answer, independent of traversal history.
pub trait RuleTable {
    fn step(&self, case: Case, v: usize, w: usize) -> Step;
}

impl<F: Fn(Case, usize, usize) -> Step> RuleTable for F {
    fn step(&self, case: Case, v: usize, w: usize) -> Step {
        self(case, v, w)
    }
}

/// Work counters for a search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Entries into the per-vertex visit routine.
    pub visits: usize,
    /// Adjacency entries inspected.
    pub edge_checks: usize,
}

impl SearchStats {
    pub fn add(&mut self, other: SearchStats) {
        self.visits += other.visits;
        self.edge_checks += other.edge_checks;
    }

    pub fn total(&self) -> usize {
        self.visits + self.edge_checks
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arrival {
    Init,
    /// Entered through an edge `-> V`.
    Incoming,
    /// Entered through an edge `V ->`, walking against it (`<- V`).
    Outgoing,
}

/// Runs the rule-table search from `start` and returns every yielded vertex
/// that is not itself a start vertex.
pub fn generic_search<R: RuleTable + ?Sized>(g: &Dag, start: &NodeSet, rules: &R, mask: &EdgeMask) -> NodeSet {
    generic_search_with_stats(g, start, rules, mask).0
}

pub fn generic_search_with_stats<R: RuleTable + ?Sized>(
    g: &Dag,
    start: &NodeSet,
    rules: &R,
    mask: &EdgeMask,
) -> (NodeSet, SearchStats) {
    let n = g.node_count();
    let mut stats = SearchStats::default();
    let mut seen_inc = NodeSet::new(n);
    let mut seen_out = NodeSet::new(n);
    let mut result = NodeSet::new(n);
    let mut stack: Vec<(usize, Arrival)> = start.iter().map(|v| (v, Arrival::Init)).collect();

    while let Some((v, arrival)) = stack.pop() {
        stats.visits += 1;
        let child_case = match arrival {
            Arrival::Init => Case::InitChild,
            Arrival::Incoming => Case::Chain,
            Arrival::Outgoing => Case::Fork,
        };
        for &w in g.children(v) {
            stats.edge_checks += 1;
            if !mask.allows(v, w) {
                continue;
            }
            let step = rules.step(child_case, v, w);
            if step.yields {
                result.insert(w);
            }
            if step.cont && seen_inc.insert(w) {
                stack.push((w, Arrival::Incoming));
            }
        }
        let parent_case = match arrival {
            Arrival::Init => Case::InitParent,
            Arrival::Incoming => Case::Collider,
            Arrival::Outgoing => Case::BackChain,
        };
        for &w in g.parents(v) {
            stats.edge_checks += 1;
            if !mask.allows(w, v) {
                continue;
            }
            let step = rules.step(parent_case, v, w);
            if step.yields {
                result.insert(w);
            }
            if step.cont && seen_out.insert(w) {
                stack.push((w, Arrival::Outgoing));
            }
        }
    }
    result.difference_with(start);
    (result, stats)
}

/// The Bayes-Ball continue/yield table for conditioning set `z`.
#[derive(Debug, Clone, Copy)]
pub struct BayesBallRules<'a> {
    pub z: &'a NodeSet,
}

impl RuleTable for BayesBallRules<'_> {
    fn step(&self, case: Case, v: usize, _w: usize) -> Step {
        match case {
            Case::InitChild | Case::InitParent => Step::BOTH,
            Case::Chain | Case::BackChain | Case::Fork => Step::when(!self.z.contains(v)),
            Case::Collider => Step::when(self.z.contains(v)),
        }
    }
}

/// Every vertex reached by Bayes-Ball from `x` given `z` in the masked graph,
/// including `x` itself. A vertex outside `x ∪ z` is d-connected to `x`
/// given `z` exactly when it is in the returned set.
pub fn bayes_ball(g: &Dag, x: &NodeSet, z: &NodeSet, mask: &EdgeMask) -> Result<NodeSet, QueryError> {
    Ok(bayes_ball_with_stats(g, x, z, mask)?.0)
}

pub fn bayes_ball_with_stats(
    g: &Dag,
    x: &NodeSet,
    z: &NodeSet,
    mask: &EdgeMask,
) -> Result<(NodeSet, SearchStats), QueryError> {
    let n = g.node_count();
    check_universe(n, x)?;
    check_universe(n, z)?;
    check_disjoint(x, z, "X", "Z")?;
    let mut stats = SearchStats::default();
    let mut seen_inc = NodeSet::new(n);
    let mut seen_out = NodeSet::new(n);
    let mut stack = Vec::new();
    for v in x.iter() {
        seen_out.insert(v);
        stack.push((v, Arrival::Outgoing));
    }
    while let Some((v, arrival)) = stack.pop() {
        stats.visits += 1;
        let in_z = z.contains(v);
        if !in_z {
            for &c in g.children(v) {
                stats.edge_checks += 1;
                if mask.allows(v, c) && seen_inc.insert(c) {
                    stack.push((c, Arrival::Incoming));
                }
            }
        }
        let up = match arrival {
            Arrival::Incoming => in_z,
            _ => !in_z,
        };
        if up {
            for &p in g.parents(v) {
                stats.edge_checks += 1;
                if mask.allows(p, v) && seen_out.insert(p) {
                    stack.push((p, Arrival::Outgoing));
                }
            }
        }
    }
    seen_inc.union_with(&seen_out);
    Ok((seen_inc, stats))
}

/// `(a ⟂ b | c)` in the masked graph. The three sets must be pairwise disjoint.
pub fn d_separated(g: &Dag, a: &NodeSet, b: &NodeSet, c: &NodeSet, mask: &EdgeMask) -> Result<bool, QueryError> {
    check_universe(g.node_count(), b)?;
    check_disjoint(a, b, "A", "B")?;
    check_disjoint(b, c, "B", "C")?;
    Ok(bayes_ball(g, a, c, mask)?.is_disjoint(b))
}

/// Vertices reachable from `start` along directed edges. Vertices of `stop`
/// that are not start vertices are reported when reached but not expanded.
pub fn directed_reachable(g: &Dag, start: &NodeSet, stop: &NodeSet) -> NodeSet {
    directed_reachable_with_stats(g, start, stop).0
}

pub fn directed_reachable_with_stats(g: &Dag, start: &NodeSet, stop: &NodeSet) -> (NodeSet, SearchStats) {
    let mut stats = SearchStats::default();
    let mut seen = start.clone();
    let mut stack: Vec<usize> = start.iter().collect();
    while let Some(v) = stack.pop() {
        stats.visits += 1;
        for &c in g.children(v) {
            stats.edge_checks += 1;
            if seen.insert(c) && !stop.contains(c) {
                stack.push(c);
            }
        }
    }
    (seen, stats)
}
