//! Minimal front-door sets.
//!
//! Starting from the maximal set `Z(ii)`, three searches keep only what is
//! needed:
//!
//! * `Z_An`: members of `Z(ii)` that reach `Y` by a directed path avoiding
//!   `X` and the rest of `Z(ii)`;
//! * `Z_XY`: members of `Z_An` that `X` reaches directly, i.e. without
//!   passing another member of `Z_An` or of `I`;
//! * `Z_ZY`: members of `Z_An` needed to block the back-door paths from
//!   `I ∪ Z_XY` to `Y`.
//!
//! `I ∪ Z_XY ∪ Z_ZY` is a front-door set that is minimal: removing any of its
//! elements outside `I` breaks the criterion.

use crate::find::{find_fd_traced, FdQuery, FdResult};
use crate::graph::{Dag, EdgeMask};
use crate::nodeset::NodeSet;
use crate::search::{generic_search, Case, RuleTable, Step};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalDecomposition {
    pub zii: NodeSet,
    pub z_an: NodeSet,
    pub z_xy: NodeSet,
    pub z_zy: NodeSet,
    pub minimal: NodeSet,
}

struct AncestorRules<'a> {
    blocked: NodeSet,
    zii: &'a NodeSet,
}

impl RuleTable for AncestorRules<'_> {
    fn step(&self, case: Case, _v: usize, w: usize) -> Step {
        match case {
            Case::InitParent | Case::BackChain => Step::new(!self.blocked.contains(w), self.zii.contains(w)),
            _ => Step::NONE,
        }
    }
}

/// Members of `zii` that are ancestors of `Y` in the graph with `X` and the
/// other members of `zii` removed.
pub fn compute_z_an(g: &Dag, q: &FdQuery, zii: &NodeSet) -> NodeSet {
    let blocked = q.x().union(q.y()).union(zii);
    generic_search(
        g,
        q.y(),
        &AncestorRules { blocked, zii },
        &EdgeMask::none(g.node_count()),
    )
}

struct ForwardRules<'a> {
    blocked: NodeSet,
    z_an: &'a NodeSet,
}

impl RuleTable for ForwardRules<'_> {
    fn step(&self, case: Case, _v: usize, w: usize) -> Step {
        match case {
            Case::InitChild | Case::Chain => Step::new(!self.blocked.contains(w), self.z_an.contains(w)),
            _ => Step::NONE,
        }
    }
}

/// Members of `z_an` reached from `X` by a directed path whose inner
/// vertices avoid `X ∪ Y ∪ I ∪ z_an`.
pub fn compute_z_xy(g: &Dag, q: &FdQuery, z_an: &NodeSet) -> NodeSet {
    let blocked = q.x().union(q.y()).union(q.include()).union(z_an);
    generic_search(
        g,
        q.x(),
        &ForwardRules { blocked, z_an },
        &EdgeMask::none(g.node_count()),
    )
}

struct BlockerRules<'a> {
    x: &'a NodeSet,
    /// `X ∪ I ∪ Z_XY`
    no_back: NodeSet,
    /// `I ∪ Z_An`
    kept: NodeSet,
    z_an: &'a NodeSet,
}

impl RuleTable for BlockerRules<'_> {
    fn step(&self, case: Case, v: usize, w: usize) -> Step {
        let w_an = self.z_an.contains(w);
        let v_kept = self.kept.contains(v);
        match case {
            Case::InitChild => Step::NONE,
            Case::InitParent | Case::BackChain => Step::new(!self.no_back.contains(w), w_an),
            Case::Chain | Case::Fork => Step::new(!self.x.contains(w) && !v_kept, w_an && !v_kept),
            Case::Collider => Step::new(v_kept && !self.no_back.contains(w), v_kept && w_an),
        }
    }
}

/// Members of `z_an` that block back-door paths from `I ∪ z_xy` into `Y`.
pub fn compute_z_zy(g: &Dag, q: &FdQuery, z_an: &NodeSet, z_xy: &NodeSet) -> NodeSet {
    let start = q.include().union(z_xy);
    let rules = BlockerRules {
        x: q.x(),
        no_back: q.x().union(&start),
        kept: q.include().union(z_an),
        z_an,
    };
    generic_search(g, &start, &rules, &EdgeMask::none(g.node_count()))
}

/// All intermediate sets of the minimal-set construction, or `None` when no
/// front-door set exists for `q`.
pub fn minimal_decomposition(g: &Dag, q: &FdQuery) -> Option<MinimalDecomposition> {
    let (result, trace) = find_fd_traced(g, q);
    if let FdResult::NoneExists = result {
        return None;
    }
    let zii = trace.zii;
    let z_an = compute_z_an(g, q, &zii);
    let z_xy = compute_z_xy(g, q, &z_an);
    let z_zy = compute_z_zy(g, q, &z_an, &z_xy);
    let mut minimal = q.include().union(&z_xy);
    minimal.union_with(&z_zy);
    Some(MinimalDecomposition {
        zii,
        z_an,
        z_xy,
        z_zy,
        minimal,
    })
}

/// A minimal front-door set `Z` with `I ⊆ Z ⊆ R`, if any front-door set
/// exists.
pub fn find_minimal_fd(g: &Dag, q: &FdQuery) -> FdResult {
    match minimal_decomposition(g, q) {
        Some(d) => FdResult::Found(d.minimal),
        None => FdResult::NoneExists,
    }
}
