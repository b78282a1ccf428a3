//! Finding and verifying front-door adjustment sets in linear time.
//!
//! The finder proceeds in three steps over a query `(X, Y, I, R)`:
//!
//! 1. `Z(i)`: the members of `R` with no open back-door path from `X`, i.e.
//!    those d-separated from `X` once the edges leaving `X` are removed.
//! 2. `Z(ii)`: the members of `Z(i)` that are not *forbidden*. A vertex is
//!    forbidden when it is outside `Z(i)`, a child of `Y`, or the start of an
//!    open back-door way into `Y` given `X` whose inner vertices are all
//!    forbidden. They are found by one backward search from `Y`.
//! 3. `Z(ii)` is returned iff it contains `I` and blocks every directed path
//!    from `X` to `Y`.
//!
//! `Z(ii)` is the largest candidate: every front-door set between `I` and `R`
//! is a subset of it.

use alloc::vec::Vec;

use crate::error::{check_disjoint, check_universe, QueryError};
use crate::graph::{Dag, EdgeMask};
use crate::nodeset::NodeSet;
use crate::search::{
    bayes_ball_with_stats, directed_reachable_with_stats, generic_search_with_stats, Case, RuleTable, SearchStats, Step,
};

/// Validated inputs `(X, Y, I, R)` of a front-door query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdQuery {
    x: NodeSet,
    y: NodeSet,
    i: NodeSet,
    r: NodeSet,
}

impl FdQuery {
    /// Checks that `X` and `Y` are non-empty and disjoint, `I ⊆ R`,
    /// `R ∩ (X ∪ Y) = ∅` and that `R` holds no latent node.
    pub fn new(g: &Dag, x: NodeSet, y: NodeSet, i: NodeSet, r: NodeSet) -> Result<Self, QueryError> {
        let n = g.node_count();
        for s in [&x, &y, &i, &r] {
            check_universe(n, s)?;
        }
        if x.is_empty() {
            return Err(QueryError::EmptySet("X"));
        }
        if y.is_empty() {
            return Err(QueryError::EmptySet("Y"));
        }
        check_disjoint(&x, &y, "X", "Y")?;
        check_disjoint(&r, &x, "R", "X")?;
        check_disjoint(&r, &y, "R", "Y")?;
        check_disjoint(&i, &x, "I", "X")?;
        check_disjoint(&i, &y, "I", "Y")?;
        if let Some(node) = i.difference(&r).first() {
            return Err(QueryError::IncludeOutsideRestrict { node });
        }
        if let Some(node) = r.iter().find(|&v| g.is_latent(v)) {
            return Err(QueryError::LatentCandidate { node });
        }
        Ok(FdQuery { x, y, i, r })
    }

    /// `I = ∅` and `R` = every observed node outside `X ∪ Y`.
    pub fn with_defaults(g: &Dag, x: NodeSet, y: NodeSet) -> Result<Self, QueryError> {
        let i = g.empty_set();
        let r = default_restrict(g, &x, &y);
        Self::new(g, x, y, i, r)
    }

    pub fn x(&self) -> &NodeSet {
        &self.x
    }
    pub fn y(&self) -> &NodeSet {
        &self.y
    }
    pub fn include(&self) -> &NodeSet {
        &self.i
    }
    pub fn restrict(&self) -> &NodeSet {
        &self.r
    }

    /// Same `X` and `Y` with new bounds `I ⊆ Z ⊆ R`. The bounds are assumed
    /// to satisfy the invariants already checked for `self`.
    pub(crate) fn with_bounds(&self, i: NodeSet, r: NodeSet) -> FdQuery {
        debug_assert!(i.is_subset(&r) && r.is_subset(&self.r.union(&self.i)));
        FdQuery {
            x: self.x.clone(),
            y: self.y.clone(),
            i,
            r,
        }
    }
}

/// Observed nodes outside `X ∪ Y`.
pub fn default_restrict(g: &Dag, x: &NodeSet, y: &NodeSet) -> NodeSet {
    let mut r = g.observed_nodes();
    if x.universe() == r.universe() && y.universe() == r.universe() {
        r.difference_with(x);
        r.difference_with(y);
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FdResult {
    Found(NodeSet),
    NoneExists,
}

impl FdResult {
    pub fn set(&self) -> Option<&NodeSet> {
        match self {
            FdResult::Found(z) => Some(z),
            FdResult::NoneExists => None,
        }
    }

    pub fn into_set(self) -> Option<NodeSet> {
        match self {
            FdResult::Found(z) => Some(z),
            FdResult::NoneExists => None,
        }
    }

    pub fn exists(&self) -> bool {
        matches!(self, FdResult::Found(_))
    }
}

/// Intermediate sets and work counters of one [`find_fd`] run.
#[derive(Debug, Clone)]
pub struct FindTrace {
    pub zi: NodeSet,
    pub zii: NodeSet,
    pub stats: SearchStats,
}

/// Members of `R` d-separated from `X` in the graph without edges out of `X`.
pub fn compute_zi(g: &Dag, q: &FdQuery) -> NodeSet {
    compute_zi_with_stats(g, q).0
}

fn compute_zi_with_stats(g: &Dag, q: &FdQuery) -> (NodeSet, SearchStats) {
    let (reached, stats) = bayes_ball_with_stats(g, &q.x, &g.empty_set(), &EdgeMask::underline(&q.x))
        .expect("X is disjoint from the empty set");
    (q.r.difference(&reached), stats)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Via {
    Inc,
    Out,
}

/// Non-forbidden members of `zi`, by backward search from `Y` over forbidden
/// vertices.
///
/// Parents reached on a non-back-door way that are not yet known to be
/// forbidden are remembered and expanded once they become forbidden.
pub fn compute_zii(g: &Dag, q: &FdQuery, zi: &NodeSet) -> NodeSet {
    compute_zii_with_stats(g, q, zi).0
}

fn compute_zii_with_stats(g: &Dag, q: &FdQuery, zi: &NodeSet) -> (NodeSet, SearchStats) {
    let n = g.node_count();
    let mut stats = SearchStats::default();
    let mut forbidden = zi.complement();
    let mut seen_inc = NodeSet::new(n);
    let mut seen_out = NodeSet::new(n);
    let mut continue_later = NodeSet::new(n);
    let mut stack: Vec<(usize, Via)> = Vec::new();
    for y in q.y.iter() {
        if seen_out.insert(y) {
            stack.push((y, Via::Out));
        }
    }
    while let Some((v, via)) = stack.pop() {
        stats.visits += 1;
        forbidden.insert(v);
        if !q.x.contains(v) {
            for &c in g.children(v) {
                stats.edge_checks += 1;
                if seen_inc.insert(c) {
                    stack.push((c, Via::Inc));
                }
            }
            if via == Via::Out {
                for &p in g.parents(v) {
                    stats.edge_checks += 1;
                    if seen_out.contains(p) {
                        continue;
                    }
                    if forbidden.contains(p) {
                        seen_out.insert(p);
                        stack.push((p, Via::Out));
                    } else {
                        continue_later.insert(p);
                    }
                }
            }
        }
        if continue_later.contains(v) && seen_out.insert(v) {
            stack.push((v, Via::Out));
        }
    }
    (zi.difference(&forbidden), stats)
}

/// Rule table marking forbidden vertices; yields those reached through an
/// incoming edge.
struct ForbiddenRules<'a> {
    x: &'a NodeSet,
    zi: &'a NodeSet,
    an_y: &'a NodeSet,
}

impl RuleTable for ForbiddenRules<'_> {
    fn step(&self, case: Case, v: usize, w: usize) -> Step {
        let vx = self.x.contains(v);
        let wzi = self.zi.contains(w);
        match case {
            Case::InitChild => Step::BOTH,
            Case::InitParent => Step::new(!wzi, false),
            Case::Chain | Case::Fork => Step::when(!vx),
            Case::BackChain => Step::new(!vx && !wzi, false),
            Case::Collider => Step::new(self.an_y.contains(v) && !wzi, false),
        }
    }
}

/// Same contract as [`compute_zii`], implemented as a single rule-table search
/// after computing the ancestors of `Y`.
pub fn compute_zii_tabled(g: &Dag, q: &FdQuery, zi: &NodeSet) -> NodeSet {
    let an_y = g.ancestors(&q.y);
    let rules = ForbiddenRules {
        x: &q.x,
        zi,
        an_y: &an_y,
    };
    let (marked, _) = generic_search_with_stats(g, &q.y, &rules, &EdgeMask::none(g.node_count()));
    zi.difference(&marked)
}

/// Finds the maximal front-door set `Z` with `I ⊆ Z ⊆ R`, or reports that
/// none exists.
pub fn find_fd(g: &Dag, q: &FdQuery) -> FdResult {
    find_fd_traced(g, q).0
}

pub fn find_fd_traced(g: &Dag, q: &FdQuery) -> (FdResult, FindTrace) {
    let (zi, mut stats) = compute_zi_with_stats(g, q);
    let (zii, s) = compute_zii_with_stats(g, q, &zi);
    stats.add(s);
    debug_assert!(zii.is_disjoint(&q.x));
    let result = if !q.i.is_subset(&zii) {
        FdResult::NoneExists
    } else {
        let stop = zii.union(&q.y);
        let (reached, s) = directed_reachable_with_stats(g, &q.x, &stop);
        stats.add(s);
        if reached.is_disjoint(&q.y) {
            FdResult::Found(zii.clone())
        } else {
            FdResult::NoneExists
        }
    };
    (result, FindTrace { zi, zii, stats })
}

/// Whether `z` is a front-door set relative to `(x, y)`.
///
/// Runs the finder with `I = R = z`, which returns `z` exactly when `z`
/// satisfies the criterion.
pub fn verify_fd(g: &Dag, x: &NodeSet, y: &NodeSet, z: &NodeSet) -> Result<bool, QueryError> {
    check_universe(g.node_count(), z)?;
    check_disjoint(x, z, "X", "Z")?;
    check_disjoint(y, z, "Y", "Z")?;
    let q = FdQuery::new(g, x.clone(), y.clone(), z.clone(), z.clone())?;
    Ok(find_fd(g, &q).set() == Some(z))
}
