//! Exponential reference implementations for small graphs.
//!
//! Everything here works from first principles: paths are enumerated one by
//! one over a private copy of the adjacency, and no function of the search
//! modules is used. They exist to cross-check the linear-time algorithms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::QueryError;
use crate::graph::{Dag, EdgeMask};
use crate::nodeset::NodeSet;

pub const MAX_NODES: usize = 14;
pub const MAX_FREE_CANDIDATES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooManyNodes { nodes: usize, max: usize },
    TooManyCandidates { candidates: usize, max: usize },
    Query(QueryError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyNodes { nodes, max } => {
                write!(f, "brute-force oracle limited to {max} nodes, graph has {nodes}")
            }
            OracleError::TooManyCandidates { candidates, max } => {
                write!(
                    f,
                    "brute-force oracle limited to {max} free candidates, got {candidates}"
                )
            }
            OracleError::Query(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for OracleError {}

impl From<QueryError> for OracleError {
    fn from(e: QueryError) -> Self {
        OracleError::Query(e)
    }
}

/// Plain adjacency lists of the graph after deleting masked edges.
struct Adjacency {
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

impl Adjacency {
    fn new(g: &Dag, mask: &EdgeMask) -> Self {
        let n = g.node_count();
        let mut children = vec![Vec::new(); n];
        let mut parents = vec![Vec::new(); n];
        for (u, v) in g.edges() {
            if mask.allows(u, v) {
                children[u].push(v);
                parents[v].push(u);
            }
        }
        Adjacency { children, parents }
    }

    /// `descendants[v][w]`: `w` is `v` or reachable from `v`.
    fn descendants(&self) -> Vec<Vec<bool>> {
        let n = self.children.len();
        let mut de = vec![vec![false; n]; n];
        for (v, row) in de.iter_mut().enumerate() {
            let mut todo = vec![v];
            row[v] = true;
            while let Some(u) = todo.pop() {
                for &c in &self.children[u] {
                    if !row[c] {
                        row[c] = true;
                        todo.push(c);
                    }
                }
            }
        }
        de
    }
}

fn check_size(g: &Dag) -> Result<(), OracleError> {
    if g.node_count() > MAX_NODES {
        return Err(OracleError::TooManyNodes {
            nodes: g.node_count(),
            max: MAX_NODES,
        });
    }
    Ok(())
}

fn check_sets(g: &Dag, sets: &[&NodeSet]) -> Result<(), OracleError> {
    for s in sets {
        if s.universe() != g.node_count() {
            return Err(QueryError::UniverseMismatch {
                expected: g.node_count(),
                found: s.universe(),
            }
            .into());
        }
    }
    Ok(())
}

fn overlap(a: &NodeSet, b: &NodeSet, first: &'static str, second: &'static str) -> Result<(), OracleError> {
    if let Some(node) = a.iter().find(|&v| b.contains(v)) {
        return Err(QueryError::Overlap { first, second, node }.into());
    }
    Ok(())
}

struct PathSearch<'a> {
    adj: &'a Adjacency,
    de: Vec<Vec<bool>>,
    c: &'a NodeSet,
    targets: &'a NodeSet,
    on_path: Vec<bool>,
}

impl PathSearch<'_> {
    /// Whether the inner vertex `v`, entered along an edge pointing into it
    /// iff `arrived_into`, lets a path continue along an edge pointing into
    /// `v` iff `leave_into`.
    fn passes(&self, v: usize, arrived_into: bool, leave_into: bool) -> bool {
        if arrived_into && leave_into {
            self.de[v].iter().enumerate().any(|(w, &d)| d && self.c.contains(w))
        } else {
            !self.c.contains(v)
        }
    }

    /// Extends the simple path ending at `v`. `arrived_into` is `None` at the
    /// first vertex.
    fn open_path_from(&mut self, v: usize, arrived_into: Option<bool>) -> bool {
        if arrived_into.is_some() && self.targets.contains(v) {
            return true;
        }
        self.on_path[v] = true;
        let mut steps: Vec<(usize, bool)> = Vec::new();
        // Leaving v towards a child means the edge points away from v and
        // into the next vertex; towards a parent the edge points into v.
        for &c in &self.adj.children[v] {
            steps.push((c, false));
        }
        for &p in &self.adj.parents[v] {
            steps.push((p, true));
        }
        let mut found = false;
        for (w, into_v) in steps {
            if self.on_path[w] {
                continue;
            }
            if let Some(a) = arrived_into {
                if !self.passes(v, a, into_v) {
                    continue;
                }
            }
            if self.open_path_from(w, Some(!into_v)) {
                found = true;
                break;
            }
        }
        self.on_path[v] = false;
        found
    }
}

/// `(a ⟂ b | c)` in `g`, decided by enumerating simple paths.
pub fn dsep_bruteforce(g: &Dag, a: &NodeSet, b: &NodeSet, c: &NodeSet) -> Result<bool, OracleError> {
    dsep_bruteforce_masked(g, a, b, c, &EdgeMask::none(g.node_count()))
}

/// `(a ⟂ b | c)` in `g` with the edges rejected by `mask` deleted.
pub fn dsep_bruteforce_masked(
    g: &Dag,
    a: &NodeSet,
    b: &NodeSet,
    c: &NodeSet,
    mask: &EdgeMask,
) -> Result<bool, OracleError> {
    check_size(g)?;
    check_sets(g, &[a, b, c])?;
    overlap(a, b, "A", "B")?;
    overlap(a, c, "A", "C")?;
    overlap(b, c, "B", "C")?;
    let adj = Adjacency::new(g, mask);
    let mut search = PathSearch {
        de: adj.descendants(),
        adj: &adj,
        c,
        targets: b,
        on_path: vec![false; g.node_count()],
    };
    for s in a.iter() {
        if search.open_path_from(s, None) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether some directed path from `x` to `y` avoids `z`.
fn unblocked_causal_path(g: &Dag, x: &NodeSet, y: &NodeSet, z: &NodeSet) -> bool {
    fn walk(adj: &Adjacency, v: usize, y: &NodeSet, z: &NodeSet, path: &mut Vec<usize>) -> bool {
        if y.contains(v) {
            return true;
        }
        for &c in &adj.children[v] {
            if z.contains(c) || path.contains(&c) {
                continue;
            }
            path.push(c);
            let hit = walk(adj, c, y, z, path);
            path.pop();
            if hit {
                return true;
            }
        }
        false
    }
    let adj = Adjacency::new(g, &EdgeMask::none(g.node_count()));
    x.iter().any(|s| walk(&adj, s, y, z, &mut vec![s]))
}

/// The front-door criterion for `z` relative to `(x, y)`, checked literally.
pub fn fd_criterion_bruteforce(g: &Dag, x: &NodeSet, y: &NodeSet, z: &NodeSet) -> Result<bool, OracleError> {
    check_size(g)?;
    check_sets(g, &[x, y, z])?;
    overlap(x, y, "X", "Y")?;
    overlap(x, z, "X", "Z")?;
    overlap(y, z, "Y", "Z")?;
    if let Some(node) = z.iter().find(|&v| g.is_latent(v)) {
        return Err(QueryError::LatentCandidate { node }.into());
    }
    if unblocked_causal_path(g, x, y, z) {
        return Ok(false);
    }
    let empty = g.empty_set();
    if !dsep_bruteforce_masked(g, z, x, &empty, &EdgeMask::underline(x))? {
        return Ok(false);
    }
    dsep_bruteforce_masked(g, z, y, x, &EdgeMask::underline(z))
}

/// Every set `z` with `i ⊆ z ⊆ r` satisfying the criterion, in ascending
/// order.
pub fn fd_sets_bruteforce(
    g: &Dag,
    x: &NodeSet,
    y: &NodeSet,
    i: &NodeSet,
    r: &NodeSet,
) -> Result<Vec<NodeSet>, OracleError> {
    check_size(g)?;
    check_sets(g, &[x, y, i, r])?;
    if let Some(node) = i.iter().find(|&v| !r.contains(v)) {
        return Err(QueryError::IncludeOutsideRestrict { node }.into());
    }
    let free: Vec<usize> = r.iter().filter(|&v| !i.contains(v)).collect();
    if free.len() > MAX_FREE_CANDIDATES {
        return Err(OracleError::TooManyCandidates {
            candidates: free.len(),
            max: MAX_FREE_CANDIDATES,
        });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << free.len()) {
        let mut z = i.clone();
        for (k, &v) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                z.insert(v);
            }
        }
        if fd_criterion_bruteforce(g, x, y, &z)? {
            out.push(z);
        }
    }
    out.sort();
    Ok(out)
}
