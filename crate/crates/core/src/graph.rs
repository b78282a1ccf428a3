//! Immutable causal DAGs with latent flags, plus edge-deletion views.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::nodeset::NodeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// The directed edge with this ordinal (0-based, in insertion order)
    /// is the first one whose addition closes a directed cycle.
    Cycle {
        edge: usize,
    },
    SelfLoop {
        edge: usize,
    },
    DuplicateEdge {
        edge: usize,
    },
    /// A fresh latent name produced by bidirected expansion is already taken.
    NameCollision(String),
    /// An index-based edge refers to a node that does not exist.
    NodeOutOfRange {
        node: usize,
        node_count: usize,
    },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Cycle { edge } => write!(f, "edge #{edge} closes a directed cycle"),
            GraphError::SelfLoop { edge } => write!(f, "edge #{edge} is a self-loop"),
            GraphError::DuplicateEdge { edge } => write!(f, "edge #{edge} is a duplicate"),
            GraphError::NameCollision(name) => {
                write!(f, "fresh latent name `{name}` collides with an existing node")
            }
            GraphError::NodeOutOfRange { node, node_count } => {
                write!(f, "node index {node} out of range (graph has {node_count} nodes)")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// Kind of a recorded edge, used to map validation failures back to input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Directed,
    Bidirected,
}

/// Collects nodes and edges before validation.
///
/// Nodes receive indices in first-appearance order. Bidirected edges are kept
/// aside and expanded into fresh latent parents when [`DagBuilder::build`] runs.
#[derive(Debug, Default, Clone)]
pub struct DagBuilder {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    latent: Vec<bool>,
    // (from, to, kind); ordinal = position
    edges: Vec<(usize, usize, EdgeKind)>,
}

impl DagBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pre-sized builder with nodes named by `names`, in order.
    pub fn with_nodes<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut b = Self::new();
        for n in names {
            b.node(n);
        }
        b
    }

    /// Index of `name`, inserting it if new.
    pub fn node<S: Into<String>>(&mut self, name: S) -> usize {
        let name = name.into();
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        self.latent.push(false);
        i
    }

    pub fn latent<S: Into<String>>(&mut self, name: S) -> usize {
        let i = self.node(name);
        self.latent[i] = true;
        i
    }

    /// Adds `from -> to`; returns the edge ordinal.
    pub fn edge(&mut self, from: &str, to: &str) -> usize {
        let (a, b) = (self.node(from), self.node(to));
        self.push(a, b, EdgeKind::Directed)
    }

    /// Adds `a <-> b`; returns the edge ordinal.
    pub fn bidirected(&mut self, a: &str, b: &str) -> usize {
        let (a, b) = (self.node(a), self.node(b));
        self.push(a, b, EdgeKind::Bidirected)
    }

    pub fn edge_indices(&mut self, from: usize, to: usize) -> usize {
        self.push(from, to, EdgeKind::Directed)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    fn push(&mut self, a: usize, b: usize, kind: EdgeKind) -> usize {
        self.edges.push((a, b, kind));
        self.edges.len() - 1
    }

    /// Expands bidirected edges, then validates and freezes the graph.
    pub fn build(self) -> Result<Dag, GraphError> {
        expand_bidirected(self)?.finish()
    }
}

/// Replaces every `A <-> B` by `A <- U<k> -> B` with a fresh latent `U<k>`,
/// where `k` counts bidirected edges in input order. Fresh nodes are appended
/// after all named nodes.
pub fn expand_bidirected(mut raw: DagBuilder) -> Result<Expanded, GraphError> {
    let n = raw.names.len();
    for &(a, b, _) in &raw.edges {
        if a >= n || b >= n {
            return Err(GraphError::NodeOutOfRange {
                node: a.max(b),
                node_count: n,
            });
        }
    }
    let mut directed = Vec::with_capacity(raw.edges.len());
    let mut origin = Vec::with_capacity(raw.edges.len());
    let mut fresh = 0usize;
    let edges = core::mem::take(&mut raw.edges);
    for (ord, (a, b, kind)) in edges.into_iter().enumerate() {
        match kind {
            EdgeKind::Directed => {
                directed.push((a, b));
                origin.push(ord);
            }
            EdgeKind::Bidirected => {
                if a == b {
                    return Err(GraphError::SelfLoop { edge: ord });
                }
                let name = format!("U{fresh}");
                fresh += 1;
                if raw.index.contains_key(&name) {
                    return Err(GraphError::NameCollision(name));
                }
                let u = raw.latent(name);
                directed.push((u, a));
                origin.push(ord);
                directed.push((u, b));
                origin.push(ord);
            }
        }
    }
    Ok(Expanded {
        names: raw.names,
        latent: raw.latent,
        edges: directed,
        origin,
    })
}

/// Output of [`expand_bidirected`]: a purely directed edge list whose entries
/// still remember which input edge produced them.
#[derive(Debug, Clone)]
pub struct Expanded {
    names: Vec<String>,
    latent: Vec<bool>,
    edges: Vec<(usize, usize)>,
    origin: Vec<usize>,
}

impl Expanded {
    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn finish(self) -> Result<Dag, GraphError> {
        let n = self.names.len();
        let mut seen = BTreeSet::new();
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                return Err(GraphError::SelfLoop { edge: self.origin[k] });
            }
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge { edge: self.origin[k] });
            }
        }
        let dag = Dag::from_parts(self.names, self.latent, &self.edges);
        if dag.topological_order().is_none() {
            let k = first_cycle_prefix(n, &self.edges);
            return Err(GraphError::Cycle { edge: self.origin[k] });
        }
        Ok(dag)
    }
}

/// Smallest `k` such that `edges[..=k]` contains a cycle. Caller guarantees
/// that the full list is cyclic.
fn first_cycle_prefix(n: usize, edges: &[(usize, usize)]) -> usize {
    let (mut lo, mut hi) = (0usize, edges.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if kahn_is_acyclic(n, &edges[..=mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

fn kahn_is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        indeg[b] += 1;
        out[a].push(b);
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut done = 0;
    while let Some(v) = stack.pop() {
        done += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    done == n
}

/// An immutable DAG. Adjacency is stored in CSR form, each list sorted by
/// node index.
#[derive(Clone, PartialEq, Eq)]
pub struct Dag {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    latent: Vec<bool>,
    par_off: Vec<usize>,
    par: Vec<usize>,
    ch_off: Vec<usize>,
    ch: Vec<usize>,
}

impl Dag {
    fn from_parts(names: Vec<String>, latent: Vec<bool>, edges: &[(usize, usize)]) -> Dag {
        let n = names.len();
        let (par_off, par) = csr(n, edges.iter().map(|&(a, b)| (b, a)));
        let (ch_off, ch) = csr(n, edges.iter().copied());
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Dag {
            names,
            index,
            latent,
            par_off,
            par,
            ch_off,
            ch,
        }
    }

    /// Builds a DAG from index-based edges over nodes named `names`.
    pub fn from_edges(names: Vec<String>, latent: Vec<bool>, edges: &[(usize, usize)]) -> Result<Dag, GraphError> {
        assert_eq!(names.len(), latent.len());
        let n = names.len();
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(GraphError::NodeOutOfRange {
                node: a.max(b),
                node_count: n,
            });
        }
        Expanded {
            names,
            latent,
            edges: edges.to_vec(),
            origin: (0..edges.len()).collect(),
        }
        .finish()
    }

    /// Unnamed DAG over `0..n` (names are the decimal indices).
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Result<Dag, GraphError> {
        Self::from_edges((0..n).map(|i| i.to_string()).collect(), vec![false; n], edges)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.ch.len()
    }

    #[inline]
    pub fn parents(&self, v: usize) -> &[usize] {
        &self.par[self.par_off[v]..self.par_off[v + 1]]
    }

    #[inline]
    pub fn children(&self, v: usize) -> &[usize] {
        &self.ch[self.ch_off[v]..self.ch_off[v + 1]]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    #[inline]
    pub fn is_latent(&self, v: usize) -> bool {
        self.latent[v]
    }

    pub fn latent_nodes(&self) -> NodeSet {
        NodeSet::from_indices(self.node_count(), (0..self.node_count()).filter(|&v| self.latent[v]))
    }

    pub fn observed_nodes(&self) -> NodeSet {
        self.latent_nodes().complement()
    }

    /// Empty set sized for this graph.
    pub fn empty_set(&self) -> NodeSet {
        NodeSet::new(self.node_count())
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, nodes: I) -> NodeSet {
        NodeSet::from_indices(self.node_count(), nodes)
    }

    /// Resolves names to a set; `Err` carries the first unknown name.
    pub fn set_by_names<'a, I>(&self, names: I) -> Result<NodeSet, &'a str>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.index_of(n).ok_or(n)?);
        }
        Ok(s)
    }

    /// Member names in ascending index order.
    pub fn names_of(&self, s: &NodeSet) -> Vec<&str> {
        s.iter().map(|v| self.name(v)).collect()
    }

    /// Edges `(from, to)` ordered by `from`, then `to`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| self.children(u).iter().map(move |&v| (u, v)))
    }

    /// Same nodes, every edge flipped.
    pub fn reverse(&self) -> Dag {
        let edges: Vec<_> = self.edges().map(|(a, b)| (b, a)).collect();
        Dag::from_parts(self.names.clone(), self.latent.clone(), &edges)
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.node_count();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.parents(v).len()).collect();
        let mut stack: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in self.children(v).iter().rev() {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Reflexive-transitive closure of `s` along reversed edges.
    pub fn ancestors(&self, s: &NodeSet) -> NodeSet {
        self.closure(s, |v| self.parents(v))
    }

    /// Reflexive-transitive closure of `s` along edges.
    pub fn descendants(&self, s: &NodeSet) -> NodeSet {
        self.closure(s, |v| self.children(v))
    }

    fn closure<'a, F>(&'a self, s: &NodeSet, next: F) -> NodeSet
    where
        F: Fn(usize) -> &'a [usize],
    {
        let mut seen = s.clone();
        let mut stack: Vec<usize> = s.iter().collect();
        while let Some(v) = stack.pop() {
            for &w in next(v) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for (a, b) in self.edges() {
            l.entry(&format_args!("{} -> {}", self.names[a], self.names[b]));
        }
        l.finish()
    }
}

fn csr<I: Iterator<Item = (usize, usize)>>(n: usize, pairs: I) -> (Vec<usize>, Vec<usize>) {
    let pairs: Vec<(usize, usize)> = pairs.collect();
    let mut off = vec![0usize; n + 1];
    for &(a, _) in &pairs {
        off[a + 1] += 1;
    }
    for i in 0..n {
        off[i + 1] += off[i];
    }
    let mut fill = off.clone();
    let mut adj = vec![0usize; pairs.len()];
    for &(a, b) in &pairs {
        adj[fill[a]] = b;
        fill[a] += 1;
    }
    for v in 0..n {
        adj[off[v]..off[v + 1]].sort_unstable();
    }
    (off, adj)
}

/// Edge-deletion view consulted at traversal time.
///
/// `underline` removes outgoing edges of its members, `overline` removes
/// incoming edges of its members. An edge `u -> v` is live unless
/// `u ∈ underline` or `v ∈ overline`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMask {
    pub underline: NodeSet,
    pub overline: NodeSet,
}

impl EdgeMask {
    pub fn none(n: usize) -> Self {
        EdgeMask {
            underline: NodeSet::new(n),
            overline: NodeSet::new(n),
        }
    }

    /// Mask deleting every edge leaving a member of `s`.
    pub fn underline(s: &NodeSet) -> Self {
        EdgeMask {
            underline: s.clone(),
            overline: NodeSet::new(s.universe()),
        }
    }

    /// Mask deleting every edge entering a member of `s`.
    pub fn overline(s: &NodeSet) -> Self {
        EdgeMask {
            underline: NodeSet::new(s.universe()),
            overline: s.clone(),
        }
    }

    #[inline]
    pub fn allows(&self, from: usize, to: usize) -> bool {
        !self.underline.contains(from) && !self.overline.contains(to)
    }
}
