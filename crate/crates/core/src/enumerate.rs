//! Listing every front-door set between `I` and `R` with polynomial delay.
//!
//! The enumerator walks a binary tree over the candidates. A node of the tree
//! is a pair of bounds `(I', R')`. It is only entered if the finder reports a
//! set for it, so every branch ends in an output and the work between two
//! outputs is bounded by two finder calls per tree level.

use alloc::vec::Vec;

use crate::find::{find_fd, FdQuery, FdResult};
use crate::graph::Dag;
use crate::nodeset::NodeSet;

/// Iterator over all front-door sets of a query, each yielded once.
pub struct FdEnumerator<'g> {
    g: &'g Dag,
    base: FdQuery,
    /// Feasible bounds `(I', R')`, where `R'` is the finder's answer for them.
    stack: Vec<(NodeSet, NodeSet)>,
    remaining: Option<usize>,
    calls_since_output: usize,
    max_delay: usize,
    total_calls: usize,
}

impl<'g> FdEnumerator<'g> {
    pub fn new(g: &'g Dag, q: &FdQuery) -> Self {
        let mut e = FdEnumerator {
            g,
            base: q.clone(),
            stack: Vec::new(),
            remaining: None,
            calls_since_output: 0,
            max_delay: 0,
            total_calls: 0,
        };
        if let Some(z) = e.find(q.include().clone(), q.restrict().clone()) {
            e.stack.push((q.include().clone(), z));
        }
        e
    }

    /// Stops after `limit` sets.
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.remaining = Some(limit);
        self
    }

    /// Largest number of finder calls spent between two consecutive outputs,
    /// counting the calls before the first output and after the last one.
    pub fn max_delay(&self) -> usize {
        self.max_delay.max(self.calls_since_output)
    }

    pub fn total_calls(&self) -> usize {
        self.total_calls
    }

    fn find(&mut self, i: NodeSet, r: NodeSet) -> Option<NodeSet> {
        self.calls_since_output += 1;
        self.total_calls += 1;
        let q = self.base.with_bounds(i, r);
        match find_fd(self.g, &q) {
            FdResult::Found(z) => Some(z),
            FdResult::NoneExists => None,
        }
    }
}

impl Iterator for FdEnumerator<'_> {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        if self.remaining == Some(0) {
            return None;
        }
        while let Some((i, r)) = self.stack.pop() {
            let Some(v) = r.difference(&i).first() else {
                self.max_delay = self.max_delay.max(self.calls_since_output);
                self.calls_since_output = 0;
                if let Some(k) = self.remaining.as_mut() {
                    *k -= 1;
                }
                return Some(r);
            };
            let mut without = r.clone();
            without.remove(v);
            let exclude = self.find(i.clone(), without).map(|z| (i.clone(), z));
            let mut with = i;
            with.insert(v);
            let include = self.find(with.clone(), r).map(|z| (with, z));
            self.stack.extend(exclude);
            self.stack.extend(include);
        }
        None
    }
}

/// Collects all front-door sets of `q`.
pub fn enumerate_fd(g: &Dag, q: &FdQuery) -> Vec<NodeSet> {
    FdEnumerator::new(g, q).collect()
}
