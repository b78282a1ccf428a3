#![allow(dead_code)]

use frontdoor_core::{Dag, NodeSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every labeled DAG on `n` nodes, all nodes observed.
pub fn all_dags(n: usize) -> Vec<Dag> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for code in 0..3usize.pow(pairs.len() as u32) {
        let mut c = code;
        let mut edges = Vec::new();
        for &(a, b) in &pairs {
            match c % 3 {
                1 => edges.push((a, b)),
                2 => edges.push((b, a)),
                _ => {}
            }
            c /= 3;
        }
        if let Ok(g) = Dag::from_index_edges(n, &edges) {
            out.push(g);
        }
    }
    out
}

pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, p: f64, latent_p: f64) -> Dag {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.push((perm[a], perm[b]));
            }
        }
    }
    let names = (0..n).map(|i| format!("V{i}")).collect();
    let latent = (0..n).map(|_| rng.random_bool(latent_p)).collect();
    Dag::from_edges(names, latent, &edges).unwrap()
}

/// Disjoint non-empty `X`, `Y` of at most two nodes each, taken from `nodes`.
pub fn small_xy_pairs(n: usize, nodes: &[usize]) -> Vec<(NodeSet, NodeSet)> {
    let mut sets = Vec::new();
    for (k, &a) in nodes.iter().enumerate() {
        sets.push(NodeSet::from_indices(n, [a]));
        for &b in &nodes[k + 1..] {
            sets.push(NodeSet::from_indices(n, [a, b]));
        }
    }
    let mut out = Vec::new();
    for x in &sets {
        for y in &sets {
            if x.is_disjoint(y) {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

/// Random disjoint observed `X`, `Y` of one to two nodes, if the graph has
/// enough observed nodes.
pub fn random_xy(rng: &mut ChaCha8Rng, g: &Dag) -> Option<(NodeSet, NodeSet)> {
    let mut obs: Vec<usize> = g.observed_nodes().iter().collect();
    if obs.len() < 2 {
        return None;
    }
    obs.shuffle(rng);
    let nx = rng.random_range(1..=2.min(obs.len() - 1));
    let ny = rng.random_range(1..=2.min(obs.len() - nx));
    let n = g.node_count();
    Some((
        NodeSet::from_indices(n, obs[..nx].iter().copied()),
        NodeSet::from_indices(n, obs[nx..nx + ny].iter().copied()),
    ))
}

/// All subsets of `s`.
pub fn subsets(s: &NodeSet) -> Vec<NodeSet> {
    let items: Vec<usize> = s.iter().collect();
    (0..1u32 << items.len())
        .map(|mask| {
            NodeSet::from_indices(
                s.universe(),
                items
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &v)| v),
            )
        })
        .collect()
}
