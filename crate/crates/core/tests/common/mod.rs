#![allow(dead_code)]

use frontdoor_core::{Dag, NodeSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every labeled DAG on `n` nodes.
pub fn all_dags(n: usize) -> Vec<Dag> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
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

/// Random DAG with edge probability `p` along a random order; each node
/// is latent with probability `latent_p`.
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

/// All pairs of disjoint non-empty sets of at most two nodes each.
pub fn small_xy_pairs(n: usize) -> Vec<(NodeSet, NodeSet)> {
    let mut sets = Vec::new();
    for a in 0..n {
        sets.push(NodeSet::from_indices(n, [a]));
        for b in a + 1..n {
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

/// Disjoint random exposure and outcome sets among the observed nodes, if
/// at least two are observed.
pub fn random_xy(rng: &mut ChaCha8Rng, g: &Dag) -> Option<(NodeSet, NodeSet)> {
    let mut obs = g.observed_nodes().to_vec();
    if obs.len() < 2 {
        return None;
    }
    obs.shuffle(rng);
    let kx = rng.random_range(1..=2.min(obs.len() - 1));
    let ky = rng.random_range(1..=2.min(obs.len() - kx));
    let x = g.set_of(obs[..kx].iter().copied());
    let y = g.set_of(obs[kx..kx + ky].iter().copied());
    Some((x, y))
}

/// Random `I ⊆ R` with `R` inside the default candidates.
pub fn random_bounds(rng: &mut ChaCha8Rng, g: &Dag, x: &NodeSet, y: &NodeSet) -> (NodeSet, NodeSet) {
    let mut r = g.empty_set();
    let mut i = g.empty_set();
    for v in frontdoor_core::default_restrict(g, x, y).iter() {
        if rng.random_bool(0.8) {
            r.insert(v);
            if rng.random_bool(0.15) {
                i.insert(v);
            }
        }
    }
    (i, r)
}
