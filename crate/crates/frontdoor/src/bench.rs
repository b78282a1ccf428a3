//! Random-instance experiments on Erdős–Rényi DAGs.
//!
//! Each instance records run time and result size of the maximal and the
//! minimal finder, plus which identification strategies apply:
//! front-door (`fd`), covariate adjustment (`bd`), the empty front-door set
//! (`fdzero`), and `bd` or `fdzero` (`bdplus`).

use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use frontdoor_core::search::{generic_search, BayesBallRules, Case, RuleTable, Step};
use frontdoor_core::{directed_reachable, find_fd, find_minimal_fd, Dag, EdgeMask, FdQuery, FdResult, NodeSet};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum XyMode {
    /// `|X|` and `|Y|` drawn uniformly from `1..=3`.
    Random13,
    /// `|X| = |Y| = max(1, log2(n) - 3)`.
    LogGrow,
}

impl XyMode {
    fn label(self) -> &'static str {
        match self {
            XyMode::Random13 => "random13",
            XyMode::LogGrow => "loggrow",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m: usize,
    pub xy_mode: XyMode,
    pub r_fraction: f64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    /// Seconds per instance and algorithm; slower runs are flagged.
    #[serde(default = "default_time_limit")]
    pub time_limit: f64,
}

fn default_reps() -> usize {
    1
}

fn default_time_limit() -> f64 {
    30.0
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{m} edges do not fit in a DAG on {n} nodes")]
    TooManyEdges { n: usize, m: usize },
    #[error("{needed} exposure and outcome nodes do not fit in {n} nodes")]
    TooFewNodes { n: usize, needed: usize },
    #[error("r_fraction must lie in [0, 1], got {0}")]
    Fraction(f64),
    #[error("reps must be at least 1")]
    NoReps,
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.m > max_edges(self.n) {
            return Err(BenchError::TooManyEdges { n: self.n, m: self.m });
        }
        if !(0.0..=1.0).contains(&self.r_fraction) {
            return Err(BenchError::Fraction(self.r_fraction));
        }
        if self.reps == 0 {
            return Err(BenchError::NoReps);
        }
        let needed = match self.xy_mode {
            XyMode::Random13 => 6,
            XyMode::LogGrow => 2 * log_grow_size(self.n),
        };
        if needed > self.n {
            return Err(BenchError::TooFewNodes { n: self.n, needed });
        }
        Ok(())
    }

    /// Seed of repetition `rep`.
    pub fn instance_seed(&self, rep: usize) -> u64 {
        self.seed.wrapping_add((rep as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

fn max_edges(n: usize) -> usize {
    n.saturating_mul(n.saturating_sub(1)) / 2
}

fn log_grow_size(n: usize) -> usize {
    (n.max(1).ilog2() as usize).saturating_sub(3).max(1)
}

/// A DAG with `n` nodes `V0..` and `m` distinct edges chosen uniformly,
/// oriented along a uniformly random order.
pub fn gen_er_dag(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Dag, BenchError> {
    let total = max_edges(n);
    if m > total {
        return Err(BenchError::TooManyEdges { n, m });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m);
    if 2 * m <= total {
        let mut seen = HashSet::with_capacity(m);
        while pairs.len() < m {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let p = (a.min(b), a.max(b));
            if seen.insert(p) {
                pairs.push(p);
            }
        }
    } else {
        let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        pairs.extend(index::sample(rng, total, m).into_iter().map(|k| all[k]));
    }
    let edges: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (order[a], order[b])).collect();
    let names = (0..n).map(|v| format!("V{v}")).collect();
    Ok(Dag::from_edges(names, vec![false; n], &edges).expect("edges follow a total order"))
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub dag: Dag,
    pub x: NodeSet,
    pub y: NodeSet,
    pub r: NodeSet,
}

impl Instance {
    pub fn query(&self) -> FdQuery {
        FdQuery::new(
            &self.dag,
            self.x.clone(),
            self.y.clone(),
            self.dag.empty_set(),
            self.r.clone(),
        )
        .expect("generated sets are disjoint")
    }
}

/// The instance of `cfg` for `seed`: graph, exposures, outcomes and
/// candidate set of size `round(r_fraction · n)` (or all remaining nodes).
pub fn gen_instance(cfg: &ExperimentConfig, seed: u64) -> Result<Instance, BenchError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dag = gen_er_dag(cfg.n, cfg.m, &mut rng)?;
    let (kx, ky) = match cfg.xy_mode {
        XyMode::Random13 => (rng.random_range(1..=3), rng.random_range(1..=3)),
        XyMode::LogGrow => (log_grow_size(cfg.n), log_grow_size(cfg.n)),
    };
    let picked = index::sample(&mut rng, cfg.n, kx + ky).into_vec();
    let x = dag.set_of(picked[..kx].iter().copied());
    let y = dag.set_of(picked[kx..].iter().copied());
    let rest: Vec<usize> = (0..cfg.n).filter(|&v| !x.contains(v) && !y.contains(v)).collect();
    let size = ((cfg.r_fraction * cfg.n as f64).round() as usize).min(rest.len());
    let r = dag.set_of(index::sample(&mut rng, rest.len(), size).into_iter().map(|k| rest[k]));
    Ok(Instance { dag, x, y, r })
}

/// Whether the empty set is a front-door set: no directed path from `x` to
/// `y`.
pub fn fd_zero_identifiable(g: &Dag, x: &NodeSet, y: &NodeSet) -> bool {
    directed_reachable(g, x, &g.empty_set()).is_disjoint(y)
}

/// Bayes-Ball rules on the graph without the first edges of proper causal
/// paths, i.e. edges `X -> W` with `W` on such a path.
struct ProperBackDoorRules<'a> {
    inner: BayesBallRules<'a>,
    x: &'a NodeSet,
    pcp: &'a NodeSet,
}

impl RuleTable for ProperBackDoorRules<'_> {
    fn step(&self, case: Case, v: usize, w: usize) -> Step {
        let (from, to) = if case.to_child() { (v, w) } else { (w, v) };
        if self.x.contains(from) && self.pcp.contains(to) {
            return Step::NONE;
        }
        self.inner.step(case, v, w)
    }
}

/// Whether covariate adjustment for `(x, y)` is possible with some subset
/// of `r`.
///
/// Tests the canonical candidate `An(X ∪ Y) ∩ R` minus `X ∪ Y` and the
/// descendants of proper causal path vertices: a set exists iff this one
/// d-separates `X` from `Y` in the proper back-door graph.
pub fn bd_adjustment_exists(g: &Dag, x: &NodeSet, y: &NodeSet, r: &NodeSet) -> bool {
    let n = g.node_count();
    let mut from_x = directed_reachable_masked(g, x, &EdgeMask::overline(x));
    from_x.difference_with(x);
    let to_y = ancestors_masked(g, y, &EdgeMask::underline(x));
    let pcp = from_x.intersection(&to_y);
    let forbidden = g.descendants(&pcp);
    let xy = x.union(y);
    let mut z = g.ancestors(&xy).intersection(r);
    z.difference_with(&xy);
    z.difference_with(&forbidden);
    let rules = ProperBackDoorRules {
        inner: BayesBallRules { z: &z },
        x,
        pcp: &pcp,
    };
    generic_search(g, x, &rules, &EdgeMask::none(n)).is_disjoint(y)
}

fn directed_reachable_masked(g: &Dag, start: &NodeSet, mask: &EdgeMask) -> NodeSet {
    let mut seen = start.clone();
    let mut stack: Vec<usize> = start.iter().collect();
    while let Some(v) = stack.pop() {
        for &c in g.children(v) {
            if mask.allows(v, c) && seen.insert(c) {
                stack.push(c);
            }
        }
    }
    seen
}

fn ancestors_masked(g: &Dag, start: &NodeSet, mask: &EdgeMask) -> NodeSet {
    let mut seen = start.clone();
    let mut stack: Vec<usize> = start.iter().collect();
    while let Some(v) = stack.pop() {
        for &p in g.parents(v) {
            if mask.allows(p, v) && seen.insert(p) {
                stack.push(p);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub xmode: &'static str,
    pub rfrac: f64,
    pub algo: &'static str,
    pub micros: u128,
    /// Size of the returned set, `-1` when none exists.
    pub setsize: i64,
    pub fd: bool,
    pub bd: bool,
    pub fdzero: bool,
    pub bdplus: bool,
    pub timeout: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flags {
    pub fd: bool,
    pub bd: bool,
    pub fdzero: bool,
    pub bdplus: bool,
}

pub fn identification_flags(inst: &Instance, fd: bool) -> Flags {
    let bd = bd_adjustment_exists(&inst.dag, &inst.x, &inst.y, &inst.r);
    let fdzero = fd_zero_identifiable(&inst.dag, &inst.x, &inst.y);
    Flags {
        fd,
        bd,
        fdzero,
        bdplus: bd || fdzero,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn set_size(r: &FdResult) -> i64 {
    r.set().map_or(-1, |z| z.len() as i64)
}

/// Runs every repetition of `cfg` sequentially. The first instance is solved
/// once untimed to warm caches. Records are sorted by seed, then algorithm.
pub fn run_benchmark(cfg: &ExperimentConfig) -> Result<Vec<BenchRecord>, BenchError> {
    cfg.validate()?;
    let limit = Duration::from_secs_f64(cfg.time_limit.max(0.0));
    let warm = gen_instance(cfg, cfg.instance_seed(0))?;
    let _ = find_fd(&warm.dag, &warm.query());
    let mut out = Vec::with_capacity(2 * cfg.reps);
    for rep in 0..cfg.reps {
        let seed = cfg.instance_seed(rep);
        let inst = gen_instance(cfg, seed)?;
        let q = inst.query();
        let (max, t_max) = timed(|| find_fd(&inst.dag, &q));
        let (min, t_min) = timed(|| find_minimal_fd(&inst.dag, &q));
        let flags = identification_flags(&inst, max.exists());
        for (algo, res, t) in [("find", &max, t_max), ("min", &min, t_min)] {
            out.push(BenchRecord {
                seed,
                n: cfg.n,
                m: cfg.m,
                xmode: cfg.xy_mode.label(),
                rfrac: cfg.r_fraction,
                algo,
                micros: t.as_micros(),
                setsize: set_size(res),
                fd: flags.fd,
                bd: flags.bd,
                fdzero: flags.fdzero,
                bdplus: flags.bdplus,
                timeout: t > limit,
            });
        }
    }
    out.sort_by(|a, b| (a.seed, a.algo).cmp(&(b.seed, b.algo)));
    Ok(out)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
