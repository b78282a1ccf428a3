//! Exact evaluation of the front-door adjustment formula on discrete models.
//!
//! For a front-door set `Z`,
//!
//! ```text
//! P(y | do(x)) = Σ_z P(z | x) Σ_x' P(y | x', z) P(x')
//! ```
//!
//! and `P(y)` when `Z` is empty. All probabilities are computed by exhaustive
//! summation over the model's state space, which is capped at
//! [`MAX_STATES`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::QueryError;
use crate::find::verify_fd;
use crate::graph::Dag;
use crate::nodeset::NodeSet;

pub const MAX_STATES: usize = 1 << 20;
const ROW_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    Cardinality { node: usize, card: usize },
    CardinalityCount { expected: usize, found: usize },
    CptShape { node: usize, expected: usize, found: usize },
    CptRow { node: usize, row: usize, sum: f64 },
    CptEntry { node: usize, index: usize, value: f64 },
    StateSpace { limit: usize },
    DuplicateVariable { node: usize },
    ValueOutOfRange { node: usize, value: usize, card: usize },
    NotFrontDoor,
    ZeroProbability,
    Query(QueryError),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Cardinality { node, card } => {
                write!(f, "node {node} has {card} states, at least 2 are required")
            }
            ModelError::CardinalityCount { expected, found } => {
                write!(f, "expected {expected} cardinalities, got {found}")
            }
            ModelError::CptShape { node, expected, found } => {
                write!(f, "table of node {node} has {found} entries, expected {expected}")
            }
            ModelError::CptRow { node, row, sum } => {
                write!(f, "row {row} of the table of node {node} sums to {sum}")
            }
            ModelError::CptEntry { node, index, value } => {
                write!(f, "entry {index} of the table of node {node} is {value}")
            }
            ModelError::StateSpace { limit } => {
                write!(f, "state space exceeds {limit} configurations")
            }
            ModelError::DuplicateVariable { node } => write!(f, "node {node} assigned twice"),
            ModelError::ValueOutOfRange { node, value, card } => {
                write!(f, "value {value} out of range for node {node} with {card} states")
            }
            ModelError::NotFrontDoor => write!(f, "the given set is not a front-door set"),
            ModelError::ZeroProbability => write!(f, "conditioning event has probability zero"),
            ModelError::Query(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ModelError {}

impl From<QueryError> for ModelError {
    fn from(e: QueryError) -> Self {
        ModelError::Query(e)
    }
}

/// Compensated summation (Neumaier's variant of Kahan's algorithm).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl core::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(it: I) -> Self {
        let mut s = KahanSum::default();
        for v in it {
            s.add(v);
        }
        s
    }
}

/// A Bayesian network over a DAG, possibly with latent nodes.
///
/// The table of node `v` is stored row-major: one row per configuration of
/// `v`'s parents, in ascending parent-index order with the first parent
/// varying slowest, and `card(v)` entries per row.
#[derive(Debug, Clone)]
pub struct DiscreteModel {
    dag: Dag,
    cards: Vec<usize>,
    cpts: Vec<Vec<f64>>,
}

impl DiscreteModel {
    pub fn new(dag: Dag, cards: Vec<usize>, cpts: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let n = dag.node_count();
        if cards.len() != n {
            return Err(ModelError::CardinalityCount {
                expected: n,
                found: cards.len(),
            });
        }
        if cpts.len() != n {
            return Err(ModelError::CptShape {
                node: cpts.len().min(n.saturating_sub(1)),
                expected: n,
                found: cpts.len(),
            });
        }
        for (node, &card) in cards.iter().enumerate() {
            if card < 2 {
                return Err(ModelError::Cardinality { node, card });
            }
        }
        for (v, table) in cpts.iter().enumerate() {
            let rows = dag
                .parents(v)
                .iter()
                .try_fold(1usize, |acc, &p| acc.checked_mul(cards[p]))
                .ok_or(ModelError::StateSpace { limit: MAX_STATES })?;
            let expected = rows * cards[v];
            if table.len() != expected {
                return Err(ModelError::CptShape {
                    node: v,
                    expected,
                    found: table.len(),
                });
            }
            for (index, &value) in table.iter().enumerate() {
                if !(0.0..=1.0 + ROW_TOLERANCE).contains(&value) {
                    return Err(ModelError::CptEntry { node: v, index, value });
                }
            }
            for (row, chunk) in table.chunks(cards[v]).enumerate() {
                let sum = chunk.iter().copied().collect::<KahanSum>().value();
                if (sum - 1.0).abs() > ROW_TOLERANCE {
                    return Err(ModelError::CptRow { node: v, row, sum });
                }
            }
        }
        Ok(DiscreteModel { dag, cards, cpts })
    }

    /// Every row uniform.
    pub fn uniform(dag: Dag, cards: Vec<usize>) -> Result<Self, ModelError> {
        let cpts = (0..dag.node_count())
            .map(|v| {
                let rows: usize = dag
                    .parents(v)
                    .iter()
                    .map(|&p| cards.get(p).copied().unwrap_or(2))
                    .product();
                let k = cards.get(v).copied().unwrap_or(2);
                vec![1.0 / k as f64; rows * k]
            })
            .collect();
        Self::new(dag, cards, cpts)
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn cpt(&self, v: usize) -> &[f64] {
        &self.cpts[v]
    }

    /// `P(v = value | parents = state)`, reading the parent values from a
    /// full assignment.
    fn factor(&self, v: usize, state: &[usize]) -> f64 {
        let row = self
            .dag
            .parents(v)
            .iter()
            .fold(0usize, |acc, &p| acc * self.cards[p] + state[p]);
        self.cpts[v][row * self.cards[v] + state[v]]
    }

    fn state_space(&self, free: impl Iterator<Item = usize>) -> Result<usize, ModelError> {
        let mut total = 1usize;
        for v in free {
            total = total
                .checked_mul(self.cards[v])
                .filter(|&t| t <= MAX_STATES)
                .ok_or(ModelError::StateSpace { limit: MAX_STATES })?;
        }
        Ok(total)
    }

    fn check_assignment(&self, a: &[(usize, usize)]) -> Result<NodeSet, ModelError> {
        let n = self.dag.node_count();
        let mut s = NodeSet::new(n);
        for &(node, value) in a {
            if node >= n {
                return Err(QueryError::UniverseMismatch {
                    expected: n,
                    found: node + 1,
                }
                .into());
            }
            if value >= self.cards[node] {
                return Err(ModelError::ValueOutOfRange {
                    node,
                    value,
                    card: self.cards[node],
                });
            }
            if !s.insert(node) {
                return Err(ModelError::DuplicateVariable { node });
            }
        }
        Ok(s)
    }
}

/// Mixed-radix counter over the given variables of a full assignment.
fn advance(state: &mut [usize], vars: &[usize], cards: &[usize]) -> bool {
    for &v in vars.iter().rev() {
        state[v] += 1;
        if state[v] < cards[v] {
            return true;
        }
        state[v] = 0;
    }
    false
}

/// Exact distribution over a set of variables, stored row-major with the
/// first variable varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    vars: Vec<usize>,
    cards: Vec<usize>,
    probs: Vec<f64>,
}

impl JointTable {
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    fn position(&self, v: usize) -> Option<usize> {
        self.vars.iter().position(|&u| u == v)
    }

    fn decode(&self, mut index: usize, out: &mut [usize]) {
        for k in (0..self.vars.len()).rev() {
            out[k] = index % self.cards[k];
            index /= self.cards[k];
        }
    }

    /// Probability of a partial assignment over variables of the table.
    pub fn prob(&self, a: &[(usize, usize)]) -> Option<f64> {
        let pos: Vec<(usize, usize)> = a
            .iter()
            .map(|&(v, val)| self.position(v).map(|k| (k, val)))
            .collect::<Option<_>>()?;
        let mut cell = vec![0; self.vars.len()];
        let mut s = KahanSum::default();
        for (i, &p) in self.probs.iter().enumerate() {
            self.decode(i, &mut cell);
            if pos.iter().all(|&(k, val)| cell[k] == val) {
                s.add(p);
            }
        }
        Some(s.value())
    }

    /// Sums out every variable not in `keep`. `None` if `keep` names a
    /// variable outside the table.
    pub fn marginalize(&self, keep: &[usize]) -> Option<JointTable> {
        let mut vars: Vec<usize> = keep.to_vec();
        vars.sort_unstable();
        vars.dedup();
        let pos: Vec<usize> = vars.iter().map(|&v| self.position(v)).collect::<Option<_>>()?;
        let cards: Vec<usize> = pos.iter().map(|&k| self.cards[k]).collect();
        let size = cards.iter().product();
        let mut acc = vec![KahanSum::default(); size];
        let mut cell = vec![0; self.vars.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            self.decode(i, &mut cell);
            let j = pos.iter().zip(&cards).fold(0, |a, (&k, &c)| a * c + cell[k]);
            acc[j].add(p);
        }
        Some(JointTable {
            vars,
            cards,
            probs: acc.iter().map(KahanSum::value).collect(),
        })
    }
}

/// Exact joint distribution of `keep`; every other variable, latent or
/// not, is summed out.
pub fn joint_distribution(model: &DiscreteModel, keep: &NodeSet) -> Result<JointTable, ModelError> {
    let n = model.dag.node_count();
    crate::error::check_universe(n, keep)?;
    let all: Vec<usize> = (0..n).collect();
    model.state_space(all.iter().copied())?;
    let vars = keep.to_vec();
    let cards: Vec<usize> = vars.iter().map(|&v| model.cards[v]).collect();
    let mut acc = vec![KahanSum::default(); cards.iter().product()];
    let mut state = vec![0usize; n];
    loop {
        let p: f64 = (0..n).map(|v| model.factor(v, &state)).product();
        let j = vars.iter().zip(&cards).fold(0, |a, (&v, &c)| a * c + state[v]);
        acc[j].add(p);
        if !advance(&mut state, &all, &model.cards) {
            break;
        }
    }
    Ok(JointTable {
        vars,
        cards,
        probs: acc.iter().map(KahanSum::value).collect(),
    })
}

/// `P(y | do(x))` by truncated factorization: the factors of `X` are dropped,
/// `X` is clamped to `x` and all other variables are summed over.
pub fn do_oracle(model: &DiscreteModel, x: &[(usize, usize)], y: &[(usize, usize)]) -> Result<f64, ModelError> {
    let xs = model.check_assignment(x)?;
    let ys = model.check_assignment(y)?;
    crate::error::check_disjoint(&xs, &ys, "X", "Y")?;
    let n = model.dag.node_count();
    let free: Vec<usize> = (0..n).filter(|&v| !xs.contains(v)).collect();
    model.state_space(free.iter().copied())?;
    let mut state = vec![0usize; n];
    for &(v, val) in x {
        state[v] = val;
    }
    let mut s = KahanSum::default();
    loop {
        if y.iter().all(|&(v, val)| state[v] == val) {
            s.add(free.iter().map(|&v| model.factor(v, &state)).product());
        }
        if !advance(&mut state, &free, &model.cards) {
            break;
        }
    }
    Ok(s.value())
}

/// The front-door formula for adjustment set `z`, evaluated on the model's
/// observed joint over `X ∪ Y ∪ Z`. Fails unless `z` is a front-door set.
pub fn fd_estimate(
    model: &DiscreteModel,
    x: &[(usize, usize)],
    y: &[(usize, usize)],
    z: &NodeSet,
) -> Result<f64, ModelError> {
    let xs = model.check_assignment(x)?;
    let ys = model.check_assignment(y)?;
    if !verify_fd(&model.dag, &xs, &ys, z)? {
        return Err(ModelError::NotFrontDoor);
    }
    let keep = xs.union(&ys).union(z);
    let joint = joint_distribution(model, &keep)?;
    fd_estimate_observed(&joint, x, y, &z.to_vec())
}

/// The front-door formula computed from an observed joint table alone. The
/// table must contain the variables of `x`, `y` and `z`; the criterion is not
/// checked.
pub fn fd_estimate_observed(
    joint: &JointTable,
    x: &[(usize, usize)],
    y: &[(usize, usize)],
    z: &[usize],
) -> Result<f64, ModelError> {
    if z.is_empty() {
        return joint.prob(y).ok_or(ModelError::ZeroProbability);
    }
    let xv: Vec<usize> = x.iter().map(|&(v, _)| v).collect();
    let mut vars = xv.clone();
    vars.extend(y.iter().map(|&(v, _)| v));
    vars.extend_from_slice(z);
    let t = joint.marginalize(&vars).ok_or(ModelError::ZeroProbability)?;
    let card = |v: usize| t.cards[t.position(v).expect("kept variable")];
    let nx: usize = xv.iter().map(|&v| card(v)).product();
    let nz: usize = z.iter().map(|&v| card(v)).product();

    // p_xz[x'][z] = P(x', z), p_xyz[x'][z] = P(x', y, z).
    let mut p_xz = vec![KahanSum::default(); nx * nz];
    let mut p_xyz = vec![KahanSum::default(); nx * nz];
    let xpos: Vec<usize> = xv.iter().map(|&v| t.position(v).unwrap()).collect();
    let zpos: Vec<usize> = z.iter().map(|&v| t.position(v).unwrap()).collect();
    let ypos: Vec<(usize, usize)> = y.iter().map(|&(v, val)| (t.position(v).unwrap(), val)).collect();
    let mut cell = vec![0; t.vars.len()];
    for (i, &p) in t.probs.iter().enumerate() {
        t.decode(i, &mut cell);
        let xi = xpos.iter().fold(0, |a, &k| a * t.cards[k] + cell[k]);
        let zi = zpos.iter().fold(0, |a, &k| a * t.cards[k] + cell[k]);
        p_xz[xi * nz + zi].add(p);
        if ypos.iter().all(|&(k, val)| cell[k] == val) {
            p_xyz[xi * nz + zi].add(p);
        }
    }
    let p_xz: Vec<f64> = p_xz.iter().map(KahanSum::value).collect();
    let p_xyz: Vec<f64> = p_xyz.iter().map(KahanSum::value).collect();
    let p_x: Vec<f64> = (0..nx)
        .map(|a| p_xz[a * nz..(a + 1) * nz].iter().copied().collect::<KahanSum>().value())
        .collect();

    let x_index = x.iter().fold(0, |a, &(v, val)| a * card(v) + val);
    if p_x[x_index] <= 0.0 {
        return Err(ModelError::ZeroProbability);
    }
    let mut total = KahanSum::default();
    for zi in 0..nz {
        let pz_given_x = p_xz[x_index * nz + zi] / p_x[x_index];
        if pz_given_x <= 0.0 {
            continue;
        }
        let mut inner = KahanSum::default();
        for (a, &px) in p_x.iter().enumerate() {
            if px <= 0.0 {
                continue;
            }
            let pxz = p_xz[a * nz + zi];
            if pxz <= 0.0 {
                return Err(ModelError::ZeroProbability);
            }
            inner.add(p_xyz[a * nz + zi] / pxz * px);
        }
        total.add(pz_given_x * inner.value());
    }
    Ok(total.value())
}
