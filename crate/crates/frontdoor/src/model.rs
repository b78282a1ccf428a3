//! JSON documents describing discrete models.
//!
//! ```json
//! {
//!   "graph": "X -> Z\nZ -> Y\nX <-> Y",
//!   "cards": {"X": 2, "Z": 2, "Y": 2, "U0": 2},
//!   "cpts": {"U0": [0.5, 0.5], "X": [0.8, 0.2, 0.3, 0.7], ...}
//! }
//! ```
//!
//! Each table is row-major over the parent configurations, parents in
//! ascending node order with the first parent varying slowest.

use std::collections::BTreeMap;

use frontdoor_core::{DiscreteModel, ModelError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{parse_graph, serialize_graph, ParseError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDocument {
    pub graph: String,
    pub cards: BTreeMap<String, usize>,
    pub cpts: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("invalid model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("graph: {0}")]
    Graph(#[from] ParseError),
    #[error("no cardinality for node `{0}`")]
    MissingCard(String),
    #[error("no table for node `{0}`")]
    MissingCpt(String),
    #[error("`{0}` is not a node of the graph")]
    UnknownNode(String),
    #[error("{0}")]
    Model(#[from] ModelError),
}

impl ModelDocument {
    pub fn into_model(self) -> Result<DiscreteModel, ModelFileError> {
        let dag = parse_graph(&self.graph)?;
        if let Some(name) = self
            .cards
            .keys()
            .chain(self.cpts.keys())
            .find(|k| dag.index_of(k).is_none())
        {
            return Err(ModelFileError::UnknownNode(name.clone()));
        }
        let mut cards = Vec::with_capacity(dag.node_count());
        let mut cpts = Vec::with_capacity(dag.node_count());
        for name in dag.names() {
            cards.push(
                *self
                    .cards
                    .get(name)
                    .ok_or_else(|| ModelFileError::MissingCard(name.clone()))?,
            );
            cpts.push(
                self.cpts
                    .get(name)
                    .cloned()
                    .ok_or_else(|| ModelFileError::MissingCpt(name.clone()))?,
            );
        }
        Ok(DiscreteModel::new(dag, cards, cpts)?)
    }

    pub fn from_model(model: &DiscreteModel) -> Self {
        let g = model.dag();
        ModelDocument {
            graph: serialize_graph(g),
            cards: g.names().iter().cloned().zip(model.cards().iter().copied()).collect(),
            cpts: (0..g.node_count())
                .map(|v| (g.name(v).to_string(), model.cpt(v).to_vec()))
                .collect(),
        }
    }
}

pub fn parse_model(json: &str) -> Result<DiscreteModel, ModelFileError> {
    serde_json::from_str::<ModelDocument>(json)?.into_model()
}
