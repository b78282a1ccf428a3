//! Line-oriented graph text format.
//!
//! ```text
//! # comment
//! X -> Z        directed edge
//! X <-> Y       bidirected edge, expanded into a fresh latent parent
//! latent U      marks U as latent
//! W             declares a node without edges
//! ```
//!
//! Node names match `[A-Za-z0-9_.]+`. Nodes are numbered in order of first
//! appearance; latents created for bidirected edges come last.

use std::fmt::Write as _;

use frontdoor_core::{Dag, DagBuilder, GraphError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("cannot parse `{0}`")]
    Syntax(String),
    #[error("invalid node name `{0}`")]
    InvalidName(String),
    #[error("edge closes a directed cycle")]
    Cycle,
    #[error("self-loop")]
    SelfLoop,
    #[error("duplicate edge")]
    DuplicateEdge,
    #[error("fresh latent name `{0}` is already used")]
    NameCollision(String),
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

fn checked_name(s: &str, line: usize) -> Result<&str, ParseError> {
    if valid_name(s) {
        Ok(s)
    } else {
        Err(ParseError {
            line,
            kind: ParseErrorKind::InvalidName(s.to_string()),
        })
    }
}

/// Parses the text format into a DAG.
pub fn parse_graph(text: &str) -> Result<Dag, ParseError> {
    let mut b = DagBuilder::new();
    // Line number of each recorded edge, by ordinal.
    let mut edge_lines = Vec::new();
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let name = |s| checked_name(s, line);
        match tokens.as_slice() {
            ["latent", rest @ ..] if !rest.is_empty() => {
                for &u in rest {
                    b.latent(name(u)?);
                }
            }
            [a, "->", c] => {
                b.edge(name(a)?, name(c)?);
                edge_lines.push(line);
            }
            [a, "<->", c] => {
                b.bidirected(name(a)?, name(c)?);
                edge_lines.push(line);
            }
            [a] => {
                b.node(name(a)?);
            }
            _ => {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::Syntax(content.to_string()),
                })
            }
        }
    }
    b.build().map_err(|e| {
        let at = |edge: usize| edge_lines.get(edge).copied().unwrap_or(last_line);
        match e {
            GraphError::Cycle { edge } => ParseError {
                line: at(edge),
                kind: ParseErrorKind::Cycle,
            },
            GraphError::SelfLoop { edge } => ParseError {
                line: at(edge),
                kind: ParseErrorKind::SelfLoop,
            },
            GraphError::DuplicateEdge { edge } => ParseError {
                line: at(edge),
                kind: ParseErrorKind::DuplicateEdge,
            },
            GraphError::NameCollision(name) => {
                let line = text
                    .lines()
                    .position(|l| l.split('#').next().unwrap_or("").contains("<->"))
                    .map_or(last_line, |i| i + 1);
                ParseError {
                    line,
                    kind: ParseErrorKind::NameCollision(name),
                }
            }
            GraphError::NodeOutOfRange { .. } => unreachable!("builder only creates known nodes"),
        }
    })
}

/// Renders `g` so that [`parse_graph`] rebuilds it with identical node
/// indices: node declarations in index order, then edges.
pub fn serialize_graph(g: &Dag) -> String {
    let mut out = String::new();
    for v in 0..g.node_count() {
        if g.is_latent(v) {
            let _ = writeln!(out, "latent {}", g.name(v));
        } else {
            let _ = writeln!(out, "{}", g.name(v));
        }
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{} -> {}", g.name(a), g.name(b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_graph_expands() {
        let g = parse_graph("X -> Z\nZ -> Y\nX <-> Y").unwrap();
        assert_eq!(g.names(), ["X", "Z", "Y", "U0"]);
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_latent(3));
        assert_eq!(g.children(3), [0, 2]);
    }

    #[test]
    fn empty_and_comments() {
        let g = parse_graph("").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (0, 0));
        let g = parse_graph("# only a comment\n\n  A -> B # trailing\n").unwrap();
        assert_eq!(g.names(), ["A", "B"]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_graph("A -> B\nB -> A").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::Cycle));
        let e = parse_graph("A -> B\n\nA -> A").unwrap_err();
        assert_eq!((e.line, e.kind), (3, ParseErrorKind::SelfLoop));
        let e = parse_graph("A -> B\nC -> D\nA -> B").unwrap_err();
        assert_eq!((e.line, e.kind), (3, ParseErrorKind::DuplicateEdge));
        let e = parse_graph("A -> B\nA => B").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        let e = parse_graph("A -> B-C").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::InvalidName(_)));
        let e = parse_graph("U0 -> A\nA <-> B").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::NameCollision("U0".into())));
    }

    #[test]
    fn latent_and_isolated_nodes() {
        let g = parse_graph("latent U\nU -> A\nW").unwrap();
        assert_eq!(g.names(), ["U", "A", "W"]);
        assert!(g.is_latent(0) && !g.is_latent(2));
    }

    #[test]
    fn round_trip_preserves_indices() {
        let src = "X -> A\nW\nA -> Y\nlatent L\nL -> A\nX <-> Y\nB <-> Y";
        let g = parse_graph(src).unwrap();
        let h = parse_graph(&serialize_graph(&g)).unwrap();
        assert_eq!(g, h);
    }
}
