//! Small named graphs used throughout the tests and documentation.
//!
//! In every graph `X` is the exposure and `Y` the outcome. Names starting
//! with `U` are latent.

use crate::graph::{Dag, DagBuilder};

fn build(edges: &[(&str, &str)], bidirected: &[(&str, &str)], latent: &[&str]) -> Dag {
    let mut b = DagBuilder::new();
    for &(a, c) in edges {
        b.edge(a, c);
    }
    for &(a, c) in bidirected {
        b.bidirected(a, c);
    }
    for &u in latent {
        b.latent(u);
    }
    b.build().expect("fixture graphs are acyclic")
}

/// `X -> Z -> Y`, `X <-> Y`. `{Z}` is the only front-door set.
pub fn g1() -> Dag {
    build(&[("X", "Z"), ("Z", "Y")], &[("X", "Y")], &[])
}

/// Two mediating routes `A -> B -> D` and `A -> C -> D` between `X` and `Y`,
/// with `X <-> Y`. Thirteen front-door sets; the maximal one is `{A,B,C,D}`.
pub fn g2() -> Dag {
    build(
        &[("X", "A"), ("A", "B"), ("B", "D"), ("D", "Y"), ("A", "C"), ("C", "D")],
        &[("X", "Y")],
        &[],
    )
}

/// Non-monotone example: `{A,B,C}` and `{A}` are front-door sets, no
/// two-element subset of `{A,B,C}` is.
pub fn g3() -> Dag {
    build(
        &[("X", "A"), ("A", "Y"), ("B", "Y"), ("C", "Y"), ("D", "B"), ("D", "C")],
        &[("X", "Y")],
        &[],
    )
}

/// Running example for the finder: `Z(i) = {A,B,D}`, `Z(ii) = {A,D}`.
pub fn gr() -> Dag {
    build(
        &[
            ("X", "A"),
            ("A", "B"),
            ("B", "C"),
            ("C", "Y"),
            ("D", "A"),
            ("D", "U4"),
            ("U1", "X"),
            ("U1", "Y"),
            ("U2", "X"),
            ("U2", "C"),
            ("U3", "B"),
            ("U3", "Y"),
            ("U4", "Y"),
        ],
        &[],
        &["U1", "U2", "U3", "U4"],
    )
}

/// Example for the minimal-set construction: minimal set `{B,D,E}`.
pub fn gm() -> Dag {
    build(
        &[
            ("X", "A"),
            ("A", "B"),
            ("B", "C"),
            ("C", "Y"),
            ("D", "Y"),
            ("E", "D"),
            ("E", "Y"),
            ("U2", "A"),
            ("U2", "D"),
            ("U1", "X"),
            ("B", "Y"),
            ("U1", "Y"),
        ],
        &[],
        &["U1", "U2"],
    )
}
