use core::fmt;

/// A query whose sets violate the criterion's preconditions.
///
/// This is distinct from "no front-door set exists", which is a normal
/// outcome reported through [`FdResult::NoneExists`](crate::FdResult).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryError {
    /// Two sets that must be disjoint share `node`.
    Overlap {
        first: &'static str,
        second: &'static str,
        node: usize,
    },
    /// `node` is in I but not in R.
    IncludeOutsideRestrict {
        node: usize,
    },
    /// `node` is latent and cannot be adjusted for.
    LatentCandidate {
        node: usize,
    },
    EmptySet(&'static str),
    /// A set was built for a graph of a different size.
    UniverseMismatch {
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::Overlap { first, second, node } => {
                write!(f, "sets {first} and {second} overlap in node {node}")
            }
            QueryError::IncludeOutsideRestrict { node } => {
                write!(f, "node {node} must be included but is not allowed")
            }
            QueryError::LatentCandidate { node } => {
                write!(f, "latent node {node} cannot be part of an adjustment set")
            }
            QueryError::EmptySet(which) => write!(f, "set {which} must not be empty"),
            QueryError::UniverseMismatch { expected, found } => {
                write!(f, "set sized for {found} nodes used with a graph of {expected} nodes")
            }
        }
    }
}

impl core::error::Error for QueryError {}

pub(crate) fn check_universe(n: usize, s: &crate::NodeSet) -> Result<(), QueryError> {
    if s.universe() != n {
        return Err(QueryError::UniverseMismatch {
            expected: n,
            found: s.universe(),
        });
    }
    Ok(())
}

pub(crate) fn check_disjoint(
    a: &crate::NodeSet,
    b: &crate::NodeSet,
    first: &'static str,
    second: &'static str,
) -> Result<(), QueryError> {
    match a.intersection(b).first() {
        Some(node) => Err(QueryError::Overlap { first, second, node }),
        None => Ok(()),
    }
}
