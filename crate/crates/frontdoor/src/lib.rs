//! File formats, experiments and the command line for `frontdoor-core`.

pub mod bench;
pub mod cli;
pub mod format;
pub mod model;
