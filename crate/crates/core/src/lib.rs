//! Border minimization for microarray layouts.
//!
//! Probes are token sequences placed on a grid and synthesized by a shared
//! deposition sequence; the cost is the total mask border length. The crate
//! provides the data model and text formats, an LCS metric with a randomized
//! tree embedding, a tree-guided placement and embedding pipeline, exact
//! solvers for small inputs, and the gadgets of the hardness reductions.

pub mod error;
pub mod format;
pub mod generate;
pub mod hst;
pub mod lcs;
pub mod model;
pub mod oracle;
pub mod pbmp;
pub mod pipeline;
pub mod placement;
pub mod reductions;
pub mod rng;
pub mod search;

pub use error::{Error, Result};
pub use model::{
    border_length_masks, border_length_pairwise, validate_solution, DepositionSchedule, Grid, Instance, Placement,
    Probe, Solution, Token, Violation,
};
