//! Property S for finite bihypergraphs `<V, E, F>`: does `V` split into
//! `X` and `V \ X` with `X` meeting every `E`-set and `V \ X` meeting every
//! `F`-set?
//!
//! Deciders return a [`Certificate`]: an S-partition when the property
//! holds, otherwise a resolution refutation (or an exhaustion marker when
//! the failure was found by search alone).

pub mod conditions;
pub mod encodings;
pub mod error;
pub mod format;
pub mod graph;
pub mod oracle;
pub mod resolution;
pub mod search;
pub mod set;

pub use error::{Error, Result};
pub use graph::{
    check_s_partition, family_intersection, is_transversal, Bihypergraph, BihypergraphBuilder,
    SPartition, Side,
};
pub use resolution::{
    alternating_closure, check_refutation, closure, decide_by_resolution, ClosureResult, Limits,
    Mode, Refutation, ResolutionOutcome, Strategy,
};
pub use search::{decide, decide_2sat, Certificate, DecideConfig, FailureWitness, Method, Verdict};
pub use set::{VertexId, VertexSet};
