use thiserror::Error;

use crate::set::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("empty vertex name")]
    EmptyName,
    #[error("duplicate label `{label}` in the {family} family")]
    DuplicateLabel { family: &'static str, label: String },
    #[error("vertex id {id} out of range for a universe of {size} vertices")]
    VertexOutOfRange { id: VertexId, size: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid resolution: {0}")]
    InvalidResolution(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("set `{label}` has {size} members; the 2-SAT path accepts sets of size at most 2")]
    SetTooLarge { label: String, size: usize },
    #[error("universe of {size} vertices exceeds the enumeration cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
