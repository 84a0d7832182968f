use thiserror::Error;

use crate::params::RawParams;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameters {0} are not acceptable")]
    NotAcceptable(RawParams),

    #[error("parameters {0} are acceptable but not admissible")]
    NotAdmissible(RawParams),

    #[error("{m} is not a magic distance for {params} (candidates: {candidates:?})")]
    NotMagic {
        params: RawParams,
        m: u32,
        candidates: Vec<u32>,
    },

    #[error("label {label} is outside 1..={delta}")]
    LabelOutOfRange { label: u32, delta: u32 },

    #[error("a cycle needs at least 3 edges, got {0}")]
    CycleTooShort(usize),

    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("pair ({u}, {v}) labelled twice ({first} and {second})")]
    ConflictingLabel {
        u: usize,
        v: usize,
        first: u32,
        second: u32,
    },

    #[error("malformed graph: {0}")]
    GraphFormat(String),

    #[error("search space of {required} assignments exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("graphs on {n} vertices are not supported by the sweep (max {max})")]
    TooManyVertices { n: usize, max: usize },
}
