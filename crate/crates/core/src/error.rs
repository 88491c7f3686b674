use thiserror::Error;

use crate::instance::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: negative weight")]
    NegativeWeight { line: usize },

    #[error("line {line}: duplicate vertex id {id}")]
    DuplicateVertex { line: usize, id: VertexId },

    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),

    #[error("vertex {0} lies on a cycle of parent links")]
    Cyclic(VertexId),

    #[error("vertex {0} is not connected to the root")]
    Disconnected(VertexId),

    #[error("infeasible instance: terminal {terminal} has 2*dist(root, v) = {round_trip} > D = {bound}")]
    Infeasible {
        terminal: VertexId,
        round_trip: u64,
        bound: u64,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state-space estimate {estimate} exceeds the budget {budget}")]
    BudgetExceeded { estimate: String, budget: u128 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal error: {0}")]
    Internal(String),
}
