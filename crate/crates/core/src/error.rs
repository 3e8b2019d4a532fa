use thiserror::Error;

/// Errors raised while constructing, generating or parsing graphs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(u32, u32),
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: u64, n: usize },
    #[error("owner list has {got} entries but the graph has {expected} edges")]
    OwnerLength { expected: usize, got: usize },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Errors raised by the protocol runtime and the protocols built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("round cap of {0} supersteps exceeded")]
    RoundCap(u64),
    #[error("duplicate sub-protocol tag {0}")]
    TagCollision(String),
    #[error("message on tag {0} has no receiver")]
    Undelivered(String),
    #[error("both parties are waiting but nothing was sent")]
    Deadlock,
    #[error("malformed message: {0}")]
    Malformed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl ProtocolError {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        ProtocolError::Invariant(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        ProtocolError::Precondition(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        ProtocolError::Malformed(msg.into())
    }
}

pub type Result<T, E = ProtocolError> = std::result::Result<T, E>;
