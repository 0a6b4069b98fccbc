use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("graph is disconnected; genus is only defined for connected graphs")]
    Disconnected,

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("unknown edge {0}")]
    UnknownEdge(usize),

    #[error("leg index {index} out of range 1..={count}")]
    LegOutOfRange { index: usize, count: usize },

    #[error("2g−2+n ≤ 0 for (g, n) = ({g}, {n})")]
    UnstableRange { g: u32, n: usize },

    #[error("graph is not stable")]
    NotStable,

    #[error("invalid length: {0}")]
    InvalidLength(String),

    #[error("missing valuation for edge {0}")]
    MissingValuation(usize),

    #[error("type mismatch: expected (g, n) = ({expected_g}, {expected_n}), got ({g}, {n})")]
    TypeMismatch {
        expected_g: u32,
        expected_n: usize,
        g: u32,
        n: usize,
    },

    #[error("invalid position: {0}")]
    InvalidPosition(String),

    #[error("curve has no edge of infinite length")]
    NoInfiniteEdge,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid face morphism: {0}")]
    InvalidArrow(String),

    #[error("unknown cone {0}")]
    UnknownCone(usize),

    #[error("schema violation: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
