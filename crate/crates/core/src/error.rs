use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("expected {expected} comma-separated components, found {found}")]
    ComponentCount { expected: usize, found: usize },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid generating set: {0}")]
    Document(String),

    #[error("linear part must be an integer matrix with determinant +-1")]
    NotUnimodular,

    #[error("integer overflow in exact group arithmetic")]
    Overflow,

    #[error("finite closure exceeded {0} elements (input is not crystallographic?)")]
    ClosureBound(usize),

    #[error("translation lattice is not invariant under the linear part")]
    LatticeNotInvariant,

    #[error("vector is not in the translation lattice")]
    NotInLattice,

    #[error("translation lattice incomplete after radius {radius}")]
    RankNotReached { radius: usize },

    #[error("word uses generator index {0}, which has no assigned element")]
    Unassigned(usize),

    #[error("generator `{0}` is the identity")]
    IdentityGenerator(String),

    #[error("target not reached within word length {0}")]
    Unreachable(usize),

    #[error("ball exceeded {0} elements")]
    MemoryBound(usize),

    #[error("invalid periodic graph: {0}")]
    Graph(String),

    #[error("unknown net `{0}`")]
    UnknownNet(String),

    #[error("graph is not vertex-transitive: per-vertex ring counts differ")]
    NotVertexTransitive,

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("ring census is not integral for relator {0}")]
    NonIntegralCensus(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
