use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("edge subset has length {got}, host graph has {expected} edges")]
    SubsetLength { expected: usize, got: usize },

    #[error("edge subset is not 2-regular at vertex {vertex} (degree {degree})")]
    NotTwoRegular { vertex: usize, degree: usize },

    #[error("graph is not cubic: vertex {vertex} has degree {degree}")]
    NotCubic { vertex: usize, degree: usize },

    #[error("graph is not quartic: vertex {vertex} has degree {degree}")]
    NotQuartic { vertex: usize, degree: usize },

    #[error("edge set is not a perfect matching: {0}")]
    NotPerfectMatching(String),

    #[error("1-factor is not special (auxiliary graph is not bipartite)")]
    NotSpecial,

    #[error("coloring is invalid: {0}")]
    InvalidColoring(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("subgraph is not admissible: {0}")]
    NotAdmissible(String),

    #[error("tour is invalid: {0}")]
    InvalidTour(String),

    #[error("tour has {0} components, expected 1")]
    MultiComponentTour(usize),

    #[error("expansion not possible: {0}")]
    Expansion(String),

    #[error("no base witness stored for X({s},{t},{r})")]
    NoBaseWitness { s: usize, t: usize, r: usize },

    #[error("size guard exceeded: {what} has {size} vertices, limit is {limit}")]
    SizeGuard { what: &'static str, size: usize, limit: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
