use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),

    #[error("antiparallel edge {0} -> {1} in an oriented graph")]
    Antiparallel(usize, usize),

    #[error("graph contains a directed cycle {cycle:?}")]
    Cyclic { cycle: Vec<usize> },

    #[error("{what}: size {size} exceeds the limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("not a tournament: pair ({0}, {1}) {2}")]
    NotTournament(usize, usize, &'static str),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not congruent to 3 mod 4")]
    NotThreeModFour(u64),

    #[error("coloring does not match host graph: {0}")]
    ColoringMismatch(String),

    #[error("color {color} out of range 1..={num_colors}")]
    ColorOutOfRange { color: usize, num_colors: usize },

    #[error("vertex coloring is not proper: edge {0} -> {1} joins equal colors")]
    ImproperVertexColoring(usize, usize),

    #[error("vertex sets are not pairwise disjoint (vertex {0} repeated)")]
    NotDisjoint(usize),

    #[error("no path can be threaded: good set of A_{index} is empty")]
    ThreadFailure { index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
