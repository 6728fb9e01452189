use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ribbon graph: {0}")]
    InvalidGraph(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown dart {0}")]
    UnknownDart(u32),
    #[error("doe not a dart: {0}")]
    DoeNotADart(u32),
    #[error("unflippable loop edge at dart {0}")]
    UnflippableLoop(u32),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("move {index} is not applicable: {reason}")]
    InapplicableMove { index: usize, reason: String },
    #[error("adjacency violation at letter {position}")]
    Adjacency { position: usize },
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("object mismatch: word ends at edge {end}, next starts at edge {start}")]
    ObjectMismatch { end: u32, start: u32 },
    #[error("move sequence is not a loop at the base graph")]
    NotALoop,
    #[error("shuffles do not preserve punctures")]
    ShuffleInPunctureMap,
    #[error("puncture correspondence failed: {0}")]
    PunctureMismatch(String),
    #[error("arithmetic overflow in exact integer computation")]
    Overflow,
    #[error("value out of domain: {0}")]
    OutOfDomain(String),
    #[error("not a PPSL2(Z) element: {0}")]
    InvalidElement(String),
    #[error("{0}")]
    Budget(String),
    #[error("not a covering: {0}")]
    NotCovering(String),
    #[error("expected a graph of rank 1, found rank {0}")]
    RankMismatch(i64),
    #[error("vertex count {0} is odd; trivalent graphs need 3V = 2E")]
    OddVertexCount(usize),
    #[error("vertex count {count} exceeds the enumeration bound {bound}")]
    BoundExceeded { count: usize, bound: usize },
}
