use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree sequence must have at least one vertex")]
    EmptySequence,

    #[error("in-degree sum {in_sum} differs from out-degree sum {out_sum}")]
    InOutMismatch { in_sum: u64, out_sum: u64 },

    #[error("degree sum {0} is odd")]
    OddDegreeSum(u64),

    #[error("not graphical")]
    NotGraphical,

    #[error("not digraphical")]
    NotDigraphical,

    #[error("frozen chain: {0}")]
    Frozen(String),

    #[error("need at least two {what}, found {found}")]
    TooFewEdges { what: &'static str, found: usize },

    #[error("state space exceeds the enumeration cap of {cap} states")]
    CapExceeded { cap: usize },

    #[error("invalid edge ({0}, {1}): {2}")]
    InvalidEdge(usize, usize, &'static str),

    #[error("edge replacement rejected: {0}")]
    Replacement(String),

    #[error("degree sequences do not match")]
    DegreeMismatch,

    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),

    #[error("3-switch rejected: {0}")]
    InvalidSwitch(String),

    #[error("anchor precondition violated: {0}")]
    Anchor(String),

    #[error("vertices {0:?} do not induce a directed 3-cycle")]
    NotThreeCycle([usize; 3]),

    #[error("repair stuck at profile (p={p}, q={q}) after {switches} 3-switches")]
    RepairStuck { p: usize, q: usize, switches: usize },

    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotGraphical
            | Error::NotDigraphical
            | Error::InOutMismatch { .. }
            | Error::OddDegreeSum(_)
            | Error::Frozen(_)
            | Error::TooFewEdges { .. }
            | Error::DegreeMismatch
            | Error::RepairStuck { .. } => 2,
            Error::CapExceeded { .. } => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
