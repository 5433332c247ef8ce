use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad classification used to map failures onto process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input text, fixture schema problems, bad command arguments.
    Input,
    /// The input parsed but violates a mathematical requirement.
    Validation,
    /// Two independent computations disagreed. Never expected on valid data.
    Internal,
}

/// Component and ideal indices are stored 0-based and printed 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("intersection matrix is empty")]
    EmptyGraph,
    #[error("intersection matrix row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("intersection matrix is not symmetric at (E{}, E{})", .i + 1, .j + 1)]
    NotSymmetric { i: usize, j: usize },
    #[error("self-intersection of E{} is {value}, expected at most -1", .component + 1)]
    BadDiagonal { component: usize, value: i64 },
    #[error("entry (E{}, E{}) is {value}, expected 0 or 1", .i + 1, .j + 1)]
    BadOffDiagonal { i: usize, j: usize, value: i64 },
    #[error("intersection matrix is not negative definite (leading minor of order {order} is {minor})")]
    NotNegativeDefinite { order: usize, minor: String },
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error("dual graph is not a tree ({edges} edges on {n} vertices)")]
    NotTree { edges: usize, n: usize },
    #[error("edge ({}, {}) is invalid", .0 + 1, .1 + 1)]
    BadEdge(usize, usize),
    #[error("derived self-intersection of E{} is {value}, not an integer", .component + 1)]
    NonIntegralSelfIntersection { component: usize, value: String },
    #[error("canonical coefficient of E{} is -1, self-intersection is undetermined", .component + 1)]
    DivisionByZero { component: usize },
    #[error("canonical divisor rebuilt from the derived matrix differs at E{}", .component + 1)]
    CanonicalMismatch { component: usize },
    #[error("{what}: expected length {expected}, found {found}")]
    LengthMismatch { what: String, expected: usize, found: usize },
    #[error("ideal {} has a negative coefficient at E{}", .ideal + 1, .component + 1)]
    NegativeCoefficient { ideal: usize, component: usize },
    #[error("ideal {} is the zero divisor", .ideal + 1)]
    ZeroIdeal { ideal: usize },
    #[error("ideal {} is not antinef: F{}·E{} > 0", .ideal + 1, .ideal + 1, .component + 1)]
    NotAntinef { ideal: usize, component: usize },
    #[error("no ideals given")]
    NoIdeals,
    #[error("divisor {0} is not antinef")]
    DivisorNotAntinef(String),
    #[error("region facet supported only by non-rupture, non-dicritical components {components}")]
    BindingNonRuptureConstraint { components: String },
    #[error("non-integral value {value} in {what}")]
    NonIntegralResult { what: String, value: String },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid ray: {0}")]
    InvalidRay(String),
    #[error("ray direction meets no supporting hyperplane")]
    DirectionOrthogonal,
    #[error("{0} is not a jumping point")]
    NotAJumpingPoint(String),
    #[error("fractional multiplicity sum at {point} is {value}, not an integer")]
    NonIntegralTotal { point: String, value: String },
    #[error("numerical inequality violated at {point}: value {value} on {support}")]
    InequalityViolated { point: String, support: String, value: String },
    #[error("offset ray leaves the isolating neighbourhood: another wall line crosses at {0}")]
    OffsetTooLarge(String),
    #[error("no admissible offset found around {0}")]
    NoAdmissibleOffset(String),
    #[error("horizon too small: new residue class still appears at {0}")]
    HorizonTooSmall(String),
    #[error("box contains no wall lines")]
    BoxTooSmall,
    #[error("operation requires {expected} ideals, tuple has {found}")]
    UnsupportedRank { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("bad rational: {0}")]
    RationalFormat(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) | Error::Schema(_) | Error::RationalFormat(_) => ErrorKind::Input,
            Error::NonIntegralResult { .. }
            | Error::NonIntegralTotal { .. }
            | Error::InequalityViolated { .. }
            | Error::Inconsistent(_) => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        }
    }
}
