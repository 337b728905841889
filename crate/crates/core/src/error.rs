use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank {0}: the free group needs at least one generator")]
    InvalidRank(usize),

    #[error("invalid relator length {0}")]
    InvalidLength(usize),

    #[error("letter {letter} is out of range for rank {rank}")]
    LetterOutOfRange { letter: i32, rank: usize },

    #[error("word is not freely reduced at position {0}")]
    NotReduced(usize),

    #[error("expected a word over {expected} generators, got rank {found}")]
    WrongRank { expected: usize, found: usize },

    #[error("relator is central (its abelianization vanishes)")]
    CentralElement,

    #[error("the trivial relator does not define a proper quotient")]
    DegenerateRelator,

    #[error("relator set is empty")]
    EmptyRelatorSet,

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("quotient is infinite")]
    InfiniteGroup,

    #[error("quotient order {order} exceeds the cap {cap}")]
    CapExceeded { order: String, cap: usize },

    #[error("zeta({0}) diverges")]
    Divergent(i64),

    #[error("{0} is not prime")]
    InvalidPrime(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}
