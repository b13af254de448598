use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("character {ch:?} at position {pos} is not in the alphabet")]
    Membership { ch: char, pos: usize },

    #[error("alphabet letter {0:?} occurs more than once")]
    DuplicateLetter(char),

    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,

    #[error("alphabet has {0} letters, at most {max} are supported", max = crate::words::MAX_LETTERS)]
    AlphabetTooLarge(usize),

    #[error("ordering {ordering:?} is not a permutation of the alphabet {alphabet:?}")]
    OrderingMismatch { ordering: String, alphabet: String },

    #[error("words are over different alphabets")]
    AlphabetMismatch,

    #[error("operation needs a ternary alphabet, got {0} letters")]
    TernaryOnly(usize),

    #[error("empty pattern: {0}")]
    Degenerate(&'static str),

    #[error("rank {rank} is outside 1..={k}")]
    RankOutOfRange { rank: usize, k: usize },

    #[error("position {pos} is out of range for a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("words have different lengths ({left} and {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("integer overflow while counting occurrences")]
    Overflow,

    #[error("letters {first:?} and {second:?} at position {pos} are consecutive (or equal) in the ordering")]
    NotE1 {
        pos: usize,
        first: char,
        second: char,
    },

    #[error("blocks at positions {first} and {second} overlap")]
    Overlap { first: usize, second: usize },

    #[error("unexpected letters at position {pos}: {detail}")]
    Pattern { pos: usize, detail: String },

    #[error("transformation needs at least one factor")]
    EmptySpec,

    #[error("swap pair must consist of two distinct letters")]
    DegeneratePair,

    #[error("not a strong (2·t) transformation: sum of p = {sum_p}, sum of q = {sum_q}")]
    NotStrong2t { sum_p: i64, sum_q: i64 },

    #[error("not a strong (3·t) transformation: interior sums {sums:?} are not balanced")]
    NotStrong3t { sums: [i64; 3] },

    #[error("factors mix forward and reversed orientations")]
    MixedOrientation,

    #[error("blocks at {first} and {second} do not form an αβ-site")]
    NotAlphaBeta { first: usize, second: usize },

    #[error("blocks at {first} and {second} do not form an SE-site")]
    NotSe { first: usize, second: usize },

    #[error("pair is not (outer letter, middle letter) of the ordering")]
    NotClassicPair,

    #[error("malformed grouping: {0}")]
    MalformedGrouping(String),

    #[error("{what} is {actual}, above the cap of {cap}")]
    Cap {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("word does not have the required shape: {0}")]
    Shape(String),

    #[error("family parameter must be at least {min}, got {got}")]
    FamilyParameter { min: usize, got: usize },
}
