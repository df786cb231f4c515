use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("the parent relation contains a cycle through letter `{0}`")]
    Cycle(String),
    #[error("letter `{0}` is declared more than once")]
    DuplicateLetter(String),
    #[error("word uses letters outside the alphabet")]
    AlphabetMismatch,
    #[error("`{u}` is not below `{w}` in factor order")]
    NotComparable { u: String, w: String },
    #[error("{what} has {found} elements, over the cap of {cap}")]
    SizeCapExceeded { what: &'static str, found: usize, cap: usize },
    #[error("word is too short for this operation")]
    Length,
    #[error("position {0} is not reducible")]
    NotReducible(usize),
    #[error("the source word of an embedding must not be flat")]
    FlatSource,
    #[error("the bottom word must be non-empty for the forest formula")]
    EmptyBottomWord,
    #[error("this operation needs rooted words (every letter minimal)")]
    NotAntichain,
    #[error("multiset is not realisable by an embedding")]
    InvalidMultiset,
    #[error("chain is not maximal in the interval")]
    NotMaximal,
    #[error("matching violates {0}")]
    Invariant(String),
    #[error("{check} fails on [{interval}] at chain {chain}: {detail}")]
    Structural { check: &'static str, interval: String, chain: String, detail: String },
    #[error("methods disagree on [{u}, {w}]: {detail}")]
    Disagreement { u: String, w: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
