use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty word")]
    EmptyWord,
    #[error("letter {0} is not a positive integer")]
    BadLetter(String),
    #[error("invalid type vector: {0}")]
    BadType(String),
    #[error("word {word} has a gap in its alphabet (letter {missing} never occurs)")]
    GappedWord { word: String, missing: usize },
    #[error("letter {letter} exceeds alphabet size {r}")]
    LetterOutOfRange { letter: usize, r: usize },
    #[error("nothing to merge: word uses a single letter")]
    NothingToMerge,
    #[error("number of heavy letters {b} out of range for length {length}")]
    SuffixOutOfRange { length: usize, b: usize },
    #[error("word {0} is not over the two-letter suffix alphabet")]
    NotASuffix(String),
    #[error("state space of {states} words exceeds the cap of {cap}")]
    CapExceeded { states: u128, cap: u128 },
    #[error("enumeration of {count} multi-line queues exceeds the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("malformed multi-line queue: {0}")]
    MalformedMlq(String),
    #[error("bottom word {0} does not start with the required two letters")]
    WrongPrefix(String),
    #[error("start word type does not match the chain type")]
    TypeMismatch,
    #[error("invalid rates: {0}")]
    BadRates(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
