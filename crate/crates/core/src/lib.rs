//! The circular multispecies TASEP on words, its stationary distribution
//! through multi-line queues, and closed forms at sorted words.

pub mod binomial;
pub mod chain;
pub mod error;
pub mod formulas;
pub mod linalg;
pub mod mlq;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use words::{Letter, TypeVector, Word};
