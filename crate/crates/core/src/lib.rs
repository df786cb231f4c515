//! Möbius function of generalized factor order on words over a rooted-forest
//! alphabet.
//!
//! Four independent routes compute `μ(u, w)`: the defining recursion, the
//! reduced Euler characteristic of the order complex, a count of critical
//! chains under a lexicographic discrete Morse matching, and closed formulas
//! built from principal factors.

pub mod alphabet;
pub mod chains;
pub mod cli;
pub mod error;
pub mod formulas;
pub mod interval;
pub mod morse;
pub mod verify;
pub mod words;

pub use alphabet::{AlphabetKind, AlphabetPoset, Letter};
pub use error::{Error, Result};
pub use words::{Cell, Embedding, Word};
