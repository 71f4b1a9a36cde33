//! Monotone paths in a horizontal strip: exact enumeration, growth
//! constants, the coral-snake poset with inconsistent pairs, and mixing of
//! the local-move Markov chains.

pub mod cli;
pub mod error;
pub mod graph;
pub mod growth;
pub mod kernel;
pub mod linalg;
pub mod markov;
pub mod pip;
pub mod poly;
pub mod transfer;

pub use error::{Error, Result};
