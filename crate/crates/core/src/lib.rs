//! Dynamic string alignment structures.
//!
//! A pattern `P` of length `m` and a text `T` of length `n` both accept single
//! character substitutions, and queries ask for `f(P, T[i..i+m-1])` where `f`
//! is Hamming distance, inner product or wildcard matching. Exact answers come
//! from a periodically rebuilt alignment table patched with logged updates;
//! approximate Hamming distance uses sparse random projections.

pub mod approx;
pub mod conv;
pub mod lazy;
pub mod oracle;
pub mod problems;
pub mod reductions;
pub mod strings;

pub use strings::{Alphabet, AlphabetKind, DynamicString, StringError, Symbol, Target, Update, UpdateLog, WILDCARD};
