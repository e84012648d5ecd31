//! Exact collision probabilities and entropy averages for the diagonal
//! masking family `g_k(x) = f(x) + k ⊙ x` over GF(q)^n.
//!
//! * [`gf`]: table-driven finite fields and vector helpers.
//! * [`dist`]: exact distributions, collision probability and entropies.
//! * [`family`]: the masking family, its averages, bounds and the
//!   decompositions used to check them.
//! * [`verify`]: exhaustive, random and hill-climb campaigns.
//! * [`cli`]: the `maskent` command-line front end.

pub mod cli;
pub mod dist;
pub mod error;
pub mod family;
pub mod gf;
pub mod serial;
pub mod verify;

pub use dist::{ExactDistribution, Rational};
pub use error::{Error, Result};
pub use family::{Budget, FunctionTable, TheoremReport};
pub use gf::{Element, FieldSpec, FieldVector};
