//! Sharp constants in L2 Markov-type inequalities for the Hermite,
//! Laguerre and Jacobi weights.
//!
//! The constant `M_{n,k}` is the smallest number such that
//! `||p^(k)|| <= M_{n,k} ||p||` for every real polynomial `p` of degree at
//! most `n`, with both norms taken in the weighted L2 space of a classical
//! weight. It is computed as the square root of the largest eigenvalue of a
//! Gram matrix built from the coefficients of `D^k q_j` in the orthonormal
//! basis `q_0, q_1, ...`.

// NaN-rejecting `!(x > y)` checks, float guards and index loops over
// matrices are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::redundant_guards, clippy::needless_range_loop)]

pub mod diffops;
pub mod linalg;
pub mod markov;
pub mod orthopoly;
pub mod special_fn;
pub mod verify;

mod error;
mod sum;

pub use error::{Error, Result};
pub use markov::{markov_constant, MarkovResult, Method, Route};
pub use orthopoly::Weight;
pub use sum::NeumaierSum;
