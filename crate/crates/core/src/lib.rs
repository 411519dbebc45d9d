//! Exact birdtrack operator algebra over `V^{⊗n}`.
//!
//! Operators are products of symmetrizer sets, antisymmetrizer sets and
//! permutations. [`rules`] rewrites them (absorption, wedge cancellation,
//! Tung collapse, propagation) and every rewrite can be checked against the
//! brute-force expansion in the rational group algebra provided by
//! [`symgroup`].

pub mod cli;
pub mod error;
pub mod expr;
pub mod rules;
pub mod symgroup;
pub mod tableau;

pub use error::{Error, Result};
pub use expr::{BirdtrackExpr, Factor, SetKind};
pub use symgroup::{AlgebraElement, Permutation};
pub use tableau::Tableau;
