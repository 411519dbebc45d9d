//! Birdtrack expressions: AST, text form, builders and the expansion oracle.

mod ast;
pub mod builders;
mod dsl;
mod expand;

pub use ast::{normalize_sets, sets_absorbed, Annotation, BirdtrackExpr, Factor, Role, Scalar, SetKind};
pub use builders::{ks_hermitian, young, young_bar};
pub use dsl::{parse_expr, print_expr, print_factor, print_scalar};
pub use expand::{compare, Comparison, expand, expand_bar, expand_bar_dense, expand_dense, DEFAULT_ORACLE_BOUND};

