//! Parser and printer for the tuple notation of Lie algebras, the metric
//! term language, coefficient expressions, and the JSON schemas of every
//! artifact type.

pub mod expr;
pub mod json;
pub mod text;

pub use expr::{eval_expr, eval_scalar, Params};
pub use text::{
    parse_algebra, parse_algebra_with_params, parse_metric, parse_metric_with_params,
    print_algebra, print_metric,
};

/// Errors from the text formats, with locations where available.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("parse error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("Jacobi identity fails on basis triple (e{i},e{j},e{k})")]
    Jacobi { i: usize, j: usize, k: usize },
    #[error("metric entry ({i},{j}) has no matching symmetric partner")]
    Asymmetric { i: usize, j: usize },
}
