//! Exact-arithmetic curvature and special geometric structures on
//! finite-dimensional metric Lie algebras.
//!
//! The crate computes Levi-Civita connections, Ricci tensors and Einstein
//! verdicts over an exact number tower (rationals, one quadratic extension
//! `Q(sqrt(d))`, or a float fallback), recognizes Sasaki and pseudo-Kahler
//! structures, builds central and standard extensions including the
//! Sasaki-Einstein and Kahler-Einstein constructions with their reductions,
//! and computes constrained Nikolayevsky derivations. A built-in catalog of
//! worked examples and classification families can be re-verified end to end
//! with [`catalog::verify`].

pub mod error;
pub mod exactnum;
pub mod catalog;
pub mod curvature;
pub mod extensions;
pub mod exterior;
pub mod liealg;
pub mod nikolayevsky;
pub mod notation;
pub mod structures;

pub use error::Error;
