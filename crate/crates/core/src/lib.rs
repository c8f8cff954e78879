//! Discourse-coherence classification over RST trees.
//!
//! The crate bundles a small reverse-mode differentiation core
//! ([`numcore`]), the RST tree format ([`rst`]), corpus handling
//! ([`corpus`]), the RST-Recursive model ([`tree_model`]), the ParSeq
//! baseline and its ensemble with RST-Recursive ([`parseq`]), training and
//! the multi-seed harness ([`trainer`]) and evaluation ([`metrics`]).

pub mod corpus;
pub mod edu_encoder;
pub mod error;
pub mod metrics;
pub mod model;
pub mod numcore;
pub mod parseq;
pub mod rst;
pub mod trainer;
pub mod tree_model;

pub use error::{Error, Result};
