//! Distance-constrained vehicle routing on trees.
//!
//! The crate provides an exact dynamic program for instances that need few tours, a component
//! decomposition that lets the exact solver run on pieces of a large tree, and the resulting
//! approximation algorithm. Bin packing utilities and instance generators support the analysis of
//! that algorithm.

pub mod approx;
pub mod binpack;
pub mod decomposition;
pub mod error;
pub mod exact;
pub mod generators;
pub mod instance;
pub mod properties;
pub mod rational;
pub mod reduced;

pub use error::{Error, Result};
pub use instance::{
    normalize, parse_instance, serialize_instance, EdgeSpec, NormalizedInstance, RoutingInstance, Solution, Tree,
    TreeInstance, VertexId,
};
