//! Finite categories with a class of edges, their correspondences, and
//! lattice-valued coefficient systems with exceptional pushforwards.

pub mod category;
pub mod fincat;
pub mod finset;
pub mod report;
pub mod setup;
pub mod simplicial;
pub mod grid;
pub mod lattice;
pub mod span;
pub mod model;
pub mod shriek;
pub mod descent;
