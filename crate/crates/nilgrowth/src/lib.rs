//! Exact-arithmetic toolkit for word metrics and geodesic growth in
//! virtually nilpotent groups.
//!
//! The crate bundles:
//!
//! - exact rational polytopes with Minkowski gauges ([`geom`]),
//! - the Engel group as a plane-path model ([`engel`]),
//! - a registry of built-in groups behind one interface ([`group`]),
//! - words over weighted generating sets ([`word`]),
//! - Schreier graphs, simple cycles, and loop-erasure ([`schreier`]),
//! - the facet-incidence growth classifier ([`criterion`]),
//! - exhaustive BFS norm tables, growth counting, and the desk-scale
//!   verification harnesses ([`engine`]),
//! - the `nilgrowth` command-line interface ([`cli`]).

pub mod cli;
pub mod criterion;
pub mod engel;
pub mod engine;
pub mod geom;
pub mod group;
pub mod oracle;
pub mod rat;
pub mod schreier;
pub mod word;
