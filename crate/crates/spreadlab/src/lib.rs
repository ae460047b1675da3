//! spreadlab: computing, bounding and empirically studying the spread of
//! graphs, the maximum variance of a Lipschitz function at a uniform random
//! vertex.
//!
//! The crate is organized around six pieces:
//!
//! - [`graph`]: immutable simple graphs, BFS, components, boundaries, and the
//!   lengthed multigraph used for kernels;
//! - [`gen`]: seeded G(n,p) and configuration-model d-regular generation on a
//!   pinned portable RNG;
//! - [`decompose`]: giant component, 2-core, kernel with edge lengths,
//!   pendant trees, excess, and the size-interval predicate;
//! - [`spread`]: exact spread, local-search lower bounds, the three-level and
//!   kernel-path constructions, tail profiles and level-set checks;
//! - [`expansion`]: Cheeger constants (exact and spectral), vertex- and
//!   (beta, eta)-expansion certificates, decorated-expander verification;
//! - [`harness`]: reproducible sweeps with CSV/JSON output and the built-in
//!   selfcheck.

pub mod decompose;
pub mod expansion;
pub mod gen;
pub mod graph;
pub mod harness;
pub mod spread;

pub use graph::{Graph, LengthedMultiGraph};
