//! Hamiltonian cycles in cubic graphs through 1-factor contraction.
//!
//! A cubic graph `G` with a perfect matching `F` contracts to a quartic
//! multigraph `X = G/F` whose vertex transitions split into traversing and
//! non-traversing pairs. Hamiltonian cycles of `G` correspond to *good
//! Eulerian subgraphs* of `X`. This crate builds that machinery for the
//! I-graph family and its quartic quotients `X(s,t,r)`, with an exact search,
//! a constructive witness library, and brute-force oracles to check both.

pub mod arith;
pub mod constructive;
pub mod error;
pub mod euler;
pub mod families;
pub mod io;
pub mod iso;
pub mod multigraph;
pub mod oracle;
pub mod quotient;

pub use error::{Error, Result};
pub use multigraph::{EdgeId, EdgeSubset, Multigraph, MultigraphBuilder, VertexId};
