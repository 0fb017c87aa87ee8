//! Primitive ideal spaces, computed combinatorially.
//!
//! The library covers directed graphs, row-finite higher-rank graphs without
//! sources, singly generated dynamical systems on finite sets and finite group
//! actions, together with the integer-lattice and circle arithmetic they share.

pub mod digraph;
pub mod kgraph;
pub mod lattice;
pub mod sgds;
pub mod transform;
