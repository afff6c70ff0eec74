//! Mod-2 homology model of graphs embedded in real projective 3-space.
//!
//! An embedding is represented by its Z/2 edge-signing: an edge is `-` when it
//! crosses the projective boundary an odd number of times, and a cycle is
//! 1-homologous exactly when it carries an odd number of `-` edges. On top of
//! that shadow the crate provides
//!
//! * [`graphs`]: small labelled graphs, cycle enumeration, automorphisms;
//! * [`homology`]: signings, switching classes, partial constraint sets;
//! * [`certificates`]: re-checkable witnesses that a signing forces a link or
//!   a three-component link, and searches built on them;
//! * [`replay`]: declarative proof scripts, the engine that re-verifies them
//!   step by step, and the K10 sweep.

pub mod certificates;
pub mod error;
pub mod graphs;
pub mod homology;
pub mod replay;

pub use error::{Error, Result};
