//! Small simple graphs with stable labels and edge indices.

mod automorphism;
mod construction;
mod cycle;
mod edge_set;
mod graph;

pub use automorphism::{
    automorphisms, find_automorphism, is_isomorphic, triangle_orbits, Orbit, Permutation,
    MAX_AUTOMORPHISM_VERTICES,
};
pub use construction::{build_construction, complete_graph, MAX_COMPLETE};
pub use cycle::{
    disjoint_cycle_pairs, enumerate_cycles, enumerate_triangles, intersection_type, Cycle,
    IntersectionType, DEFAULT_MAX_CYCLE_LEN,
};
pub use edge_set::EdgeSet;
pub(crate) use graph::de_pairs;
pub use graph::{normalize_label, Graph, GraphDoc, InducedSubgraph, MAX_EDGES, MAX_VERTICES};
