use std::cmp::Ordering;
use std::fmt;

use super::{EdgeSet, Graph};
use crate::error::{Error, Result};

/// Default cap on cycle length for searches.
pub const DEFAULT_MAX_CYCLE_LEN: usize = 7;

/// A simple cycle in canonical form: it starts at its least vertex and runs in
/// the direction whose second vertex is smaller.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    graph_id: u64,
    vertices: Vec<usize>,
    /// `edge_ids[i]` joins `vertices[i]` and `vertices[(i + 1) % len]`.
    edge_ids: Vec<usize>,
    vmask: u64,
    edges: EdgeSet,
}

impl Cycle {
    /// Builds a cycle from a cyclic vertex sequence (any rotation/orientation).
    pub fn new(g: &Graph, seq: &[usize]) -> Result<Self> {
        if seq.len() < 3 {
            return Err(Error::InvalidCycle(format!(
                "a cycle needs at least 3 vertices, got {}",
                seq.len()
            )));
        }
        let mut vmask = 0u64;
        for &v in seq {
            if v >= g.vertex_count() {
                return Err(Error::InvalidCycle(format!(
                    "vertex index {v} out of range"
                )));
            }
            if vmask >> v & 1 == 1 {
                return Err(Error::InvalidCycle(format!(
                    "repeated vertex `{}`",
                    g.label(v)
                )));
            }
            vmask |= 1 << v;
        }
        let vertices = canonical_sequence(seq);
        let k = vertices.len();
        let mut edge_ids = Vec::with_capacity(k);
        let mut edges = EdgeSet::empty();
        for i in 0..k {
            let (u, v) = (vertices[i], vertices[(i + 1) % k]);
            let e = g.edge_between(u, v).ok_or_else(|| {
                Error::InvalidCycle(format!("no edge ({}, {})", g.label(u), g.label(v)))
            })?;
            edge_ids.push(e);
            edges.insert(e);
        }
        Ok(Cycle {
            graph_id: g.id(),
            vertices,
            edge_ids,
            vmask,
            edges,
        })
    }

    pub fn from_labels<S: AsRef<str>>(g: &Graph, labels: &[S]) -> Result<Self> {
        Cycle::new(g, &g.vertices_of(labels)?)
    }

    pub fn graph_id(&self) -> u64 {
        self.graph_id
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_mask(&self) -> u64 {
        self.vmask
    }

    pub fn edge_set(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn edge_ids(&self) -> &[usize] {
        &self.edge_ids
    }

    pub fn is_disjoint(&self, other: &Cycle) -> bool {
        self.vmask & other.vmask == 0
    }

    pub fn labels(&self, g: &Graph) -> Vec<String> {
        self.vertices
            .iter()
            .map(|&v| g.label(v).to_string())
            .collect()
    }

    /// `(1, 2, 3)` style rendering.
    pub fn display<'a>(&'a self, g: &'a Graph) -> impl fmt::Display + 'a {
        DisplayCycle { c: self, g }
    }

    /// Image under a vertex permutation (given as `perm[v]`).
    pub fn permuted(&self, g: &Graph, perm: &[usize]) -> Result<Cycle> {
        let seq: Vec<usize> = self.vertices.iter().map(|&v| perm[v]).collect();
        Cycle::new(g, &seq)
    }
}

struct DisplayCycle<'a> {
    c: &'a Cycle,
    g: &'a Graph,
}

impl fmt::Display for DisplayCycle<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &v) in self.c.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.g.label(v))?;
        }
        write!(f, ")")
    }
}

impl PartialOrd for Cycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shorter cycles first, then lexicographic by canonical vertex sequence.
impl Ord for Cycle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
            .then_with(|| self.graph_id.cmp(&other.graph_id))
    }
}

fn canonical_sequence(seq: &[usize]) -> Vec<usize> {
    let k = seq.len();
    let start = (0..k).min_by_key(|&i| seq[i]).unwrap();
    let next = seq[(start + 1) % k];
    let prev = seq[(start + k - 1) % k];
    if next <= prev {
        (0..k).map(|i| seq[(start + i) % k]).collect()
    } else {
        (0..k).map(|i| seq[(start + k - i) % k]).collect()
    }
}

/// All 3-cycles in canonical order.
pub fn enumerate_triangles(g: &Graph) -> Vec<Cycle> {
    enumerate_cycles(g, 3)
}

/// All simple cycles with at most `max_len` vertices, shortest first, then
/// lexicographic.
pub fn enumerate_cycles(g: &Graph, max_len: usize) -> Vec<Cycle> {
    let mut out = Vec::new();
    if max_len < 3 {
        return out;
    }
    let n = g.vertex_count();
    let mut path = Vec::with_capacity(max_len);
    for s in 0..n {
        path.clear();
        path.push(s);
        extend(g, s, 1u64 << s, max_len, &mut path, &mut out);
    }
    out.sort();
    out
}

fn extend(
    g: &Graph,
    start: usize,
    used: u64,
    max_len: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Cycle>,
) {
    let last = *path.last().unwrap();
    let nbrs = g.neighbors(last);
    if path.len() >= 3 && nbrs >> start & 1 == 1 && path[1] < last {
        out.push(Cycle::new(g, path).expect("enumerated path closes in the graph"));
    }
    if path.len() == max_len {
        return;
    }
    // only vertices larger than the start, so each cycle is found from its least vertex
    let higher = if start >= 63 {
        0
    } else {
        !((1u64 << (start + 1)) - 1)
    };
    let mut cand = nbrs & higher & !used;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        path.push(v);
        extend(g, start, used | 1 << v, max_len, path, out);
        path.pop();
    }
}

/// All unordered vertex-disjoint pairs `(a, b)` with `a` before `b` in the input.
pub fn disjoint_cycle_pairs(cycles: &[Cycle]) -> Vec<(Cycle, Cycle)> {
    let mut out = Vec::new();
    for (i, a) in cycles.iter().enumerate() {
        for b in &cycles[i + 1..] {
            if a.is_disjoint(b) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Shape of the intersection subgraph (shared vertices and shared edges) of two cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "edges")]
pub enum IntersectionType {
    Empty,
    SingleVertex,
    /// A connected path with the given (positive) number of edges.
    SimplePath(usize),
    Identical,
    Other,
}

impl IntersectionType {
    /// Single vertex, path, or the whole cycle: the shapes a composition accepts.
    pub fn is_path_like(self) -> bool {
        matches!(
            self,
            IntersectionType::SingleVertex
                | IntersectionType::SimplePath(_)
                | IntersectionType::Identical
        )
    }
}

pub fn intersection_type(c1: &Cycle, c2: &Cycle) -> IntersectionType {
    let shared_v = c1.vmask & c2.vmask;
    if shared_v == 0 {
        return IntersectionType::Empty;
    }
    if c1.vmask == c2.vmask && c1.edges == c2.edges {
        return IntersectionType::Identical;
    }
    let shared_e = c1.edges.and(&c2.edges);
    let ne = shared_e.len();
    let nv = shared_v.count_ones() as usize;
    if ne == 0 {
        return if nv == 1 {
            IntersectionType::SingleVertex
        } else {
            IntersectionType::Other
        };
    }
    if ne + 1 != nv {
        return IntersectionType::Other;
    }
    // Collect shared edges as vertex pairs via c1's edge list.
    let k = c1.vertices.len();
    let mut touched = 0u64;
    let mut adj: Vec<(usize, usize)> = Vec::with_capacity(ne);
    for i in 0..k {
        if shared_e.contains(c1.edge_ids[i]) {
            let (u, v) = (c1.vertices[i], c1.vertices[(i + 1) % k]);
            touched |= 1 << u | 1 << v;
            adj.push((u, v));
        }
    }
    if touched != shared_v {
        return IntersectionType::Other;
    }
    // Connectivity of (shared_v, adj).
    let first = shared_v.trailing_zeros() as usize;
    let mut reach = 1u64 << first;
    loop {
        let before = reach;
        for &(u, v) in &adj {
            if reach >> u & 1 == 1 || reach >> v & 1 == 1 {
                reach |= 1 << u | 1 << v;
            }
        }
        if reach == before {
            break;
        }
    }
    if reach == shared_v {
        IntersectionType::SimplePath(ne)
    } else {
        IntersectionType::Other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_construction, complete_graph};

    fn k(n: usize) -> Graph {
        complete_graph::<&str>(n, None).unwrap()
    }

    fn cyc(g: &Graph, l: &[&str]) -> Cycle {
        Cycle::from_labels(g, l).unwrap()
    }

    #[test]
    fn canonical_form_ignores_rotation_and_orientation() {
        let g = k(6);
        let a = cyc(&g, &["3", "1", "5", "2"]);
        let b = cyc(&g, &["2", "5", "1", "3"]);
        let c = cyc(&g, &["5", "1", "3", "2"]);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.labels(&g), vec!["1", "3", "2", "5"]);
        assert_eq!(a.display(&g).to_string(), "(1, 3, 2, 5)");
    }

    #[test]
    fn invalid_cycles() {
        let g = build_construction("k6-c6-k6").unwrap();
        assert!(Cycle::from_labels(&g, &["1", "2"]).is_err());
        assert!(Cycle::from_labels(&g, &["1", "2", "1"]).is_err());
        assert!(Cycle::from_labels(&g, &["1", "2", "A"]).is_err());
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(enumerate_triangles(&k(6)).len(), 20);
        assert_eq!(enumerate_triangles(&k(4)).len(), 4);
        let path =
            Graph::new(&["1", "2", "3", "4"], &[("1", "2"), ("2", "3"), ("3", "4")]).unwrap();
        assert!(enumerate_triangles(&path).is_empty());
        for n in 3..=10 {
            let c = n * (n - 1) * (n - 2) / 6;
            assert_eq!(enumerate_triangles(&k(n)).len(), c);
        }
    }

    /// Brute-force oracle: every vertex sequence, canonicalised and deduplicated.
    fn brute_force_cycles(g: &Graph, max_len: usize) -> Vec<Cycle> {
        use itertools::Itertools;
        let mut found = std::collections::BTreeSet::new();
        for len in 3..=max_len {
            for seq in (0..g.vertex_count()).permutations(len) {
                if let Ok(c) = Cycle::new(g, &seq) {
                    found.insert(c);
                }
            }
        }
        found.into_iter().collect()
    }

    #[test]
    fn cycle_enumeration_matches_brute_force() {
        assert_eq!(brute_force_cycles(&k(4), 4).len(), 7);
        assert_eq!(enumerate_cycles(&k(4), 4), brute_force_cycles(&k(4), 4));
        assert_eq!(enumerate_cycles(&k(5), 3).len(), 10);
        assert_eq!(enumerate_cycles(&k(5), 5), brute_force_cycles(&k(5), 5));
        let c5 = Graph::new(
            &["1", "2", "3", "4", "5"],
            &[("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "1")],
        )
        .unwrap();
        assert_eq!(enumerate_cycles(&c5, 5).len(), 1);
        let g = build_construction("k6-c6-k6").unwrap();
        let sub = g
            .induced_subgraph(&["4", "5", "6", "A", "B", "C", "1"])
            .unwrap()
            .graph;
        assert_eq!(enumerate_cycles(&sub, 6), brute_force_cycles(&sub, 6));
    }

    #[test]
    fn disjoint_pairs() {
        let g = k(6);
        let pairs = disjoint_cycle_pairs(&enumerate_triangles(&g));
        assert_eq!(pairs.len(), 10);
        assert!(disjoint_cycle_pairs(&enumerate_triangles(&k(5))).is_empty());
    }

    #[test]
    fn disjoint_pairs_follow_table_order() {
        let g = k(10);
        let k6 = g
            .induced_subgraph(&["1", "2", "4", "5", "6", "10"])
            .unwrap()
            .graph;
        let pairs: Vec<String> = disjoint_cycle_pairs(&enumerate_triangles(&k6))
            .iter()
            .map(|(a, b)| format!("{} {}", a.display(&k6), b.display(&k6)))
            .collect();
        let printed = [
            "(1, 2, 4) (5, 6, 10)",
            "(1, 2, 5) (4, 6, 10)",
            "(1, 2, 6) (4, 5, 10)",
            "(1, 2, 10) (4, 5, 6)",
            "(1, 4, 5) (2, 6, 10)",
            "(1, 4, 6) (2, 5, 10)",
            "(1, 4, 10) (2, 5, 6)",
            "(1, 5, 6) (2, 4, 10)",
            "(1, 5, 10) (2, 4, 6)",
            "(1, 6, 10) (2, 4, 5)",
        ];
        assert_eq!(pairs, printed);
    }

    #[test]
    fn intersection_examples() {
        let g = build_construction("k6-c6-k6").unwrap();
        let it = |a: &[&str], b: &[&str]| intersection_type(&cyc(&g, a), &cyc(&g, b));
        assert_eq!(
            it(&["1", "2", "3"], &["1", "2", "4"]),
            IntersectionType::SimplePath(1)
        );
        assert_eq!(
            it(&["1", "2", "3"], &["4", "5", "6"]),
            IntersectionType::Empty
        );
        assert_eq!(
            it(&["4", "5", "A"], &["4", "6", "C"]),
            IntersectionType::SingleVertex
        );
        assert_eq!(
            it(&["1", "2", "3"], &["3", "2", "1"]),
            IntersectionType::Identical
        );
        assert_eq!(
            it(&["1", "2", "3", "4"], &["1", "2", "3", "5"]),
            IntersectionType::SimplePath(2)
        );
        // two shared vertices, no shared edge
        assert_eq!(
            it(&["1", "2", "3", "4"], &["1", "5", "3", "6"]),
            IntersectionType::Other
        );
        // two disjoint shared edges
        assert_eq!(
            it(&["1", "2", "3", "4"], &["1", "2", "4", "3"]),
            IntersectionType::Other
        );
    }
}
