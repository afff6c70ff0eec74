use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::EdgeSet;
use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;
pub const MAX_EDGES: usize = EdgeSet::CAPACITY;

/// Trims a label and strips leading zeros from purely numeric labels, so
/// `"07"` and `"7"` name the same vertex.
pub fn normalize_label(raw: &str) -> String {
    let t = raw.trim();
    if !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) {
        let s = t.trim_start_matches('0');
        if s.is_empty() {
            "0".to_string()
        } else {
            s.to_string()
        }
    } else {
        t.to_string()
    }
}

/// A simple undirected graph. Vertices keep their declaration order; edges are
/// indexed lexicographically by `(min endpoint, max endpoint)` position.
#[derive(Clone, Debug)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<u64>,
    edge_lookup: Vec<u16>,
    id: u64,
}

const NO_EDGE: u16 = u16::MAX;

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|l| normalize_label(l.as_ref())).collect();
        if labels.is_empty() {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        if labels.len() > MAX_VERTICES {
            return Err(Error::Size(format!(
                "{} vertices (limit {MAX_VERTICES})",
                labels.len()
            )));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::InvalidGraph("empty vertex label".into()));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{l}`")));
            }
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let a = normalize_label(a.as_ref());
            let b = normalize_label(b.as_ref());
            let u = *index.get(&a).ok_or_else(|| Error::Label(a.clone()))?;
            let v = *index.get(&b).ok_or_else(|| Error::Label(b.clone()))?;
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at `{a}`")));
            }
            edges.push((u.min(v), u.max(v)));
        }
        Self::from_index_edges(labels, index, edges)
    }

    pub(crate) fn from_indices(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{l}`")));
            }
        }
        Self::from_index_edges(labels, index, edges)
    }

    fn from_index_edges(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        if n > MAX_VERTICES {
            return Err(Error::Size(format!("{n} vertices (limit {MAX_VERTICES})")));
        }
        for e in edges.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                labels[w[0].0], labels[w[0].1]
            )));
        }
        if edges.len() > MAX_EDGES {
            return Err(Error::Size(format!(
                "{} edges (limit {MAX_EDGES})",
                edges.len()
            )));
        }
        let mut adjacency = vec![0u64; n];
        let mut edge_lookup = vec![NO_EDGE; n * n];
        for (k, &(u, v)) in edges.iter().enumerate() {
            adjacency[u] |= 1 << v;
            adjacency[v] |= 1 << u;
            edge_lookup[u * n + v] = k as u16;
            edge_lookup[v * n + u] = k as u16;
        }
        let mut h = DefaultHasher::new();
        labels.hash(&mut h);
        edges.hash(&mut h);
        Ok(Graph {
            labels,
            index,
            edges,
            adjacency,
            edge_lookup,
            id: h.finish(),
        })
    }

    /// Structural fingerprint; cycles and signings carry it to detect mixing graphs.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        let l = normalize_label(label);
        self.index.get(&l).copied().ok_or(Error::Label(l))
    }

    pub fn vertices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.vertex(l.as_ref())).collect()
    }

    /// Bit mask of the given vertex labels.
    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<u64> {
        Ok(self
            .vertices_of(labels)?
            .into_iter()
            .fold(0u64, |m, v| m | 1 << v))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> (usize, usize) {
        self.edges[k]
    }

    pub fn edge_labels(&self, k: usize) -> (&str, &str) {
        let (u, v) = self.edges[k];
        (&self.labels[u], &self.labels[v])
    }

    #[inline]
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let n = self.labels.len();
        match self.edge_lookup[u * n + v] {
            NO_EDGE => None,
            k => Some(k as usize),
        }
    }

    pub fn edge_by_labels(&self, a: &str, b: &str) -> Result<usize> {
        let (u, v) = (self.vertex(a)?, self.vertex(b)?);
        self.edge_between(u, v).ok_or_else(|| {
            Error::InvalidGraph(format!(
                "no edge ({}, {})",
                normalize_label(a),
                normalize_label(b)
            ))
        })
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u] >> v & 1 == 1
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones() as usize
    }

    pub fn all_vertices_mask(&self) -> u64 {
        if self.labels.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.labels.len()) - 1
        }
    }

    /// Edges with both endpoints in `mask`.
    pub fn edges_within(&self, mask: u64) -> EdgeSet {
        EdgeSet::from_indices(
            self.edges
                .iter()
                .enumerate()
                .filter(|(_, &(u, v))| mask >> u & 1 == 1 && mask >> v & 1 == 1)
                .map(|(k, _)| k),
        )
    }

    /// Edges incident to `v`.
    pub fn edges_at(&self, v: usize) -> EdgeSet {
        EdgeSet::from_indices(
            self.edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == v || b == v)
                .map(|(k, _)| k),
        )
    }

    /// True when every pair of vertices in `mask` is adjacent.
    pub fn is_clique(&self, mask: u64) -> bool {
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if (self.adjacency[v] | 1 << v) & mask != mask {
                return false;
            }
        }
        true
    }

    /// Connected components as vertex masks, ordered by least vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..self.vertex_count() {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adjacency[v] & !comp;
                comp |= new;
                frontier |= new;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn mask_labels(&self, mask: u64) -> Vec<String> {
        (0..self.vertex_count())
            .filter(|v| mask >> v & 1 == 1)
            .map(|v| self.labels[v].clone())
            .collect()
    }

    /// Subgraph on `labels` with every edge of `self` among them. The vertex
    /// order of the result follows `self`, not the order of `labels`.
    pub fn induced_subgraph<S: AsRef<str>>(&self, labels: &[S]) -> Result<InducedSubgraph> {
        let mask = self.mask_of(labels)?;
        Ok(self.induced_by_mask(mask))
    }

    pub fn induced_by_mask(&self, mask: u64) -> InducedSubgraph {
        let vertex_map: Vec<usize> = (0..self.vertex_count())
            .filter(|v| mask >> v & 1 == 1)
            .collect();
        let mut position = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertex_map.iter().enumerate() {
            position[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
                edges.push((position[u], position[v]));
                edge_map.push(k);
            }
        }
        let labels = vertex_map.iter().map(|&v| self.labels[v].clone()).collect();
        // Positions are monotone in the parent's order, so the parent's edge
        // order is preserved and `edge_map` lines up with the new indices.
        let graph = Graph::from_indices(labels, edges).expect("induced subgraph of a valid graph");
        InducedSubgraph {
            graph,
            vertex_map,
            edge_map,
        }
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.labels.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| [self.labels[u].clone(), self.labels[v].clone()])
                .collect(),
        }
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Self> {
        let pairs: Vec<(String, String)> = doc
            .edges
            .iter()
            .map(|[a, b]| (a.clone(), b.clone()))
            .collect();
        Graph::new(&doc.vertices, &pairs)
    }
}

/// JSON form: `{"vertices": ["1", ...], "edges": [["1", "2"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    #[serde(deserialize_with = "de_labels")]
    pub vertices: Vec<String>,
    #[serde(deserialize_with = "de_pairs")]
    pub edges: Vec<[String; 2]>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Text(String),
    Number(u64),
}

impl From<RawLabel> for String {
    fn from(r: RawLabel) -> String {
        match r {
            RawLabel::Text(s) => normalize_label(&s),
            RawLabel::Number(n) => n.to_string(),
        }
    }
}

fn de_labels<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<String>, D::Error> {
    let raw: Vec<RawLabel> = Vec::deserialize(d)?;
    Ok(raw.into_iter().map(String::from).collect())
}

pub(crate) fn de_pairs<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<[String; 2]>, D::Error> {
    let raw: Vec<[RawLabel; 2]> = Vec::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|[a, b]| [String::from(a), String::from(b)])
        .collect())
}

/// An induced subgraph together with index maps back into its parent.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// New vertex index -> parent vertex index.
    pub vertex_map: Vec<usize>,
    /// New edge index -> parent edge index.
    pub edge_map: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_construction, complete_graph};

    #[test]
    fn rejects_loops_duplicates_and_unknown_labels() {
        assert!(matches!(
            Graph::new(&["1", "2"], &[("1", "1")]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(&["1", "2"], &[("1", "2"), ("2", "1")]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(&["1", "2"], &[("1", "3")]),
            Err(Error::Label(_))
        ));
        assert!(matches!(
            Graph::new(&["1", "01"], &[]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn edge_indices_are_lexicographic_and_stable() {
        let g = Graph::new(&["1", "2", "3"], &[("3", "2"), ("1", "3"), ("2", "1")]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        let again = Graph::from_doc(&g.to_doc()).unwrap();
        assert_eq!(again.edges(), g.edges());
        assert_eq!(again.id(), g.id());
    }

    #[test]
    fn numeric_shorthand_is_normalized() {
        let g = complete_graph::<&str>(10, None).unwrap();
        assert_eq!(g.vertex("07").unwrap(), 6);
        assert_eq!(g.vertex(" 10 ").unwrap(), 9);
        let doc: GraphDoc =
            serde_json::from_str(r#"{"vertices":[1,2,"3"],"edges":[[1,"02"]]}"#).unwrap();
        let h = Graph::from_doc(&doc).unwrap();
        assert_eq!(h.labels(), &["1", "2", "3"]);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn induced_subgraph_examples() {
        let k10 = complete_graph::<&str>(10, None).unwrap();
        let sub = k10.induced_subgraph(&["7", "8", "9", "10"]).unwrap();
        assert_eq!(
            sub.graph,
            complete_graph(4, Some(&["7", "8", "9", "10"])).unwrap()
        );
        assert_eq!(sub.edge_map.len(), 6);
        for (new, &old) in sub.edge_map.iter().enumerate() {
            let (a, b) = sub.graph.edge_labels(new);
            assert_eq!(k10.edge_labels(old), (a, b));
        }

        let k6 = complete_graph::<&str>(6, None).unwrap();
        let tri = k6.induced_subgraph(&["1", "2", "3"]).unwrap();
        assert_eq!(tri.graph.edge_count(), 3);

        let g = build_construction("k7-e-k7").unwrap();
        let side = g
            .induced_subgraph(&["6", "7", "A", "B", "C", "D", "E"])
            .unwrap();
        assert_eq!(side.graph.edge_count(), 21);
        assert!(side.graph.is_clique(side.graph.all_vertices_mask()));

        assert!(matches!(
            k6.induced_subgraph(&["1", "Z"]),
            Err(Error::Label(_))
        ));
    }

    #[test]
    fn induced_subgraph_of_everything_is_identity_and_composes() {
        let g = build_construction("k6-c6-k6").unwrap();
        let all = g.induced_subgraph(g.labels()).unwrap();
        assert_eq!(all.graph, g);

        let big = ["1", "4", "5", "A", "B", "C", "F"];
        let small = ["4", "A", "C", "F"];
        let nested = g
            .induced_subgraph(&big)
            .unwrap()
            .graph
            .induced_subgraph(&small)
            .unwrap();
        let direct = g.induced_subgraph(&small).unwrap();
        assert_eq!(nested.graph, direct.graph);
    }

    #[test]
    fn components_of_union() {
        let g = build_construction("union:k10,k10").unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].count_ones(), 10);
    }
}
