use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{
    automorphisms, build_construction, complete_graph, Cycle, EdgeSet, Graph, GraphDoc,
};

/// Homology class in `H_1(RP^3) = Z/2`: 0 for null-homologous, 1 for the generator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z2(bool);

impl Z2 {
    pub const ZERO: Z2 = Z2(false);
    pub const ONE: Z2 = Z2(true);

    pub fn from_parity(odd: bool) -> Self {
        Z2(odd)
    }

    pub fn is_one(self) -> bool {
        self.0
    }

    pub fn as_u8(self) -> u8 {
        self.0 as u8
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Z2 {
    type Output = Z2;
    fn add(self, rhs: Z2) -> Z2 {
        Z2(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for Z2 {
    fn add_assign(&mut self, rhs: Z2) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

impl Serialize for Z2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.as_u8())
    }
}

impl<'de> Deserialize<'de> for Z2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(Z2::ZERO),
            1 => Ok(Z2::ONE),
            other => Err(serde::de::Error::custom(format!(
                "expected 0 or 1, got {other}"
            ))),
        }
    }
}

/// Least-index spanning forest (Kruskal in edge-index order) and the
/// fundamental cycles of the remaining edges, ordered by that edge's index.
#[derive(Clone, Debug)]
pub struct SpanningForest {
    pub tree_edges: EdgeSet,
    pub non_tree_edges: Vec<usize>,
    pub fundamental_cycles: Vec<EdgeSet>,
    pub components: usize,
}

impl SpanningForest {
    pub fn of(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut tree_edges = EdgeSet::empty();
        let mut non_tree_edges = Vec::new();
        let mut tree_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (k, &(u, v)) in g.edges().iter().enumerate() {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                non_tree_edges.push(k);
            } else {
                parent[a] = b;
                tree_edges.insert(k);
                tree_adj[u].push((v, k));
                tree_adj[v].push((u, k));
            }
        }
        let components = (0..n).filter(|&v| find(&mut parent, v) == v).count();
        let fundamental_cycles = non_tree_edges
            .iter()
            .map(|&k| {
                let (u, v) = g.edge(k);
                let mut cyc = tree_path(&tree_adj, u, v);
                cyc.insert(k);
                cyc
            })
            .collect();
        SpanningForest {
            tree_edges,
            non_tree_edges,
            fundamental_cycles,
            components,
        }
    }

    /// Dimension of the cycle space, `m - n + c`.
    pub fn cycle_rank(&self) -> usize {
        self.non_tree_edges.len()
    }
}

fn tree_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> EdgeSet {
    let n = adj.len();
    let mut via = vec![None; n];
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(x) = stack.pop() {
        if x == to {
            break;
        }
        for &(y, k) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                via[y] = Some((x, k));
                stack.push(y);
            }
        }
    }
    let mut path = EdgeSet::empty();
    let mut cur = to;
    while let Some((prev, k)) = via[cur] {
        path.insert(k);
        cur = prev;
    }
    path
}

/// Z/2 value per edge; bit set means a `-` edge.
#[derive(Clone, Debug)]
pub struct EdgeSigning {
    graph: Arc<Graph>,
    negative: EdgeSet,
}

impl PartialEq for EdgeSigning {
    fn eq(&self, other: &Self) -> bool {
        self.graph.id() == other.graph.id() && self.negative == other.negative
    }
}

impl Eq for EdgeSigning {}

/// What a canonical form is taken modulo.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modulo {
    Switching,
    SwitchingAndAutomorphism,
}

impl EdgeSigning {
    pub fn all_plus(graph: Arc<Graph>) -> Self {
        EdgeSigning {
            graph,
            negative: EdgeSet::empty(),
        }
    }

    pub fn from_negative(graph: Arc<Graph>, negative: EdgeSet) -> Result<Self> {
        if let Some(k) = negative.iter().find(|&k| k >= graph.edge_count()) {
            return Err(Error::Structure(format!("edge index {k} out of range")));
        }
        Ok(EdgeSigning { graph, negative })
    }

    pub fn from_negative_labels<S: AsRef<str>>(
        graph: Arc<Graph>,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut negative = EdgeSet::empty();
        for (a, b) in pairs {
            negative.insert(graph.edge_by_labels(a.as_ref(), b.as_ref())?);
        }
        Ok(EdgeSigning { graph, negative })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn negative_edges(&self) -> &EdgeSet {
        &self.negative
    }

    pub fn sign(&self, edge: usize) -> Z2 {
        Z2(self.negative.contains(edge))
    }

    pub fn set_sign(&mut self, edge: usize, value: Z2) {
        if value.is_one() {
            self.negative.insert(edge)
        } else {
            self.negative.remove(edge)
        }
    }

    /// Parity of `-` edges on `c`.
    pub fn cycle_class(&self, c: &Cycle) -> Result<Z2> {
        if c.graph_id() != self.graph.id() {
            return Err(Error::GraphMismatch);
        }
        Ok(self.class_unchecked(c))
    }

    #[inline]
    pub fn class_unchecked(&self, c: &Cycle) -> Z2 {
        Z2(self.negative.odd_overlap(c.edge_set()))
    }

    /// Class of an element of the cycle space (every vertex of even degree).
    pub fn even_subgraph_class(&self, edges: &EdgeSet) -> Result<Z2> {
        let g = &self.graph;
        let mut deg = vec![0usize; g.vertex_count()];
        for k in edges.iter() {
            if k >= g.edge_count() {
                return Err(Error::Structure(format!("edge index {k} out of range")));
            }
            let (u, v) = g.edge(k);
            deg[u] += 1;
            deg[v] += 1;
        }
        if let Some(v) = deg.iter().position(|d| d % 2 == 1) {
            return Err(Error::NotCycleSpaceElement(g.label(v).to_string()));
        }
        Ok(Z2(self.negative.odd_overlap(edges)))
    }

    /// Flips every edge at `v`.
    pub fn switch(&self, v: &str) -> Result<EdgeSigning> {
        let v = self.graph.vertex(v)?;
        Ok(self.switch_index(v))
    }

    pub fn switch_index(&self, v: usize) -> EdgeSigning {
        EdgeSigning {
            graph: self.graph.clone(),
            negative: self.negative.xor(&self.graph.edges_at(v)),
        }
    }

    /// Classes of the fundamental cycles of the least-index spanning forest.
    pub fn fundamental_classes(&self, forest: &SpanningForest) -> Vec<Z2> {
        forest
            .fundamental_cycles
            .iter()
            .map(|c| Z2(self.negative.odd_overlap(c)))
            .collect()
    }

    /// True iff both signings give every cycle the same class.
    pub fn same_class(&self, other: &EdgeSigning) -> Result<bool> {
        if self.graph.id() != other.graph.id() {
            return Err(Error::GraphMismatch);
        }
        let forest = SpanningForest::of(&self.graph);
        Ok(self.fundamental_classes(&forest) == other.fundamental_classes(&forest))
    }

    /// Lexicographically least sign vector (edge 0 first, `+` before `-`)
    /// in the switching class, optionally also minimised over automorphisms.
    pub fn canonical(&self, modulo: Modulo) -> Result<EdgeSigning> {
        match modulo {
            Modulo::Switching => Ok(self.switching_canonical()),
            Modulo::SwitchingAndAutomorphism => {
                let group = automorphisms(&self.graph)?;
                Ok(canonical_over(self, &group))
            }
        }
    }

    /// Greedy over edges in index order: an edge whose endpoints are not yet
    /// linked by earlier choices can always be made `+`, otherwise its sign is
    /// forced. The result is `+` on the least-index spanning forest.
    fn switching_canonical(&self) -> EdgeSigning {
        let g = &self.graph;
        let n = g.vertex_count();
        // parity union-find: parity[x] = switch(x) xor switch(root)
        let mut parent: Vec<usize> = (0..n).collect();
        let mut parity = vec![false; n];
        fn find(parent: &mut [usize], parity: &mut [bool], x: usize) -> (usize, bool) {
            let mut path = Vec::new();
            let mut r = x;
            while parent[r] != r {
                path.push(r);
                r = parent[r];
            }
            // compress, accumulating parity from the top down
            for &y in path.iter().rev() {
                let p = parent[y];
                if p != r {
                    parity[y] ^= parity[p];
                }
                parent[y] = r;
            }
            (r, if x == r { false } else { parity[x] })
        }
        let mut out = EdgeSet::empty();
        for (k, &(u, v)) in g.edges().iter().enumerate() {
            let s = self.negative.contains(k);
            let (ru, pu) = find(&mut parent, &mut parity, u);
            let (rv, pv) = find(&mut parent, &mut parity, v);
            if ru == rv {
                // new sign = s ^ x_u ^ x_v, and x_u ^ x_v = pu ^ pv
                if s ^ pu ^ pv {
                    out.insert(k);
                }
            } else {
                // choose x_u ^ x_v = s so the edge becomes +
                parent[ru] = rv;
                parity[ru] = pu ^ pv ^ s;
            }
        }
        EdgeSigning {
            graph: self.graph.clone(),
            negative: out,
        }
    }

    /// Image of the signing under a vertex permutation that is an automorphism.
    pub fn permuted(&self, perm: &crate::graphs::Permutation) -> EdgeSigning {
        let mut negative = EdgeSet::empty();
        for k in self.negative.iter() {
            negative.insert(perm.apply_edge(&self.graph, k));
        }
        EdgeSigning {
            graph: self.graph.clone(),
            negative,
        }
    }

    /// Number of 1-homologous triangles in the K4 on the given vertices.
    pub fn k4_one_hom_count<S: AsRef<str>>(&self, k4: &[S]) -> Result<usize> {
        let g = &self.graph;
        let vs = g.vertices_of(k4)?;
        let mask = vs.iter().fold(0u64, |m, &v| m | 1 << v);
        if vs.len() != 4 || mask.count_ones() != 4 || !g.is_clique(mask) {
            return Err(Error::Structure("vertices do not induce a K4".into()));
        }
        let mut count = 0;
        for skip in 0..4 {
            let tri: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| vs[i]).collect();
            let c = Cycle::new(g, &tri)?;
            if self.class_unchecked(&c).is_one() {
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn to_doc(&self) -> SigningDoc {
        SigningDoc {
            graph: GraphSource::Inline(self.graph.to_doc()),
            negative_edges: self
                .negative
                .iter()
                .map(|k| {
                    let (a, b) = self.graph.edge_labels(k);
                    [a.to_string(), b.to_string()]
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &SigningDoc) -> Result<Self> {
        let g = Arc::new(doc.graph.resolve()?);
        Self::from_doc_on(g, doc)
    }

    /// Uses `graph` instead of the document's own graph entry.
    pub fn from_doc_on(graph: Arc<Graph>, doc: &SigningDoc) -> Result<Self> {
        let pairs: Vec<(String, String)> = doc
            .negative_edges
            .iter()
            .map(|[a, b]| (a.clone(), b.clone()))
            .collect();
        Self::from_negative_labels(graph, &pairs)
    }
}

/// Least switching-canonical form over the images under `group`.
pub fn canonical_over(s: &EdgeSigning, group: &[crate::graphs::Permutation]) -> EdgeSigning {
    group
        .iter()
        .map(|p| s.permuted(p).switching_canonical())
        .min_by(sign_vector_cmp)
        .unwrap_or_else(|| s.switching_canonical())
}

/// Lexicographic order on sign vectors, edge 0 first.
pub fn sign_vector_cmp(a: &EdgeSigning, b: &EdgeSigning) -> std::cmp::Ordering {
    let diff = a.negative.xor(&b.negative);
    match diff.first() {
        None => std::cmp::Ordering::Equal,
        Some(k) if b.negative.contains(k) => std::cmp::Ordering::Less,
        Some(_) => std::cmp::Ordering::Greater,
    }
}

/// Signing JSON: `{"graph": <graph object or descriptor>, "negative_edges": [["1","2"], ...]}`.
/// Unlisted edges are `+`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigningDoc {
    pub graph: GraphSource,
    #[serde(deserialize_with = "crate::graphs::de_pairs")]
    pub negative_edges: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Descriptor(String),
    Inline(GraphDoc),
}

impl GraphSource {
    pub fn resolve(&self) -> Result<Graph> {
        match self {
            GraphSource::Descriptor(d) => build_construction(d),
            GraphSource::Inline(doc) => Graph::from_doc(doc),
        }
    }
}

/// Iterator over one representative per switching class: the spanning forest
/// is `+` and bit `i` of the class index is the sign of the `i`-th non-tree edge.
pub struct ClassIter {
    graph: Arc<Graph>,
    non_tree: Vec<usize>,
    next: u64,
    end: u64,
}

impl ClassIter {
    pub fn class_count(&self) -> u64 {
        self.end
    }

    /// Representative with the given class index.
    pub fn representative(&self, index: u64) -> EdgeSigning {
        let mut negative = EdgeSet::empty();
        for (bit, &k) in self.non_tree.iter().enumerate() {
            if index >> bit & 1 == 1 {
                negative.insert(k);
            }
        }
        EdgeSigning {
            graph: self.graph.clone(),
            negative,
        }
    }
}

impl Iterator for ClassIter {
    type Item = EdgeSigning;

    fn next(&mut self) -> Option<EdgeSigning> {
        if self.next >= self.end {
            return None;
        }
        let s = self.representative(self.next);
        self.next += 1;
        Some(s)
    }
}

/// Largest cycle-space dimension [`enumerate_classes`] accepts.
pub const MAX_CLASS_DIMENSION: usize = 30;

pub fn enumerate_classes(graph: Arc<Graph>) -> Result<ClassIter> {
    let forest = SpanningForest::of(&graph);
    let d = forest.cycle_rank();
    if d > MAX_CLASS_DIMENSION {
        return Err(Error::Budget(format!(
            "2^{d} switching classes (limit 2^{MAX_CLASS_DIMENSION})"
        )));
    }
    Ok(ClassIter {
        graph,
        non_tree: forest.non_tree_edges,
        next: 0,
        end: 1u64 << d,
    })
}

/// K6 on `1..6` with `-` edges exactly (1,2), (1,3), (2,3), (1,4), (2,5), (3,6):
/// the signing of the linkless K6 embedding.
pub fn figure2_signing() -> EdgeSigning {
    let g = Arc::new(complete_graph::<&str>(6, None).expect("K6"));
    EdgeSigning::from_negative_labels(g, &FIGURE2_NEGATIVE).expect("edges of K6")
}

pub const FIGURE2_NEGATIVE: [(&str, &str); 6] = [
    ("1", "2"),
    ("1", "3"),
    ("2", "3"),
    ("1", "4"),
    ("2", "5"),
    ("3", "6"),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::enumerate_triangles;

    fn k(n: usize) -> Arc<Graph> {
        Arc::new(complete_graph::<&str>(n, None).unwrap())
    }

    fn cyc(g: &Graph, l: &[&str]) -> Cycle {
        Cycle::from_labels(g, l).unwrap()
    }

    #[test]
    fn figure2_classes() {
        let s = figure2_signing();
        let g = s.graph();
        assert_eq!(s.negative_edges().len(), 6);
        assert_eq!(s.cycle_class(&cyc(g, &["1", "2", "3"])).unwrap(), Z2::ONE);
        assert_eq!(s.cycle_class(&cyc(g, &["4", "5", "6"])).unwrap(), Z2::ZERO);
        assert_eq!(s.cycle_class(&cyc(g, &["1", "4", "6"])).unwrap(), Z2::ONE);
        let ones = enumerate_triangles(g)
            .iter()
            .filter(|t| s.class_unchecked(t).is_one())
            .count();
        assert_eq!(ones, 10);
        for (a, b) in crate::graphs::disjoint_cycle_pairs(&enumerate_triangles(g)) {
            assert!(s.class_unchecked(&a) != s.class_unchecked(&b));
        }
        assert_eq!(s.k4_one_hom_count(&["1", "2", "3", "4"]).unwrap(), 2);
    }

    #[test]
    fn foreign_cycle_is_rejected() {
        let s = figure2_signing();
        let other = k(7);
        let c = cyc(&other, &["1", "2", "3"]);
        assert!(matches!(s.cycle_class(&c), Err(Error::GraphMismatch)));
    }

    #[test]
    fn even_subgraph_examples() {
        let s = figure2_signing();
        let g = s.graph();
        assert_eq!(s.even_subgraph_class(&EdgeSet::empty()).unwrap(), Z2::ZERO);
        let a = cyc(g, &["1", "2", "3"]);
        let b = cyc(g, &["1", "2", "4"]);
        let sym = a.edge_set().xor(b.edge_set());
        assert_eq!(sym.len(), 4);
        // classes 1 and 0
        assert_eq!(s.even_subgraph_class(&sym).unwrap(), Z2::ONE);
        // (1,2,3) has class 1, (4,5,6) class 0
        let union = a.edge_set().or(cyc(g, &["4", "5", "6"]).edge_set());
        assert_eq!(s.even_subgraph_class(&union).unwrap(), Z2::ONE);
        let path = EdgeSet::from_indices([g.edge_by_labels("1", "2").unwrap()]);
        assert!(matches!(
            s.even_subgraph_class(&path),
            Err(Error::NotCycleSpaceElement(_))
        ));
    }

    #[test]
    fn switching_examples() {
        let g = k(4);
        let plus = EdgeSigning::all_plus(g.clone());
        let s = plus.switch("1").unwrap();
        assert_eq!(s.negative_edges().len(), 3);
        for t in enumerate_triangles(&g) {
            assert_eq!(s.cycle_class(&t).unwrap(), Z2::ZERO);
        }
        assert_eq!(s.switch("1").unwrap(), plus);
        assert!(plus.switch("9").is_err());

        let f = figure2_signing();
        let mut all = f.clone();
        for v in 0..6 {
            all = all.switch_index(v);
        }
        assert_eq!(all, f);
    }

    #[test]
    fn same_class_examples() {
        let f = figure2_signing();
        assert!(f.same_class(&f.switch("3").unwrap()).unwrap());
        let g = k(4);
        let plus = EdgeSigning::all_plus(g.clone());
        let one = EdgeSigning::from_negative_labels(g.clone(), &[("1", "2")]).unwrap();
        assert!(!plus.same_class(&one).unwrap());
        assert!(matches!(plus.same_class(&f), Err(Error::GraphMismatch)));
    }

    #[test]
    fn canonical_examples() {
        let g = k(6);
        let plus = EdgeSigning::all_plus(g.clone());
        assert_eq!(plus.canonical(Modulo::Switching).unwrap(), plus);
        let f = figure2_signing();
        let c = f.canonical(Modulo::Switching).unwrap();
        for v in 0..6 {
            assert_eq!(f.switch_index(v).canonical(Modulo::Switching).unwrap(), c);
        }
        assert_eq!(c.canonical(Modulo::Switching).unwrap(), c);
        assert!(c.same_class(&f).unwrap());
    }

    /// Oracle for the greedy canonical form: minimum over all 2^n switchings.
    fn brute_canonical(s: &EdgeSigning) -> EdgeSigning {
        let n = s.graph().vertex_count();
        (0u32..1 << n)
            .map(|set| {
                let mut t = s.clone();
                for v in 0..n {
                    if set >> v & 1 == 1 {
                        t = t.switch_index(v);
                    }
                }
                t
            })
            .min_by(sign_vector_cmp)
            .unwrap()
    }

    #[test]
    fn canonical_matches_brute_force() {
        let g = k(5);
        for bits in (0u32..1 << 10).step_by(7) {
            let s = EdgeSigning::from_negative(
                g.clone(),
                EdgeSet::from_indices((0..10).filter(|i| bits >> i & 1 == 1)),
            )
            .unwrap();
            assert_eq!(s.canonical(Modulo::Switching).unwrap(), brute_canonical(&s));
        }
    }

    #[test]
    fn switching_class_counts_by_bucketing() {
        // K6: all 2^15 signings fall into 2^(15-6+1) = 1024 buckets.
        let g = k(6);
        let mut buckets = std::collections::HashSet::new();
        for bits in 0u32..1 << 15 {
            let s = EdgeSigning::from_negative(
                g.clone(),
                EdgeSet::from_indices((0..15).filter(|i| bits >> i & 1 == 1)),
            )
            .unwrap();
            buckets.insert(
                s.canonical(Modulo::Switching)
                    .unwrap()
                    .negative_edges()
                    .iter()
                    .collect::<Vec<_>>(),
            );
        }
        assert_eq!(buckets.len(), 1024);
        assert_eq!(enumerate_classes(g).unwrap().count(), 1024);
    }

    #[test]
    fn k4_classes_by_bucketing() {
        let g = k(4);
        let reps: Vec<EdgeSigning> = enumerate_classes(g.clone()).unwrap().collect();
        assert_eq!(reps.len(), 8);
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(!a.same_class(b).unwrap());
            }
        }
        for bits in 0u32..64 {
            let s = EdgeSigning::from_negative(
                g.clone(),
                EdgeSet::from_indices((0..6).filter(|i| bits >> i & 1 == 1)),
            )
            .unwrap();
            assert_eq!(reps.iter().filter(|r| r.same_class(&s).unwrap()).count(), 1);
        }
    }

    #[test]
    fn tree_has_one_class() {
        let t = Arc::new(
            Graph::new(&["1", "2", "3", "4"], &[("1", "2"), ("1", "3"), ("3", "4")]).unwrap(),
        );
        assert_eq!(enumerate_classes(t).unwrap().count(), 1);
    }

    #[test]
    fn class_budget() {
        let g = Arc::new(build_construction("union:k10,k10").unwrap());
        assert!(matches!(enumerate_classes(g), Err(Error::Budget(_))));
    }

    #[test]
    fn k4_count_examples() {
        let g = k(4);
        assert_eq!(
            EdgeSigning::all_plus(g.clone())
                .k4_one_hom_count(&["1", "2", "3", "4"])
                .unwrap(),
            0
        );
        let one = EdgeSigning::from_negative_labels(g.clone(), &[("1", "2")]).unwrap();
        assert_eq!(one.k4_one_hom_count(&["1", "2", "3", "4"]).unwrap(), 2);
        let path = Arc::new(
            Graph::new(&["1", "2", "3", "4"], &[("1", "2"), ("2", "3"), ("3", "4")]).unwrap(),
        );
        assert!(matches!(
            EdgeSigning::all_plus(path).k4_one_hom_count(&["1", "2", "3", "4"]),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn signing_doc_round_trip() {
        let f = figure2_signing();
        let json = serde_json::to_string(&f.to_doc()).unwrap();
        let back = EdgeSigning::from_doc(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, f);
        let doc: SigningDoc =
            serde_json::from_str(r#"{"graph":"k10","negative_edges":[[1,2]]}"#).unwrap();
        let s = EdgeSigning::from_doc(&doc).unwrap();
        assert_eq!(s.negative_edges().len(), 1);
    }
}
