use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::rules::{candidate_pairs, check_row, induced_k6s, ll_compose, WitnessEntry};
use super::types::{Certificate, CycleRef, SecondLink};
use crate::error::Result;
use crate::graphs::{build_construction, enumerate_cycles, is_isomorphic, Cycle, EdgeSet, Graph};
use crate::homology::{enumerate_classes, EdgeSigning, SpanningForest};

/// Axiom used when a component with only 0-homologous cycles is a graph known
/// to be intrinsically triple-linked in R^3.
pub const SPATIAL_AXIOM: &str = "spatial-triple-link";

/// Result of running the rule set on one signing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Certificate {
        certificate: Certificate,
    },
    /// A component has only 0-homologous cycles, so the embedding restricted
    /// to it is crossing-change equivalent to a spatial one.
    AxiomDependent {
        component: Vec<String>,
        axiom: String,
    },
    /// No rule applies at the homology level.
    Silent,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Certificate { .. } => "certificate",
            Verdict::AxiomDependent { .. } => "axiom_dependent",
            Verdict::Silent => "silent",
        }
    }
}

struct K6Source {
    vertices: Vec<String>,
    mask: u64,
    /// Each K4 with the edge sets of its four triangles.
    k4s: Vec<(Vec<String>, [EdgeSet; 4])>,
    pairs: Vec<(Cycle, Cycle)>,
}

struct SpatialComponent {
    labels: Vec<String>,
    fundamental: Vec<EdgeSet>,
}

/// Precomputed cycle pool and subgraph data for repeated searches on one graph.
pub struct CertificateSearch {
    graph: Arc<Graph>,
    cycles: Vec<Cycle>,
    k6s: Vec<K6Source>,
    spatial: Vec<SpatialComponent>,
}

/// Complete graphs on at least 10 vertices and the two two-component constructions.
pub fn known_spatial_triple_linked(component: &Graph) -> bool {
    let n = component.vertex_count();
    if n >= 10 && component.edge_count() == n * (n - 1) / 2 {
        return true;
    }
    ["k6-c6-k6", "k7-e-k7"].iter().any(|d| {
        is_isomorphic(
            component,
            &build_construction(d).expect("builtin construction"),
        )
    })
}

impl CertificateSearch {
    pub fn new(graph: Arc<Graph>, max_cycle_len: usize) -> Result<Self> {
        let g = &graph;
        let cycles = enumerate_cycles(g, max_cycle_len);
        let mut k6s = Vec::new();
        for mask in induced_k6s(g) {
            let vertices = g.mask_labels(mask);
            let vs: Vec<usize> = (0..64).filter(|v| mask >> v & 1 == 1).collect();
            let k4s = vs
                .iter()
                .copied()
                .combinations(4)
                .map(|k4| {
                    let tri = |a: usize, b: usize, c: usize| {
                        EdgeSet::from_indices([
                            g.edge_between(a, b).unwrap(),
                            g.edge_between(a, c).unwrap(),
                            g.edge_between(b, c).unwrap(),
                        ])
                    };
                    let [a, b, c, d] = [k4[0], k4[1], k4[2], k4[3]];
                    let labels = k4.iter().map(|&v| g.label(v).to_string()).collect();
                    (
                        labels,
                        [tri(a, b, c), tri(a, b, d), tri(a, c, d), tri(b, c, d)],
                    )
                })
                .collect();
            let source = Certificate::ZeroHomK4InK6 {
                k6: vertices.clone(),
                k4: vec![],
            };
            let pairs = candidate_pairs(g, &source)?;
            k6s.push(K6Source {
                vertices,
                mask,
                k4s,
                pairs,
            });
        }
        let mut spatial = Vec::new();
        for comp in g.components() {
            let sub = g.induced_by_mask(comp);
            if !known_spatial_triple_linked(&sub.graph) {
                continue;
            }
            let forest = SpanningForest::of(&sub.graph);
            let fundamental = forest
                .fundamental_cycles
                .iter()
                .map(|c| EdgeSet::from_indices(c.iter().map(|k| sub.edge_map[k])))
                .collect();
            spatial.push(SpatialComponent {
                labels: g.mask_labels(comp),
                fundamental,
            });
        }
        Ok(CertificateSearch {
            graph,
            cycles,
            k6s,
            spatial,
        })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// First triple-link certificate in rule order: disjoint triples, then
    /// compositions seeded by disjoint 1-hom pairs, then compositions seeded
    /// by K6 subgraphs with an all-0 K4.
    pub fn find(&self, s: &EdgeSigning) -> Option<Certificate> {
        let g = &*self.graph;
        let ones: Vec<&Cycle> = self
            .cycles
            .iter()
            .filter(|c| s.class_unchecked(c).is_one())
            .collect();

        // Visiting (a, b) in order, any c disjoint from both must come after b.
        for (i, a) in ones.iter().enumerate() {
            for (j, b) in ones.iter().enumerate().skip(i + 1) {
                if !a.is_disjoint(b) {
                    continue;
                }
                let ab = a.vertex_mask() | b.vertex_mask();
                if let Some(c) = ones[j + 1..].iter().find(|c| c.vertex_mask() & ab == 0) {
                    return Some(Certificate::DisjointOneTriple {
                        cycles: [CycleRef::of(g, a), CycleRef::of(g, b), CycleRef::of(g, c)],
                    });
                }
            }
        }

        for (i, a) in ones.iter().enumerate() {
            for b in &ones[i + 1..] {
                if !a.is_disjoint(b) {
                    continue;
                }
                let source = Certificate::DisjointOnePair {
                    cycles: [CycleRef::of(g, a), CycleRef::of(g, b)],
                };
                let pairs = [((*a).clone(), (*b).clone())];
                let ab = a.vertex_mask() | b.vertex_mask();
                for e in ones.iter().filter(|e| e.vertex_mask() & ab == 0) {
                    if let Some(cert) = self.compose(s, &ones, &source, &pairs, e) {
                        return Some(cert);
                    }
                }
            }
        }

        for k6 in &self.k6s {
            let Some((k4, _)) = k6
                .k4s
                .iter()
                .find(|(_, tris)| tris.iter().all(|t| !s.negative_edges().odd_overlap(t)))
            else {
                continue;
            };
            let source = Certificate::ZeroHomK4InK6 {
                k6: k6.vertices.clone(),
                k4: k4.clone(),
            };
            for e in ones.iter().filter(|e| e.vertex_mask() & k6.mask == 0) {
                if let Some(cert) = self.compose(s, &ones, &source, &k6.pairs, e) {
                    return Some(cert);
                }
            }
        }
        None
    }

    fn compose(
        &self,
        s: &EdgeSigning,
        ones: &[&Cycle],
        source: &Certificate,
        pairs: &[(Cycle, Cycle)],
        e: &Cycle,
    ) -> Option<Certificate> {
        let mut entries = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let w = ones.iter().find(|w| {
                w.vertex_mask() & e.vertex_mask() == 0
                    && (check_row(s, a, b, w, e, &SecondLink::OneHomologous).is_ok()
                        || check_row(s, b, a, w, e, &SecondLink::OneHomologous).is_ok())
            })?;
            entries.push(WitnessEntry {
                pair: (a.clone(), b.clone()),
                witness: (*w).clone(),
            });
        }
        ll_compose(s, source, e, &entries)
            .expect("cycles belong to the graph")
            .ok()
    }

    /// The first component (if any) all of whose cycles are 0-homologous and
    /// whose spatial triple-linking is taken as an axiom.
    pub fn spatial_component(&self, s: &EdgeSigning) -> Option<Vec<String>> {
        self.spatial
            .iter()
            .find(|c| {
                c.fundamental
                    .iter()
                    .all(|f| !s.negative_edges().odd_overlap(f))
            })
            .map(|c| c.labels.clone())
    }

    pub fn classify(&self, s: &EdgeSigning) -> Verdict {
        if let Some(certificate) = self.find(s) {
            return Verdict::Certificate { certificate };
        }
        match self.spatial_component(s) {
            Some(component) => Verdict::AxiomDependent {
                component,
                axiom: SPATIAL_AXIOM.to_string(),
            },
            None => Verdict::Silent,
        }
    }
}

/// Runs the rule set in order on `(g, s)`; `None` means the rules are silent,
/// never that the class is triple-linkless.
pub fn find_triple_link_certificate(
    s: &EdgeSigning,
    max_cycle_len: usize,
) -> Result<Option<Certificate>> {
    Ok(CertificateSearch::new(s.graph_arc().clone(), max_cycle_len)?.find(s))
}

pub fn classify(s: &EdgeSigning, max_cycle_len: usize) -> Result<Verdict> {
    Ok(CertificateSearch::new(s.graph_arc().clone(), max_cycle_len)?.classify(s))
}

/// A switching class on which the rule set is silent and no spatial axiom applies.
#[derive(Clone, Debug)]
pub struct CertificateFree {
    /// Index in the order of [`enumerate_classes`].
    pub class_index: u64,
    pub signing: EdgeSigning,
}

/// Scans switching classes in order and returns the first silent one.
/// Classes where only the spatial axiom applies are skipped.
pub fn search_certificate_free(
    g: Arc<Graph>,
    max_cycle_len: usize,
) -> Result<Option<CertificateFree>> {
    let classes = enumerate_classes(g.clone())?;
    let search = CertificateSearch::new(g, max_cycle_len)?;
    let hit = (0..classes.class_count()).into_par_iter().find_first(|&i| {
        let s = classes.representative(i);
        matches!(search.classify(&s), Verdict::Silent)
    });
    Ok(hit.map(|i| CertificateFree {
        class_index: i,
        signing: classes.representative(i),
    }))
}
