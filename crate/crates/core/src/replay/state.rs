use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;

use super::script::{Fact, Labels, ObjectKind, Sign, VertexSpec};
use crate::error::{Error, Result};
use crate::graphs::{
    disjoint_cycle_pairs, enumerate_triangles, find_automorphism, Cycle, EdgeSet, Graph,
    Permutation,
};
use crate::homology::{Gf2System, SigningConstraintSet, SpanningForest, Z2};

/// "At least `k` of these rows have value 1."
#[derive(Clone, Debug)]
pub(crate) struct AtLeast {
    pub rows: Vec<EdgeSet>,
    pub k: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Link {
    pub pair: (Cycle, Cycle),
    pub reason: String,
}

/// Knowledge available at a point of a proof branch.
#[derive(Clone, Debug)]
pub(crate) struct State {
    pub kb: SigningConstraintSet,
    pub at_least: Vec<AtLeast>,
    pub links: Vec<Link>,
    /// Vertex sets known to contain a linked disjoint pair.
    pub linked_within: Vec<u64>,
    pub snapshots: BTreeMap<String, Arc<State>>,
    pub closed: bool,
}

pub(crate) fn mask_of(g: &Graph, labels: &[String]) -> Result<u64> {
    let m = g.mask_of(labels)?;
    if m.count_ones() as usize != labels.len() {
        return Err(Error::Script(format!(
            "repeated vertex in [{}]",
            labels.join(", ")
        )));
    }
    Ok(m)
}

pub(crate) fn resolve_vertices(g: &Graph, spec: &VertexSpec) -> Result<u64> {
    match spec {
        VertexSpec::Labels(l) => mask_of(g, l),
        VertexSpec::Component { component } => g
            .components()
            .get(component.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::Script(format!("no component {component}"))),
    }
}

pub(crate) fn cycle(g: &Graph, labels: &[String]) -> Result<Cycle> {
    Cycle::from_labels(g, labels)
}

/// Triangles of `g` inside `mask`, in lexicographic order.
pub(crate) fn triangles_within(g: &Graph, mask: u64) -> Vec<Cycle> {
    enumerate_triangles(g)
        .into_iter()
        .filter(|t| t.vertex_mask() & !mask == 0)
        .collect()
}

/// Fundamental cycles (as edge sets of `g`) of the subgraph induced by `mask`.
pub(crate) fn induced_cycle_basis(g: &Graph, mask: u64) -> Vec<EdgeSet> {
    let sub = g.induced_by_mask(mask);
    SpanningForest::of(&sub.graph)
        .fundamental_cycles
        .iter()
        .map(|c| EdgeSet::from_indices(c.iter().map(|k| sub.edge_map[k])))
        .collect()
}

fn rank(rows: &[EdgeSet]) -> usize {
    let mut sys = Gf2System::new();
    rows.iter()
        .filter(|r| sys.add(r, false).unwrap_or(false))
        .count()
}

fn uniform_rows(g: &Graph, vertex: &str, over: &[String]) -> Result<Vec<EdgeSet>> {
    let first = g.edge_by_labels(vertex, &over[0])?;
    over[1..]
        .iter()
        .map(|o| Ok(EdgeSet::from_indices([first, g.edge_by_labels(vertex, o)?])))
        .collect()
}

pub(crate) fn sign_z2(s: Sign) -> Z2 {
    Z2::from_parity(s == Sign::Minus)
}

fn class_z2(class: u8) -> Result<Z2> {
    match class {
        0 => Ok(Z2::ZERO),
        1 => Ok(Z2::ONE),
        c => Err(Error::Script(format!("class must be 0 or 1, got {c}"))),
    }
}

/// What a fact contributes: linear equations, an at-least fact, or a link.
enum FactRows {
    Equations(Vec<(EdgeSet, bool)>),
    AtLeast(AtLeast),
    Link(Link),
}

fn fact_rows(g: &Graph, fact: &Fact) -> Result<FactRows> {
    Ok(match fact {
        Fact::Edge { edge, sign } => {
            let k = g.edge_by_labels(&edge[0], &edge[1])?;
            FactRows::Equations(vec![(EdgeSet::from_indices([k]), sign_z2(*sign).is_one())])
        }
        Fact::Cycle { cycle: c, class } => {
            FactRows::Equations(vec![(*cycle(g, c)?.edge_set(), class_z2(*class)?.is_one())])
        }
        Fact::Zero { vertices } => {
            let m = resolve_vertices(g, vertices)?;
            FactRows::Equations(
                induced_cycle_basis(g, m)
                    .into_iter()
                    .map(|r| (r, false))
                    .collect(),
            )
        }
        Fact::HasOne { vertices } => {
            let m = resolve_vertices(g, vertices)?;
            let rows: Vec<EdgeSet> = triangles_within(g, m)
                .iter()
                .map(|t| *t.edge_set())
                .collect();
            let basis = induced_cycle_basis(g, m);
            if basis.is_empty() || rank(&rows) != basis.len() {
                return Err(Error::Script(format!(
                    "triangles of [{}] do not span its cycle space",
                    g.mask_labels(m).join(", ")
                )));
            }
            FactRows::AtLeast(AtLeast { rows, k: 1 })
        }
        Fact::Uniform { vertex, over } => {
            if over.len() < 2 {
                return Err(Error::Script("uniform needs at least two targets".into()));
            }
            FactRows::Equations(
                uniform_rows(g, vertex, over)?
                    .into_iter()
                    .map(|r| (r, false))
                    .collect(),
            )
        }
        Fact::AtLeast { cycles, count } => FactRows::AtLeast(AtLeast {
            rows: cycles
                .iter()
                .map(|c| Ok(*cycle(g, c)?.edge_set()))
                .collect::<Result<_>>()?,
            k: *count,
        }),
        Fact::Linked {
            cycles: [a, b],
            reason,
        } => {
            let (a, b) = (cycle(g, a)?, cycle(g, b)?);
            if !a.is_disjoint(&b) {
                return Err(Error::Script("linked cycles must be disjoint".into()));
            }
            FactRows::Link(Link {
                pair: (a, b),
                reason: reason.clone(),
            })
        }
    })
}

/// Rows saying "some edge from `vertex` to `over` differs from the first one".
pub(crate) fn mixed_rows(g: &Graph, vertex: &str, over: &[String]) -> Result<AtLeast> {
    Ok(AtLeast {
        rows: uniform_rows(g, vertex, over)?,
        k: 1,
    })
}

fn same_pair(a: &(Cycle, Cycle), b: &(Cycle, Cycle)) -> bool {
    (a.0 == b.0 && a.1 == b.1) || (a.0 == b.1 && a.1 == b.0)
}

impl State {
    pub fn new(graph: Arc<Graph>) -> Self {
        State {
            kb: SigningConstraintSet::new(graph),
            at_least: Vec::new(),
            links: Vec::new(),
            linked_within: Vec::new(),
            snapshots: BTreeMap::new(),
            closed: false,
        }
    }

    pub fn graph(&self) -> &Graph {
        self.kb.graph()
    }

    pub fn add_fact(&mut self, fact: &Fact) -> Result<()> {
        let g = self.kb.graph_arc().clone();
        match fact_rows(&g, fact)? {
            FactRows::Equations(rows) => {
                for (r, v) in rows {
                    self.kb.fix_edges(&r, Z2::from_parity(v))?;
                }
            }
            FactRows::AtLeast(a) => self.at_least.push(a),
            FactRows::Link(l) => {
                // A named linked pair supersedes "some pair inside M is linked".
                let both = l.pair.0.vertex_mask() | l.pair.1.vertex_mask();
                self.linked_within.retain(|m| both & !m != 0);
                if !self.links.iter().any(|x| same_pair(&x.pair, &l.pair)) {
                    self.links.push(l);
                }
            }
        }
        Ok(())
    }

    /// `Some(true)` if the fact is known to hold, `Some(false)` if known to fail.
    pub fn fact_holds(&self, fact: &Fact) -> Result<Option<bool>> {
        let g = self.kb.graph_arc().clone();
        Ok(match fact_rows(&g, fact)? {
            FactRows::Equations(rows) => {
                let mut out = Some(true);
                for (r, v) in rows {
                    match self.kb.edges_class(&r) {
                        Some(x) if x.is_one() != v => return Ok(Some(false)),
                        Some(_) => {}
                        None => out = None,
                    }
                }
                out
            }
            FactRows::AtLeast(a) => self.at_least_holds(&a),
            FactRows::Link(l) => Some(self.links.iter().any(|x| same_pair(&x.pair, &l.pair))),
        })
    }

    fn at_least_holds(&self, a: &AtLeast) -> Option<bool> {
        let vals: Vec<Option<Z2>> = a.rows.iter().map(|r| self.kb.edges_class(r)).collect();
        let ones = vals.iter().filter(|v| **v == Some(Z2::ONE)).count();
        let unknown = vals.iter().filter(|v| v.is_none()).count();
        if ones >= a.k {
            Some(true)
        } else if ones + unknown < a.k {
            Some(false)
        } else {
            None
        }
    }

    /// False when some at-least fact is already violated.
    pub fn at_least_consistent(&self) -> bool {
        self.at_least
            .iter()
            .all(|a| self.at_least_holds(a) != Some(false))
    }

    pub fn link_reason(&self, a: &Cycle, b: &Cycle) -> Option<&str> {
        let p = (a.clone(), b.clone());
        self.links
            .iter()
            .find(|l| same_pair(&l.pair, &p))
            .map(|l| l.reason.as_str())
    }

    /// At-least fact (k >= 1) over exactly these rows, in any order.
    pub fn has_at_least_over(&self, rows: &[EdgeSet]) -> bool {
        self.at_least.iter().any(|a| {
            a.k >= 1 && a.rows.len() == rows.len() && rows.iter().all(|r| a.rows.contains(r))
        })
    }

    /// Whether the automorphism maps every piece of knowledge onto knowledge
    /// of the same kind.
    pub fn preserved_by(&self, perm: &Permutation) -> bool {
        let g = self.graph();
        let img = |r: &EdgeSet| EdgeSet::from_indices(r.iter().map(|k| perm.apply_edge(g, k)));
        if !self
            .kb
            .rows()
            .all(|(r, v)| self.kb.edges_class(&img(r)) == Some(Z2::from_parity(v)))
        {
            return false;
        }
        for a in &self.at_least {
            let image: Vec<EdgeSet> = a.rows.iter().map(img).collect();
            let ok = self.at_least.iter().any(|b| {
                if a.k != b.k {
                    return false;
                }
                if a.k == 1 {
                    let mut span = Gf2System::new();
                    for r in &b.rows {
                        let _ = span.add(r, false);
                    }
                    image.iter().all(|r| span.eval(r).is_some()) && rank(&image) == span.rank()
                } else {
                    b.rows.len() == image.len() && image.iter().all(|r| b.rows.contains(r))
                }
            });
            if !ok {
                return false;
            }
        }
        for l in &self.links {
            let (Ok(a), Ok(b)) = (
                l.pair.0.permuted(g, perm.images()),
                l.pair.1.permuted(g, perm.images()),
            ) else {
                return false;
            };
            if !self
                .links
                .iter()
                .any(|x| same_pair(&x.pair, &(a.clone(), b.clone())))
            {
                return false;
            }
        }
        self.linked_within
            .iter()
            .all(|&m| self.linked_within.contains(&perm.apply_mask(m)))
    }

    /// Searches for an automorphism preserving this state that maps
    /// `parts[i]` onto `targets[i]` (as vertex sets) and fixes `fixed`.
    pub fn find_symmetry(&self, parts: &[u64], targets: &[u64], fixed: u64) -> Option<Permutation> {
        let g = self.graph();
        let n = g.vertex_count();
        let all = g.all_vertices_mask();
        let target_union = targets.iter().fold(0, |m, t| m | t);
        let mut cand = vec![all; n];
        for v in 0..n {
            let bit = 1u64 << v;
            if let Some(i) = parts.iter().position(|p| p & bit != 0) {
                cand[v] &= targets[i];
            } else {
                cand[v] &= !target_union;
            }
            if fixed & bit != 0 {
                cand[v] &= bit;
            }
            for &m in &self.linked_within {
                cand[v] &= if m & bit != 0 { m } else { !m };
            }
        }
        let signs: Vec<Option<Z2>> = (0..g.edge_count()).map(|k| self.kb.edge_sign(k)).collect();
        let pair_ok = |u: usize, w: usize, u2: usize, w2: usize| match (
            g.edge_between(u, u2),
            g.edge_between(w, w2),
        ) {
            (Some(e1), Some(e2)) => signs[e1] == signs[e2],
            _ => true,
        };
        find_automorphism(g, &cand, pair_ok, |p| self.preserved_by(p))
    }
}

/// Enumerates the objects of a symmetry step as tuples of vertex masks,
/// together with whether the tuple is ordered.
pub(crate) fn enumerate_objects(g: &Graph, kind: &ObjectKind) -> Result<(Vec<Vec<u64>>, bool)> {
    let within = |w: &Option<VertexSpec>| -> Result<u64> {
        w.as_ref()
            .map_or(Ok(g.all_vertices_mask()), |s| resolve_vertices(g, s))
    };
    let verts =
        |m: u64| -> Vec<usize> { (0..g.vertex_count()).filter(|v| m >> v & 1 == 1).collect() };
    Ok(match kind {
        ObjectKind::VertexSets { within: w, size } => (
            verts(within(w)?)
                .into_iter()
                .combinations(*size)
                .map(|vs| vec![vs.iter().fold(0u64, |m, v| m | 1 << v)])
                .collect(),
            true,
        ),
        ObjectKind::Triangles { within: w } => (
            triangles_within(g, within(w)?)
                .iter()
                .map(|t| vec![t.vertex_mask()])
                .collect(),
            true,
        ),
        ObjectKind::DisjointTrianglePairs {
            within: w,
            separating,
        } => {
            let sep = match separating {
                Some([u, v]) => Some((1u64 << g.vertex(u)?, 1u64 << g.vertex(v)?)),
                None => None,
            };
            let pairs = disjoint_cycle_pairs(&triangles_within(g, within(w)?));
            (
                pairs
                    .iter()
                    .map(|(a, b)| (a.vertex_mask(), b.vertex_mask()))
                    .filter(|&(a, b)| match sep {
                        Some((u, v)) => (a & u != 0 && b & v != 0) || (a & v != 0 && b & u != 0),
                        None => true,
                    })
                    .map(|(a, b)| vec![a, b])
                    .collect(),
                false,
            )
        }
        ObjectKind::OrderedVertexPairs { within: w } => {
            let vs = verts(within(w)?);
            (
                vs.iter()
                    .flat_map(|&x| {
                        vs.iter()
                            .filter(move |&&y| y != x)
                            .map(move |&y| vec![1u64 << x, 1u64 << y])
                    })
                    .collect(),
                true,
            )
        }
    })
}

/// Applies `perm` to every vertex label of a fact.
pub(crate) fn map_fact(g: &Graph, fact: &Fact, perm: &Permutation) -> Result<Fact> {
    let m = |l: &String| -> Result<String> { Ok(g.label(perm.apply(g.vertex(l)?)).to_string()) };
    let ml = |ls: &Labels| -> Result<Labels> { ls.iter().map(m).collect() };
    let mv = |s: &VertexSpec| -> Result<VertexSpec> {
        let mask = perm.apply_mask(resolve_vertices(g, s)?);
        Ok(VertexSpec::Labels(g.mask_labels(mask)))
    };
    Ok(match fact {
        Fact::Edge { edge: [a, b], sign } => Fact::Edge {
            edge: [m(a)?, m(b)?],
            sign: *sign,
        },
        Fact::Cycle { cycle, class } => Fact::Cycle {
            cycle: ml(cycle)?,
            class: *class,
        },
        Fact::Zero { vertices } => Fact::Zero {
            vertices: mv(vertices)?,
        },
        Fact::HasOne { vertices } => Fact::HasOne {
            vertices: mv(vertices)?,
        },
        Fact::Uniform { vertex, over } => Fact::Uniform {
            vertex: m(vertex)?,
            over: ml(over)?,
        },
        Fact::AtLeast { cycles, count } => Fact::AtLeast {
            cycles: cycles.iter().map(ml).collect::<Result<_>>()?,
            count: *count,
        },
        Fact::Linked {
            cycles: [a, b],
            reason,
        } => Fact::Linked {
            cycles: [ml(a)?, ml(b)?],
            reason: reason.clone(),
        },
    })
}

/// Every assignment of classes to `cycles` consistent with the state,
/// in binary order (`cycles[0]` is the lowest bit).
pub(crate) fn assignments(state: &State, cycles: &[Cycle]) -> Vec<(u32, State)> {
    let mut out = Vec::new();
    'bits: for bits in 0u32..1 << cycles.len() {
        let mut s = state.clone();
        for (i, c) in cycles.iter().enumerate() {
            if s.kb
                .fix_cycle(c, Z2::from_parity(bits >> i & 1 == 1))
                .is_err()
            {
                continue 'bits;
            }
        }
        if s.at_least_consistent() {
            out.push((bits, s));
        }
    }
    out
}

pub(crate) fn describe_assignment(g: &Graph, cycles: &[Cycle], bits: u32) -> String {
    cycles
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{}={}", c.display(g), bits >> i & 1))
        .join(" ")
}
