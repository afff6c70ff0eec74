use std::sync::Arc;

use super::signing::{EdgeSigning, SpanningForest, Z2};
use crate::error::{Error, Result};
use crate::graphs::{Cycle, EdgeSet, Graph, Permutation};

/// Linear system over GF(2) in row echelon form. Each row's pivot is its
/// lowest set bit and rows are kept sorted by pivot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Gf2System {
    rows: Vec<(EdgeSet, bool)>,
}

impl Gf2System {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: EdgeSet, mut rhs: bool) -> (EdgeSet, bool) {
        for (row, r) in &self.rows {
            let p = row.first().expect("rows are non-zero");
            if v.contains(p) {
                v = v.xor(row);
                rhs ^= r;
            }
        }
        (v, rhs)
    }

    /// Adds `v . x = rhs`. Returns whether the rank grew; an equation that
    /// contradicts the system is a `Constraint` error.
    pub fn add(&mut self, v: &EdgeSet, rhs: bool) -> Result<bool> {
        let (v, rhs) = self.reduce(*v, rhs);
        match v.first() {
            None if rhs => Err(Error::Constraint("contradicts earlier constraints".into())),
            None => Ok(false),
            Some(p) => {
                let at = self
                    .rows
                    .partition_point(|(row, _)| row.first().unwrap() < p);
                self.rows.insert(at, (v, rhs));
                Ok(true)
            }
        }
    }

    /// Value of `v . x` if it is forced by the system.
    pub fn eval(&self, v: &EdgeSet) -> Option<bool> {
        let (rest, rhs) = self.reduce(*v, false);
        rest.is_empty().then_some(rhs)
    }

    /// Some solution; free variables are 0.
    pub fn solve(&self) -> EdgeSet {
        let mut x = EdgeSet::empty();
        for (row, rhs) in self.rows.iter().rev() {
            let p = row.first().unwrap();
            let mut rest = *row;
            rest.remove(p);
            if rest.odd_overlap(&x) ^ rhs {
                x.insert(p);
            }
        }
        x
    }
}

/// Partial knowledge of a signing: edge signs and cycle classes known so far.
/// Classes of cycles in the span of what is known are derived automatically.
#[derive(Clone, Debug)]
pub struct SigningConstraintSet {
    graph: Arc<Graph>,
    system: Gf2System,
}

impl SigningConstraintSet {
    pub fn new(graph: Arc<Graph>) -> Self {
        SigningConstraintSet {
            graph,
            system: Gf2System::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn system(&self) -> &Gf2System {
        &self.system
    }

    pub fn fix_edge(&mut self, edge: usize, value: Z2) -> Result<bool> {
        if edge >= self.graph.edge_count() {
            return Err(Error::Structure(format!("edge index {edge} out of range")));
        }
        self.system
            .add(&EdgeSet::from_indices([edge]), value.is_one())
    }

    pub fn fix_cycle(&mut self, c: &Cycle, value: Z2) -> Result<bool> {
        if c.graph_id() != self.graph.id() {
            return Err(Error::GraphMismatch);
        }
        self.system.add(c.edge_set(), value.is_one())
    }

    /// Fixes the parity of `-` edges in an arbitrary edge set.
    pub fn fix_edges(&mut self, edges: &EdgeSet, value: Z2) -> Result<bool> {
        self.system.add(edges, value.is_one())
    }

    /// Fixes every edge of `s`.
    pub fn fix_signing(&mut self, s: &EdgeSigning) -> Result<()> {
        for k in 0..self.graph.edge_count() {
            self.fix_edge(k, s.sign(k))?;
        }
        Ok(())
    }

    pub fn edge_sign(&self, edge: usize) -> Option<Z2> {
        self.system
            .eval(&EdgeSet::from_indices([edge]))
            .map(Z2::from_parity)
    }

    pub fn cycle_class(&self, c: &Cycle) -> Option<Z2> {
        self.system.eval(c.edge_set()).map(Z2::from_parity)
    }

    pub fn edges_class(&self, edges: &EdgeSet) -> Option<Z2> {
        self.system.eval(edges).map(Z2::from_parity)
    }

    /// True when every cycle has a forced class.
    pub fn homology_determined(&self) -> bool {
        SpanningForest::of(&self.graph)
            .fundamental_cycles
            .iter()
            .all(|c| self.system.eval(c).is_some())
    }

    /// A signing satisfying every constraint.
    pub fn representative(&self) -> EdgeSigning {
        EdgeSigning::from_negative(self.graph.clone(), self.system.solve())
            .expect("solution lies within the edge range")
    }

    /// The constraint set transported along an automorphism.
    pub fn permuted(&self, perm: &Permutation) -> SigningConstraintSet {
        let mut out = SigningConstraintSet::new(self.graph.clone());
        for (row, rhs) in &self.system.rows {
            let mut img = EdgeSet::empty();
            for k in row.iter() {
                img.insert(perm.apply_edge(&self.graph, k));
            }
            out.system
                .add(&img, *rhs)
                .expect("image of a consistent system");
        }
        out
    }

    pub fn rows(&self) -> impl Iterator<Item = (&EdgeSet, bool)> {
        self.system.rows.iter().map(|(r, b)| (r, *b))
    }
}
