use std::collections::HashMap;

use super::{enumerate_triangles, Cycle, Graph};
use crate::error::{Error, Result};

/// Largest graph whose full automorphism group is materialised.
pub const MAX_AUTOMORPHISM_VERTICES: usize = 12;

/// A bijection on vertex indices, stored as the image of each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Structure("mapping is not a bijection".into()));
            }
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn apply_mask(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            out |= 1 << self.0[v];
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_automorphism(&self, g: &Graph) -> bool {
        self.0.len() == g.vertex_count()
            && g.edges()
                .iter()
                .all(|&(u, v)| g.adjacent(self.0[u], self.0[v]))
    }

    /// Image of edge `k` as an edge index.
    pub fn apply_edge(&self, g: &Graph, k: usize) -> usize {
        let (u, v) = g.edge(k);
        g.edge_between(self.0[u], self.0[v])
            .expect("permutation is an automorphism")
    }

    pub fn to_labels(&self, g: &Graph) -> Vec<(String, String)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(v, w)| v != *w)
            .map(|(v, &w)| (g.label(v).to_string(), g.label(w).to_string()))
            .collect()
    }
}

fn degree_signature(g: &Graph, v: usize) -> (usize, Vec<usize>) {
    let mut nd: Vec<usize> = (0..g.vertex_count())
        .filter(|&w| g.adjacent(v, w))
        .map(|w| g.degree(w))
        .collect();
    nd.sort_unstable();
    (g.degree(v), nd)
}

/// Backtracking over automorphisms of `g`.
///
/// `candidates[v]` restricts the images of `v`; `pair_ok(u, w, u2, w2)` is an
/// extra test when `u -> w` is added next to an already-mapped `u2 -> w2`;
/// `visit` sees each complete automorphism and returns `false` to stop.
pub(crate) fn search_automorphisms<P, V>(g: &Graph, candidates: &[u64], pair_ok: P, mut visit: V)
where
    P: Fn(usize, usize, usize, usize) -> bool,
    V: FnMut(&[usize]) -> bool,
{
    let n = g.vertex_count();
    let sig: Vec<_> = (0..n).map(|v| degree_signature(g, v)).collect();
    let mut cand: Vec<u64> = candidates.to_vec();
    for u in 0..n {
        for w in 0..n {
            if cand[u] >> w & 1 == 1 && sig[u] != sig[w] {
                cand[u] &= !(1 << w);
            }
        }
    }
    let mut image = vec![usize::MAX; n];
    fn go<P, V>(
        g: &Graph,
        u: usize,
        cand: &[u64],
        used: u64,
        image: &mut [usize],
        pair_ok: &P,
        visit: &mut V,
    ) -> bool
    where
        P: Fn(usize, usize, usize, usize) -> bool,
        V: FnMut(&[usize]) -> bool,
    {
        let n = g.vertex_count();
        if u == n {
            return visit(image);
        }
        let mut options = cand[u] & !used;
        while options != 0 {
            let w = options.trailing_zeros() as usize;
            options &= options - 1;
            let ok = (0..u).all(|u2| {
                let w2 = image[u2];
                g.adjacent(u, u2) == g.adjacent(w, w2) && pair_ok(u, w, u2, w2)
            });
            if !ok {
                continue;
            }
            image[u] = w;
            if !go(g, u + 1, cand, used | 1 << w, image, pair_ok, visit) {
                return false;
            }
        }
        image[u] = usize::MAX;
        true
    }
    go(g, 0, &cand, 0, &mut image, &pair_ok, &mut visit);
}

/// The full automorphism group, in lexicographic order of image sequences.
pub fn automorphisms(g: &Graph) -> Result<Vec<Permutation>> {
    if g.vertex_count() > MAX_AUTOMORPHISM_VERTICES {
        return Err(Error::Size(format!(
            "automorphism group of a {}-vertex graph (limit {MAX_AUTOMORPHISM_VERTICES})",
            g.vertex_count()
        )));
    }
    let all = vec![g.all_vertices_mask(); g.vertex_count()];
    let mut out = Vec::new();
    search_automorphisms(
        g,
        &all,
        |_, _, _, _| true,
        |img| {
            out.push(Permutation(img.to_vec()));
            true
        },
    );
    Ok(out)
}

/// First automorphism (in search order) satisfying the candidate restriction,
/// the pairwise test, and the final `accept` test.
pub fn find_automorphism<P, A>(
    g: &Graph,
    candidates: &[u64],
    pair_ok: P,
    mut accept: A,
) -> Option<Permutation>
where
    P: Fn(usize, usize, usize, usize) -> bool,
    A: FnMut(&Permutation) -> bool,
{
    let mut found = None;
    search_automorphisms(g, candidates, pair_ok, |img| {
        let p = Permutation(img.to_vec());
        if accept(&p) {
            found = Some(p);
            false
        } else {
            true
        }
    });
    found
}

/// True if `g` and `h` are isomorphic, found as a component swap of their disjoint union.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    let (n, m) = (g.vertex_count(), h.vertex_count());
    if n != m || g.edge_count() != h.edge_count() || 2 * n > super::MAX_VERTICES {
        return false;
    }
    let labels: Vec<String> = (0..2 * n).map(|i| i.to_string()).collect();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .chain(h.edges().iter().map(|&(u, v)| (u + n, v + n)))
        .collect();
    let Ok(u) = Graph::from_indices(labels, edges) else {
        return false;
    };
    let low = (1u64 << n) - 1;
    let candidates: Vec<u64> = (0..2 * n)
        .map(|v| if v < n { low << n } else { low })
        .collect();
    find_automorphism(&u, &candidates, |_, _, _, _| true, |_| true).is_some()
}

/// An orbit of triangles; `representative` is its least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Cycle,
    pub members: Vec<Cycle>,
}

/// Triangles of `g` partitioned into orbits of the automorphism group,
/// ordered by representative.
pub fn triangle_orbits(g: &Graph) -> Result<Vec<Orbit>> {
    let group = automorphisms(g)?;
    let triangles = enumerate_triangles(g);
    let by_mask: HashMap<u64, usize> = triangles
        .iter()
        .enumerate()
        .map(|(i, t)| (t.vertex_mask(), i))
        .collect();
    let mut orbit_of = vec![usize::MAX; triangles.len()];
    let mut orbits = Vec::new();
    for (i, t) in triangles.iter().enumerate() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = Vec::new();
        for p in &group {
            let j = by_mask[&p.apply_mask(t.vertex_mask())];
            if orbit_of[j] == usize::MAX {
                orbit_of[j] = id;
                members.push(j);
            }
        }
        members.sort_unstable();
        orbits.push(Orbit {
            representative: t.clone(),
            members: members.into_iter().map(|j| triangles[j].clone()).collect(),
        });
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_construction, complete_graph};
    use itertools::Itertools;

    /// Oracle: try every permutation of the vertex set.
    fn brute_force_group_order(g: &Graph) -> usize {
        (0..g.vertex_count())
            .permutations(g.vertex_count())
            .filter(|p| Permutation(p.clone()).is_automorphism(g))
            .count()
    }

    #[test]
    fn group_orders() {
        let k6 = complete_graph::<&str>(6, None).unwrap();
        assert_eq!(automorphisms(&k6).unwrap().len(), 720);
        let c5 = Graph::new(
            &["1", "2", "3", "4", "5"],
            &[("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "1")],
        )
        .unwrap();
        assert_eq!(automorphisms(&c5).unwrap().len(), 10);
        assert_eq!(brute_force_group_order(&c5), 10);
        let big = complete_graph::<&str>(13, None).unwrap();
        assert!(matches!(automorphisms(&big), Err(Error::Size(_))));
    }

    /// Oracle: every permutation that preserves degrees, checked edge by edge.
    /// In `k7-e-k7` only 6 and 7 have degree 11, so this is 2 * 10! candidates.
    #[test]
    fn k7_e_k7_group_order_matches_oracle() {
        let g = build_construction("k7-e-k7").unwrap();
        let hubs = [g.vertex("6").unwrap(), g.vertex("7").unwrap()];
        let rest: Vec<usize> = (0..12).filter(|v| !hubs.contains(v)).collect();
        let mut oracle = 0usize;
        for hub_order in [[hubs[0], hubs[1]], [hubs[1], hubs[0]]] {
            for perm in rest.iter().copied().permutations(rest.len()) {
                let mut img = vec![0; 12];
                img[hubs[0]] = hub_order[0];
                img[hubs[1]] = hub_order[1];
                for (&v, w) in rest.iter().zip(perm) {
                    img[v] = w;
                }
                if Permutation(img).is_automorphism(&g) {
                    oracle += 1;
                }
            }
        }
        // oracle reports 57600 = 2 * 5! * 5! * 2
        assert_eq!(oracle, 57_600);
        assert_eq!(automorphisms(&g).unwrap().len(), oracle);
    }

    #[test]
    fn k6_c6_k6_group_order() {
        let g = build_construction("k6-c6-k6").unwrap();
        // S3 on {1,2,3}, S3 on {D,E,F}, dihedral symmetries of the 6-cycle.
        assert_eq!(automorphisms(&g).unwrap().len(), 6 * 6 * 12);
    }

    #[test]
    fn group_is_closed() {
        let g = build_construction("k6-c6-k6").unwrap();
        let group = automorphisms(&g).unwrap();
        let set: std::collections::HashSet<_> = group.iter().cloned().collect();
        for p in group.iter().step_by(7) {
            assert!(p.is_automorphism(&g));
            assert!(set.contains(&p.inverse()));
            assert!(p.compose(&p.inverse()).is_identity());
            for q in group.iter().step_by(31) {
                assert!(set.contains(&p.compose(q)));
            }
        }
    }

    fn reps(g: &Graph) -> Vec<String> {
        triangle_orbits(g)
            .unwrap()
            .iter()
            .map(|o| o.representative.display(g).to_string())
            .collect()
    }

    #[test]
    fn isomorphism_examples() {
        let a = build_construction("k6-c6-k6").unwrap();
        let b = build_construction("k7-e-k7").unwrap();
        let relabelled = Graph::new(
            &["x", "y", "z", "w"],
            &[("x", "y"), ("y", "z"), ("z", "w"), ("w", "x")],
        )
        .unwrap();
        let c4 = Graph::new(
            &["1", "2", "3", "4"],
            &[("1", "3"), ("3", "2"), ("2", "4"), ("4", "1")],
        )
        .unwrap();
        assert!(is_isomorphic(&a, &a));
        assert!(!is_isomorphic(&a, &b));
        assert!(is_isomorphic(&relabelled, &c4));
        let path =
            Graph::new(&["1", "2", "3", "4"], &[("1", "2"), ("2", "3"), ("3", "4")]).unwrap();
        assert!(!is_isomorphic(&path, &c4));
    }

    #[test]
    fn orbit_representatives() {
        let g = build_construction("k6-c6-k6").unwrap();
        assert_eq!(
            reps(&g),
            [
                "(1, 2, 3)",
                "(1, 2, 4)",
                "(1, 4, 5)",
                "(4, 5, 6)",
                "(4, 5, A)"
            ]
        );
        let h = build_construction("k7-e-k7").unwrap();
        assert_eq!(reps(&h), ["(1, 2, 3)", "(1, 2, 6)", "(1, 6, 7)"]);
        let k6 = complete_graph::<&str>(6, None).unwrap();
        let o = triangle_orbits(&k6).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].members.len(), 20);
    }

    #[test]
    fn orbits_are_invariant() {
        let g = build_construction("k6-c6-k6").unwrap();
        let orbits = triangle_orbits(&g).unwrap();
        let total: usize = orbits.iter().map(|o| o.members.len()).sum();
        assert_eq!(total, enumerate_triangles(&g).len());
        for p in automorphisms(&g).unwrap().iter().step_by(17) {
            for o in &orbits {
                for t in &o.members {
                    let image = t.permuted(&g, p.images()).unwrap();
                    assert!(o.members.contains(&image));
                }
            }
        }
    }
}
