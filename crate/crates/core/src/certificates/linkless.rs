use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use super::rules::k4_cycles;
use super::types::{CycleRef, Violation};
use crate::error::{Error, Result};
use crate::graphs::{
    automorphisms, complete_graph, disjoint_cycle_pairs, enumerate_triangles, EdgeSet,
};
use crate::homology::{canonical_over, enumerate_classes, figure2_signing, EdgeSigning, Modulo};

/// Homology-level necessary conditions for a linkless K6:
/// (a) no disjoint triangle pair with both classes 1;
/// (b) no disjoint triangle pair with both classes 0;
/// (c) every K4 has a 1-homologous cycle.
/// An empty result is a pass.
pub fn linkless_k6_check(s: &EdgeSigning) -> Result<Vec<Violation>> {
    let g = s.graph();
    if g.vertex_count() != 6 || g.edge_count() != 15 {
        return Err(Error::Structure("linkless check needs a K6".into()));
    }
    let tris = enumerate_triangles(g);
    let mut out = Vec::new();
    for (a, b) in disjoint_cycle_pairs(&tris) {
        let (x, y) = (s.class_unchecked(&a), s.class_unchecked(&b));
        if x == y {
            let rule = if x.is_one() {
                "disjoint-one-pair"
            } else {
                "disjoint-zero-pair"
            };
            out.push(Violation::new(
                rule,
                vec![CycleRef::of(g, &a), CycleRef::of(g, &b)],
                "disjoint triangles with equal classes",
            ));
        }
    }
    for k4 in (0..6).combinations(4) {
        let cycles = k4_cycles(g, &k4)?;
        if cycles.iter().all(|c| !s.class_unchecked(c).is_one()) {
            out.push(Violation::new(
                "k4-all-zero",
                vec![CycleRef::of(g, &cycles[0])],
                format!(
                    "K4 on [{}] has no 1-homologous cycle",
                    g.mask_labels(k4.iter().fold(0, |m, &v| m | 1 << v))
                        .join(", ")
                ),
            ));
        }
    }
    Ok(out)
}

/// Result of the exhaustive search over K6 signings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinklessK6Report {
    pub mode: String,
    pub signings_checked: u64,
    /// Passing switching classes, each as its canonical `-` edge list.
    pub passing_classes: Vec<Vec<[String; 2]>>,
    pub orbit_count: usize,
    /// Canonical representative (modulo switching and automorphism) of each passing orbit.
    pub orbit_representatives: Vec<Vec<[String; 2]>>,
    pub contains_figure2: bool,
    /// Distinct numbers of 1-homologous triangles among passing signings.
    pub one_hom_triangle_counts: Vec<usize>,
    /// Whether every passing signing has exactly one 1-homologous member in each disjoint pair.
    pub one_per_disjoint_pair: bool,
}

fn edge_list(s: &EdgeSigning) -> Vec<[String; 2]> {
    s.negative_edges()
        .iter()
        .map(|k| {
            let (a, b) = s.graph().edge_labels(k);
            [a.to_string(), b.to_string()]
        })
        .collect()
}

/// Runs [`linkless_k6_check`] over every switching class of K6, or over all
/// 2^15 signings when `oracle` is set, and groups the passing set into orbits.
pub fn search_linkless_k6(oracle: bool) -> Result<LinklessK6Report> {
    let g = Arc::new(complete_graph::<&str>(6, None)?);
    let group = automorphisms(&g)?;
    let tris = enumerate_triangles(&g);
    let pairs = disjoint_cycle_pairs(&tris);
    let mut passing: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut orbits: BTreeMap<Vec<usize>, EdgeSigning> = BTreeMap::new();
    let mut counts = BTreeSet::new();
    let mut one_per_pair = true;
    let mut checked = 0u64;
    let mut visit = |s: EdgeSigning| -> Result<()> {
        checked += 1;
        if !linkless_k6_check(&s)?.is_empty() {
            return Ok(());
        }
        counts.insert(
            tris.iter()
                .filter(|t| s.class_unchecked(t).is_one())
                .count(),
        );
        one_per_pair &= pairs
            .iter()
            .all(|(a, b)| s.class_unchecked(a) != s.class_unchecked(b));
        let c = s.canonical(Modulo::Switching)?;
        passing.insert(c.negative_edges().iter().collect());
        let o = canonical_over(&s, &group);
        orbits
            .entry(o.negative_edges().iter().collect())
            .or_insert(o);
        Ok(())
    };
    if oracle {
        for bits in 0u32..1 << 15 {
            let neg = EdgeSet::from_indices((0..15).filter(|i| bits >> i & 1 == 1));
            visit(EdgeSigning::from_negative(g.clone(), neg)?)?;
        }
    } else {
        for s in enumerate_classes(g.clone())? {
            visit(s)?;
        }
    }
    let fig = figure2_signing();
    let fig_key: Vec<usize> = canonical_over(&fig, &group)
        .negative_edges()
        .iter()
        .collect();
    let to_lists = |ks: &Vec<usize>| -> Vec<[String; 2]> {
        ks.iter()
            .map(|&k| {
                let (a, b) = g.edge_labels(k);
                [a.to_string(), b.to_string()]
            })
            .collect()
    };
    Ok(LinklessK6Report {
        mode: if oracle {
            "all-signings"
        } else {
            "switching-classes"
        }
        .to_string(),
        signings_checked: checked,
        passing_classes: passing.iter().map(to_lists).collect(),
        orbit_count: orbits.len(),
        contains_figure2: orbits.contains_key(&fig_key),
        orbit_representatives: orbits.values().map(edge_list).collect(),
        one_hom_triangle_counts: counts.into_iter().collect(),
        one_per_disjoint_pair: one_per_pair,
    })
}
