use itertools::Itertools;

use super::types::{
    Certificate, ClassOracle, CycleRef, RowForm, SecondLink, Violation, WitnessRow,
};
use crate::error::{Error, Result};
use crate::graphs::{
    disjoint_cycle_pairs, enumerate_triangles, intersection_type, Cycle, Graph, IntersectionType,
};
use crate::homology::Z2;

/// Outcome of a rule check: `Err` carries the first failed condition.
pub type Checked<T> = std::result::Result<T, Violation>;

fn is_one<O: ClassOracle + ?Sized>(o: &O, c: &Cycle) -> bool {
    o.class(c) == Some(Z2::ONE)
}

fn same_graph(g: &Graph, cycles: &[&Cycle]) -> Result<()> {
    if cycles.iter().any(|c| c.graph_id() != g.id()) {
        return Err(Error::GraphMismatch);
    }
    Ok(())
}

/// All vertex-disjoint pairs from `cycles` with both classes 1.
pub fn disjoint_one_hom_pairs<O: ClassOracle + ?Sized>(
    o: &O,
    cycles: &[Cycle],
) -> Vec<Certificate> {
    let g = o.graph();
    let ones: Vec<&Cycle> = cycles.iter().filter(|c| is_one(o, c)).collect();
    ones.iter()
        .tuple_combinations()
        .filter(|(a, b)| a.is_disjoint(b))
        .map(|(a, b)| Certificate::DisjointOnePair {
            cycles: [CycleRef::of(g, a), CycleRef::of(g, b)],
        })
        .collect()
}

/// All pairwise vertex-disjoint triples from `cycles` with every class 1.
pub fn disjoint_one_hom_triples<O: ClassOracle + ?Sized>(
    o: &O,
    cycles: &[Cycle],
) -> Vec<Certificate> {
    let g = o.graph();
    let ones: Vec<&Cycle> = cycles.iter().filter(|c| is_one(o, c)).collect();
    let mut out = Vec::new();
    for (i, a) in ones.iter().enumerate() {
        for (j, b) in ones.iter().enumerate().skip(i + 1) {
            if !a.is_disjoint(b) {
                continue;
            }
            for c in &ones[j + 1..] {
                if a.is_disjoint(c) && b.is_disjoint(c) {
                    out.push(Certificate::DisjointOneTriple {
                        cycles: [CycleRef::of(g, a), CycleRef::of(g, b), CycleRef::of(g, c)],
                    });
                }
            }
        }
    }
    out
}

/// The seven cycles of the K4 on `vs`: four triangles and three 4-cycles.
pub(crate) fn k4_cycles(g: &Graph, vs: &[usize]) -> Result<Vec<Cycle>> {
    let [a, b, c, d] = [vs[0], vs[1], vs[2], vs[3]];
    [
        vec![a, b, c],
        vec![a, b, d],
        vec![a, c, d],
        vec![b, c, d],
        vec![a, b, c, d],
        vec![a, b, d, c],
        vec![a, c, b, d],
    ]
    .iter()
    .map(|s| Cycle::new(g, s))
    .collect()
}

fn mask_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|v| mask >> v & 1 == 1).collect()
}

/// Induced K6 subgraphs of `g`, as vertex masks in lexicographic order of their vertex lists.
pub fn induced_k6s(g: &Graph) -> Vec<u64> {
    (0..g.vertex_count())
        .combinations(6)
        .map(|vs| vs.iter().fold(0u64, |m, &v| m | 1 << v))
        .filter(|&m| g.is_clique(m))
        .collect()
}

/// Every induced K6 with an induced K4 whose seven cycles are all class 0.
pub fn zero_hom_k4_links<O: ClassOracle + ?Sized>(o: &O) -> Vec<Certificate> {
    let g = o.graph();
    let mut out = Vec::new();
    for k6 in induced_k6s(g) {
        for k4 in mask_vertices(k6).into_iter().combinations(4) {
            let cycles = k4_cycles(g, &k4).expect("clique");
            if cycles.iter().all(|c| o.class(c) == Some(Z2::ZERO)) {
                out.push(Certificate::ZeroHomK4InK6 {
                    k6: g.mask_labels(k6),
                    k4: k4.iter().map(|&v| g.label(v).to_string()).collect(),
                });
            }
        }
    }
    out
}

/// Checks the hypotheses of a link source.
pub fn check_link_source<O: ClassOracle + ?Sized>(
    o: &O,
    source: &Certificate,
) -> Result<Checked<()>> {
    let g = o.graph();
    match source {
        Certificate::DisjointOnePair { cycles: [a, b] } => {
            let (ca, cb) = (a.resolve(g)?, b.resolve(g)?);
            if !ca.is_disjoint(&cb) {
                return Ok(Err(Violation::new(
                    "source-pair",
                    vec![a.clone(), b.clone()],
                    "cycles meet",
                )));
            }
            if !is_one(o, &ca) || !is_one(o, &cb) {
                return Ok(Err(Violation::new(
                    "source-pair",
                    vec![a.clone(), b.clone()],
                    "both cycles must be 1-homologous",
                )));
            }
            Ok(Ok(()))
        }
        Certificate::RecordedLink { cycles: [a, b], .. } => {
            if !a.resolve(g)?.is_disjoint(&b.resolve(g)?) {
                return Ok(Err(Violation::new(
                    "source-pair",
                    vec![a.clone(), b.clone()],
                    "cycles meet",
                )));
            }
            Ok(Ok(()))
        }
        Certificate::ZeroHomK4InK6 { k6, k4 } => {
            let m6 = g.mask_of(k6)?;
            let m4 = g.mask_of(k4)?;
            if k6.len() != 6 || m6.count_ones() != 6 || !g.is_clique(m6) {
                return Ok(Err(Violation::new(
                    "source-k6",
                    vec![],
                    "vertices do not induce a K6",
                )));
            }
            if k4.len() != 4 || m4.count_ones() != 4 || m4 & !m6 != 0 {
                return Ok(Err(Violation::new(
                    "source-k6",
                    vec![],
                    "K4 is not four vertices of the K6",
                )));
            }
            for c in k4_cycles(g, &mask_vertices(m4))? {
                if o.class(&c) != Some(Z2::ZERO) {
                    return Ok(Err(Violation::new(
                        "source-k4",
                        vec![CycleRef::of(g, &c)],
                        "K4 cycle not known to be 0-homologous",
                    )));
                }
            }
            Ok(Ok(()))
        }
        other => Ok(Err(Violation::new(
            "source-kind",
            vec![],
            format!("{} is not a link source", other.kind()),
        ))),
    }
}

/// Pairs one of which is linked to the other, as implied by the source.
/// For a K6 source these are its 10 disjoint triangle pairs.
pub fn candidate_pairs(g: &Graph, source: &Certificate) -> Result<Vec<(Cycle, Cycle)>> {
    match source {
        Certificate::DisjointOnePair { cycles: [a, b] }
        | Certificate::RecordedLink { cycles: [a, b], .. } => {
            Ok(vec![(a.resolve(g)?, b.resolve(g)?)])
        }
        Certificate::ZeroHomK4InK6 { k6, .. } => {
            let sub = g.induced_subgraph(k6)?;
            let tris: Vec<Cycle> = enumerate_triangles(&sub.graph)
                .iter()
                .map(|t| {
                    let vs: Vec<usize> = t.vertices().iter().map(|&v| sub.vertex_map[v]).collect();
                    Cycle::new(g, &vs)
                })
                .collect::<Result<_>>()?;
            Ok(disjoint_cycle_pairs(&tris))
        }
        other => Err(Error::Structure(format!(
            "{} is not a link source",
            other.kind()
        ))),
    }
}

/// A proposed witness for one candidate pair, orientation unspecified.
#[derive(Clone, Debug)]
pub struct WitnessEntry {
    pub pair: (Cycle, Cycle),
    pub witness: Cycle,
}

/// Conditions on one oriented row: `ca` is linked to `cb`, `w` meets `ca`
/// in a path and is linked to `e`.
pub(crate) fn check_row<O: ClassOracle + ?Sized>(
    o: &O,
    ca: &Cycle,
    cb: &Cycle,
    w: &Cycle,
    e: &Cycle,
    second: &SecondLink,
) -> std::result::Result<IntersectionType, (&'static str, &'static str)> {
    if *second == SecondLink::OneHomologous && !is_one(o, w) {
        return Err(("witness-class", "witness not known to be 1-homologous"));
    }
    let it = intersection_type(w, ca);
    if !it.is_path_like() {
        return Err((
            "witness-intersection",
            "witness does not meet the linked cycle in a vertex or path",
        ));
    }
    if !w.is_disjoint(cb) {
        return Err((
            "witness-meets-partner",
            "witness meets the other cycle of the pair",
        ));
    }
    if !w.is_disjoint(e) {
        return Err(("witness-meets-external", "witness meets the external cycle"));
    }
    if !cb.is_disjoint(e) {
        return Err((
            "partner-meets-external",
            "other cycle of the pair meets the external cycle",
        ));
    }
    if !ca.is_disjoint(e) {
        return Err((
            "linked-meets-external",
            "linked cycle meets the external cycle",
        ));
    }
    Ok(it)
}

fn same_pair(a: &(Cycle, Cycle), b: &(Cycle, Cycle)) -> bool {
    (a.0 == b.0 && a.1 == b.1) || (a.0 == b.1 && a.1 == b.0)
}

/// Path composition: the source gives a link inside some pair of
/// `candidate_pairs`; for every such pair a witness meets one cycle in a path
/// and is disjoint from the other, and is linked to the external cycle.
pub fn ll_compose<O: ClassOracle + ?Sized>(
    o: &O,
    link_source: &Certificate,
    external: &Cycle,
    witnesses: &[WitnessEntry],
) -> Result<Checked<Certificate>> {
    compose(
        o,
        link_source,
        external,
        witnesses,
        SecondLink::OneHomologous,
    )
}

/// As [`ll_compose`] with one fixed witness whose link to `external` is recorded elsewhere.
pub fn compose_with_link<O: ClassOracle + ?Sized>(
    o: &O,
    link_source: &Certificate,
    witness: &Cycle,
    external: &Cycle,
    reason: &str,
) -> Result<Checked<Certificate>> {
    let g = o.graph();
    let entries: Vec<WitnessEntry> = candidate_pairs(g, link_source)?
        .into_iter()
        .map(|pair| WitnessEntry {
            pair,
            witness: witness.clone(),
        })
        .collect();
    compose(
        o,
        link_source,
        external,
        &entries,
        SecondLink::Recorded {
            reason: reason.to_string(),
        },
    )
}

fn compose<O: ClassOracle + ?Sized>(
    o: &O,
    link_source: &Certificate,
    external: &Cycle,
    witnesses: &[WitnessEntry],
    second: SecondLink,
) -> Result<Checked<Certificate>> {
    let g = o.graph();
    same_graph(g, &[external])?;
    for w in witnesses {
        same_graph(g, &[&w.pair.0, &w.pair.1, &w.witness])?;
    }
    if let Err(v) = check_link_source(o, link_source)? {
        return Ok(Err(v));
    }
    let e_ref = CycleRef::of(g, external);
    if second == SecondLink::OneHomologous && !is_one(o, external) {
        return Ok(Err(Violation::new(
            "external-class",
            vec![e_ref],
            "external cycle not known to be 1-homologous",
        )));
    }
    let candidates = candidate_pairs(g, link_source)?;
    if let Some(extra) = witnesses
        .iter()
        .find(|w| !candidates.iter().any(|c| same_pair(c, &w.pair)))
    {
        return Ok(Err(Violation::new(
            "unknown-pair",
            vec![
                CycleRef::of(g, &extra.pair.0),
                CycleRef::of(g, &extra.pair.1),
            ],
            "witness given for a pair the source does not name",
        )));
    }
    let mut rows = Vec::with_capacity(candidates.len());
    for pair in &candidates {
        let pair_refs = vec![CycleRef::of(g, &pair.0), CycleRef::of(g, &pair.1)];
        let Some(entry) = witnesses.iter().find(|w| same_pair(&w.pair, pair)) else {
            return Ok(Err(Violation::new(
                "missing-witness",
                pair_refs,
                "no witness for this pair",
            )));
        };
        let w = &entry.witness;
        let mut first_failure = None;
        let mut accepted = None;
        for (ca, cb) in [(&pair.0, &pair.1), (&pair.1, &pair.0)] {
            match check_row(o, ca, cb, w, external, &second) {
                Ok(it) => {
                    accepted = Some((ca, cb, it));
                    break;
                }
                Err(f) => {
                    first_failure.get_or_insert(f);
                }
            }
        }
        let Some((ca, cb, it)) = accepted else {
            let (rule, note) = first_failure.expect("two orientations tried");
            let mut cycles = pair_refs;
            cycles.push(CycleRef::of(g, w));
            cycles.push(e_ref.clone());
            return Ok(Err(Violation::new(rule, cycles, note)));
        };
        rows.push(WitnessRow {
            linked: [CycleRef::of(g, ca), CycleRef::of(g, cb)],
            witness: CycleRef::of(g, w),
            intersection: it,
            form: if it == IntersectionType::Identical {
                RowForm::ThreeChain
            } else {
                RowForm::LlComposition
            },
        });
    }
    if rows.len() == 1 && rows[0].form == RowForm::ThreeChain && second == SecondLink::OneHomologous
    {
        let [ca, cb] = rows.remove(0).linked;
        return Ok(Ok(Certificate::ThreeChain {
            cycles: [cb, ca, e_ref],
            link_source: Box::new(link_source.clone()),
        }));
    }
    Ok(Ok(Certificate::LlComposition {
        link_source: Box::new(link_source.clone()),
        external: e_ref,
        second_link: second,
        rows,
    }))
}

/// Re-checks a certificate from its stored data.
pub fn verify_certificate<O: ClassOracle + ?Sized>(
    o: &O,
    cert: &Certificate,
) -> Result<Checked<()>> {
    let g = o.graph();
    match cert {
        Certificate::DisjointOnePair { .. }
        | Certificate::RecordedLink { .. }
        | Certificate::ZeroHomK4InK6 { .. } => check_link_source(o, cert),
        Certificate::DisjointOneTriple { cycles } => {
            let cs: Vec<Cycle> = cycles.iter().map(|c| c.resolve(g)).collect::<Result<_>>()?;
            for (a, b) in cs.iter().tuple_combinations() {
                if !a.is_disjoint(b) {
                    return Ok(Err(Violation::new(
                        "triple-disjoint",
                        cycles.to_vec(),
                        "cycles meet",
                    )));
                }
            }
            if !cs.iter().all(|c| is_one(o, c)) {
                return Ok(Err(Violation::new(
                    "triple-class",
                    cycles.to_vec(),
                    "not every cycle is known to be 1-homologous",
                )));
            }
            Ok(Ok(()))
        }
        Certificate::LlComposition {
            link_source,
            external,
            second_link,
            rows,
        } => {
            if let Err(v) = check_link_source(o, link_source)? {
                return Ok(Err(v));
            }
            let e = external.resolve(g)?;
            if *second_link == SecondLink::OneHomologous && !is_one(o, &e) {
                return Ok(Err(Violation::new(
                    "external-class",
                    vec![external.clone()],
                    "external cycle not 1-homologous",
                )));
            }
            let candidates = candidate_pairs(g, link_source)?;
            if rows.len() != candidates.len() {
                return Ok(Err(Violation::new(
                    "row-count",
                    vec![],
                    "rows do not cover the candidate pairs",
                )));
            }
            for (row, pair) in rows.iter().zip(&candidates) {
                let ca = row.linked[0].resolve(g)?;
                let cb = row.linked[1].resolve(g)?;
                let w = row.witness.resolve(g)?;
                if !same_pair(&(ca.clone(), cb.clone()), pair) {
                    return Ok(Err(Violation::new(
                        "row-pair",
                        row.linked.to_vec(),
                        "row does not match candidate order",
                    )));
                }
                match check_row(o, &ca, &cb, &w, &e, second_link) {
                    Ok(it) if it == row.intersection => {}
                    Ok(_) => {
                        return Ok(Err(Violation::new(
                            "row-intersection",
                            row.linked.to_vec(),
                            "stored intersection differs",
                        )))
                    }
                    Err((rule, note)) => {
                        return Ok(Err(Violation::new(rule, row.linked.to_vec(), note)))
                    }
                }
            }
            Ok(Ok(()))
        }
        Certificate::ThreeChain {
            cycles,
            link_source,
        } => {
            if let Err(v) = check_link_source(o, link_source)? {
                return Ok(Err(v));
            }
            let [c1, c2, c3] = [
                cycles[0].resolve(g)?,
                cycles[1].resolve(g)?,
                cycles[2].resolve(g)?,
            ];
            let candidates = candidate_pairs(g, link_source)?;
            if candidates.len() != 1 || !same_pair(&candidates[0], &(c1.clone(), c2.clone())) {
                return Ok(Err(Violation::new(
                    "chain-source",
                    cycles.to_vec(),
                    "source does not link the first two cycles",
                )));
            }
            if !c1.is_disjoint(&c3) || !c2.is_disjoint(&c3) {
                return Ok(Err(Violation::new(
                    "chain-disjoint",
                    cycles.to_vec(),
                    "chain ends or last link meet",
                )));
            }
            if !is_one(o, &c2) || !is_one(o, &c3) {
                return Ok(Err(Violation::new(
                    "chain-class",
                    cycles.to_vec(),
                    "second link is not a 1-hom pair",
                )));
            }
            Ok(Ok(()))
        }
    }
}
