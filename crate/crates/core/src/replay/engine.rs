use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::script::{
    CertSpec, Claim, Condition, CycleSet, CycleSlot, Domain, Fact, Labels, Normalization,
    ProofScript, Requirement, Sign, Step, Transport, VertexSpec, K4_ONE,
};
use super::state::{
    assignments, cycle, describe_assignment, enumerate_objects, map_fact, mask_of, mixed_rows,
    resolve_vertices, triangles_within, State,
};
use super::table::{run_table, TableReport};
use crate::certificates::{
    candidate_pairs, check_link_source, compose_with_link, disjoint_one_hom_pairs,
    find_triple_link_certificate, known_spatial_triple_linked, linkless_k6_check,
    search_linkless_k6, verify_certificate, zero_hom_k4_links, Certificate, CycleRef,
    LinklessK6Report, SPATIAL_AXIOM,
};
use crate::error::{Error, Result};
use crate::graphs::{
    build_construction, complete_graph, disjoint_cycle_pairs, enumerate_triangles, triangle_orbits,
    Cycle, EdgeSet, Graph, Permutation,
};
use crate::homology::{enumerate_classes, EdgeSigning, Z2};

/// Axiom behind compositions (a link plus a cycle meeting one of its
/// components in a path and linked to a fourth cycle gives a triple link).
pub const AXIOM_PATH_COMPOSITION: &str = "path-composition";
/// Axiom behind K6 sources (an all-0 K4 inside a K6 forces a link).
pub const AXIOM_ZERO_K4: &str = "zero-k4-in-k6-link";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub passed: bool,
    pub closed: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub continues: bool,
    pub steps: Vec<StepReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub path: String,
    pub step: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub passed: bool,
    pub closes: bool,
    pub evidence: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<CaseReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertRecord {
    pub path: String,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRecord {
    pub path: String,
    #[serde(flatten)]
    pub report: TableReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitSummary {
    pub path: String,
    pub domain: String,
    pub total: usize,
    /// Cases closed by a certificate, a closing claim, or an axiom.
    pub closed: usize,
    pub continued: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplayReport {
    pub script: String,
    pub statement: String,
    pub graph: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub steps: Vec<StepReport>,
    pub certificates: Vec<CertRecord>,
    pub tables: Vec<TableRecord>,
    pub case_splits: Vec<SplitSummary>,
    pub declared_axioms: Vec<String>,
    pub axioms_used: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl ReplayReport {
    /// The report with timing removed, for comparisons across runs.
    pub fn normalized(&self) -> ReplayReport {
        ReplayReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }

    pub fn table(&self, id: u32) -> Option<&TableRecord> {
        self.tables.iter().find(|t| t.report.table == id)
    }

    /// The report of the case with this key, searching all splits.
    pub fn case(&self, key: &str) -> Option<&CaseReport> {
        fn walk<'a>(steps: &'a [StepReport], key: &str) -> Option<&'a CaseReport> {
            for s in steps {
                for c in &s.cases {
                    if c.case == key {
                        return Some(c);
                    }
                    if let Some(found) = walk(&c.steps, key) {
                        return Some(found);
                    }
                }
            }
            None
        }
        walk(&self.steps, key)
    }

    /// The split with the most cases.
    pub fn main_split(&self) -> Option<&SplitSummary> {
        self.case_splits.iter().max_by_key(|s| s.total)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ReplayOptions {
    /// Worker threads for case splits; `None` uses the global pool.
    pub workers: Option<usize>,
}

#[derive(Default)]
struct Acc {
    certificates: Vec<CertRecord>,
    tables: Vec<TableRecord>,
    axioms: BTreeSet<String>,
    splits: Vec<SplitSummary>,
    failure: Option<String>,
}

impl Acc {
    fn merge(&mut self, other: Acc) {
        self.certificates.extend(other.certificates);
        self.tables.extend(other.tables);
        self.axioms.extend(other.axioms);
        self.splits.extend(other.splits);
        if self.failure.is_none() {
            self.failure = other.failure;
        }
    }

    fn certificate(&mut self, path: &str, c: Certificate) {
        certificate_axioms(&c, &mut self.axioms);
        self.certificates.push(CertRecord {
            path: path.to_string(),
            certificate: c,
        });
    }
}

fn certificate_axioms(c: &Certificate, out: &mut BTreeSet<String>) {
    match c {
        Certificate::ZeroHomK4InK6 { .. } => {
            out.insert(AXIOM_ZERO_K4.into());
        }
        Certificate::LlComposition { link_source, .. }
        | Certificate::ThreeChain { link_source, .. } => {
            out.insert(AXIOM_PATH_COMPOSITION.into());
            certificate_axioms(link_source, out);
        }
        _ => {}
    }
}

struct Outcome {
    passed: bool,
    closes: bool,
    evidence: Value,
    cases: Vec<CaseReport>,
}

impl Outcome {
    fn pass(evidence: Value) -> Self {
        Outcome {
            passed: true,
            closes: false,
            evidence,
            cases: vec![],
        }
    }

    fn close(evidence: Value) -> Self {
        Outcome {
            closes: true,
            ..Outcome::pass(evidence)
        }
    }

    fn fail(evidence: Value) -> Self {
        Outcome {
            passed: false,
            ..Outcome::pass(evidence)
        }
    }
}

fn is_malformed(e: &Error) -> bool {
    matches!(
        e,
        Error::Script(_)
            | Error::Label(_)
            | Error::InvalidCycle(_)
            | Error::Parse(_)
            | Error::GraphMismatch
    )
}

struct Engine<'a> {
    script: &'a ProofScript,
}

fn refs(g: &Graph, cs: &[Cycle]) -> Vec<String> {
    cs.iter().map(|c| CycleRef::of(g, c).to_string()).collect()
}

fn labels_of(g: &Graph, m: u64) -> String {
    format!("[{}]", g.mask_labels(m).join(", "))
}

fn perm_string(g: &Graph, p: &Permutation) -> String {
    p.to_labels(g)
        .into_iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| format!("{a}->{b}"))
        .join(" ")
}

fn k4_triangles(g: &Graph, k4: &Labels) -> Result<Vec<Cycle>> {
    let m = mask_of(g, k4)?;
    if k4.len() != 4 || !g.is_clique(m) {
        return Err(Error::Script(format!("[{}] is not a K4", k4.join(", "))));
    }
    Ok(triangles_within(g, m))
}

fn cycles_of(g: &Graph, ls: &[Labels]) -> Result<Vec<Cycle>> {
    ls.iter().map(|l| cycle(g, l)).collect()
}

fn linkless_classification() -> &'static LinklessK6Report {
    static REPORT: OnceLock<LinklessK6Report> = OnceLock::new();
    REPORT.get_or_init(|| search_linkless_k6(false).expect("K6 classification"))
}

impl<'a> Engine<'a> {
    fn run_steps(
        &self,
        state: &mut State,
        steps: &[Step],
        prefix: &str,
        acc: &mut Acc,
    ) -> Result<Vec<StepReport>> {
        let mut out = Vec::new();
        for (i, step) in steps.iter().enumerate() {
            let path = format!("{prefix}{}", i + 1);
            let mut report = StepReport {
                path: path.clone(),
                step: step.kind().to_string(),
                label: step.label().map(str::to_string),
                passed: false,
                closes: false,
                evidence: Value::Null,
                error: None,
                cases: vec![],
            };
            if state.closed {
                report.error = Some("step after the branch is already closed".into());
            } else {
                match self.run_step(state, step, &path, acc) {
                    Ok(o) => {
                        report.passed = o.passed;
                        report.closes = o.passed && o.closes;
                        report.evidence = o.evidence;
                        report.cases = o.cases;
                        if report.closes {
                            state.closed = true;
                        }
                    }
                    Err(e) if is_malformed(&e) => {
                        return Err(Error::Script(format!("step {path}: {e}")))
                    }
                    Err(e) => report.error = Some(e.to_string()),
                }
            }
            let failed = !report.passed;
            if failed && acc.failure.is_none() {
                let what = report
                    .error
                    .clone()
                    .unwrap_or_else(|| "evidence check failed".to_string());
                acc.failure = Some(format!("step {path} ({}): {what}", report.step));
            }
            out.push(report);
            if failed {
                break;
            }
        }
        Ok(out)
    }

    fn run_step(
        &self,
        state: &mut State,
        step: &Step,
        path: &str,
        acc: &mut Acc,
    ) -> Result<Outcome> {
        let g = state.kb.graph_arc().clone();
        match step {
            Step::Assume { facts, .. } => {
                for f in facts {
                    state.add_fact(f)?;
                }
                Ok(Outcome::pass(
                    json!({ "facts": facts.len(), "rank": state.kb.system().rank() }),
                ))
            }
            Step::WlogOrbit {
                objects,
                targets,
                fix,
                assume,
                transport,
                ..
            } => match (objects, transport) {
                (Some(kind), None) => {
                    let (objs, ordered) = enumerate_objects(&g, kind)?;
                    self.wlog(state, &g, &objs, ordered, targets, fix, assume)
                }
                (None, Some(t)) => self.transport(state, &g, t),
                _ => Err(Error::Script(
                    "WLOG_ORBIT needs exactly one of `objects` and `transport`".into(),
                )),
            },
            Step::Normalize { normalization, .. } => self.normalize(state, &g, normalization, acc),
            Step::ParityDerive {
                k4,
                cycle: c,
                class,
                ..
            } => {
                let tris = k4_triangles(&g, k4)?;
                let target = cycle(&g, c)?;
                if !tris.contains(&target) {
                    return Err(Error::Script(format!(
                        "{} is not a triangle of the K4",
                        target.display(&g)
                    )));
                }
                let sum = tris
                    .iter()
                    .fold(EdgeSet::empty(), |s, t| s.xor(t.edge_set()));
                assert!(sum.is_empty(), "triangles of a K4 sum to zero");
                let mut known = Vec::new();
                let mut derived = Z2::ZERO;
                for t in tris.iter().filter(|t| **t != target) {
                    let Some(v) = state.kb.cycle_class(t) else {
                        return Ok(Outcome::fail(json!({
                            "undetermined": CycleRef::of(&g, t).to_string()
                        })));
                    };
                    derived += v;
                    known.push(format!("{}={}", t.display(&g), v));
                }
                let ev = json!({ "known": known, "derived": format!("{}={}", target.display(&g), derived) });
                if derived.as_u8() != *class {
                    return Ok(Outcome::fail(ev));
                }
                state.kb.fix_cycle(&target, derived)?;
                Ok(Outcome::pass(ev))
            }
            Step::BranchElim {
                k4,
                branches,
                conclude,
                ..
            } => self.branch_elim(state, &g, k4, branches, conclude, path, acc),
            Step::TableCheck {
                table,
                expected_failures,
                note,
                ..
            } => {
                let t = self
                    .script
                    .table(*table)
                    .ok_or_else(|| Error::Script(format!("no table {table}")))?;
                let report = run_table(t, &state.kb)?;
                let failed = report.failed_rows();
                let mut expected = expected_failures.clone();
                expected.sort_unstable();
                let ev = json!({
                    "table": table,
                    "rows_passed": report.rows_passed,
                    "rows": report.rows.len(),
                    "failed_rows": failed,
                    "expected_failures": expected,
                    "note": note,
                });
                let ok = report.table_failures.is_empty() && failed == expected;
                let closes = ok && expected.is_empty();
                if let Some(c) = &report.certificate {
                    acc.certificate(path, c.clone());
                }
                acc.tables.push(TableRecord {
                    path: path.to_string(),
                    report,
                });
                Ok(Outcome {
                    passed: ok,
                    closes,
                    evidence: ev,
                    cases: vec![],
                })
            }
            Step::CaseSplit {
                snapshot,
                domain,
                cases,
                ..
            } => self.case_split(state, &g, snapshot, domain, cases, path, acc),
            Step::Cert {
                kind,
                cycles,
                max_cycle_len,
                ..
            } => {
                if !state.kb.homology_determined() {
                    return Ok(Outcome::fail(
                        json!({ "reason": "homology class not determined by the branch" }),
                    ));
                }
                let s = state.kb.representative();
                let Some(cert) = find_triple_link_certificate(&s, *max_cycle_len)? else {
                    return Ok(Outcome::fail(json!({ "reason": "rule set is silent" })));
                };
                let mut ev = json!({ "found": cert.summary(), "kind": cert.kind().name() });
                if cert.kind() != *kind {
                    ev["expected_kind"] = json!(kind.name());
                    return Ok(Outcome::fail(ev));
                }
                if let Err(v) = verify_certificate(&state.kb, &cert)? {
                    ev["violation"] = json!(v.to_string());
                    return Ok(Outcome::fail(ev));
                }
                if let Some(named) = cycles {
                    let cs = cycles_of(&g, named)?;
                    let named_cert = match cs.as_slice() {
                        [a, b, c] => Certificate::DisjointOneTriple {
                            cycles: [
                                CycleRef::of(&g, a),
                                CycleRef::of(&g, b),
                                CycleRef::of(&g, c),
                            ],
                        },
                        _ => {
                            return Err(Error::Script(
                                "named CERT cycles must form a triple".into(),
                            ))
                        }
                    };
                    ev["named"] = json!(named_cert.summary());
                    if let Err(v) = verify_certificate(&state.kb, &named_cert)? {
                        ev["violation"] = json!(v.to_string());
                        return Ok(Outcome::fail(ev));
                    }
                    if named_cert != cert {
                        acc.certificate(path, named_cert);
                    }
                }
                acc.certificate(path, cert);
                Ok(Outcome::close(ev))
            }
            Step::ConnectorCheck {
                from,
                to,
                requirement,
                ..
            } => {
                let a = self.cycle_set(&g, from)?;
                let b = self.cycle_set(&g, to)?;
                if a.is_empty() || b.is_empty() {
                    return Err(Error::Script("empty cycle set in CONNECTOR_CHECK".into()));
                }
                let mut failures = Vec::new();
                let mut checked = 0;
                for c in &a {
                    for t in &b {
                        checked += 1;
                        let ok = match requirement {
                            Requirement::DisjointEdges(k) => disjoint_connectors(&g, c, t, *k),
                            Requirement::ViaVertex(v) => {
                                let v = g.vertex(v)?;
                                let near =
                                    |x: &Cycle| x.vertices().iter().any(|&u| g.adjacent(u, v));
                                t.vertex_mask() >> v & 1 == 0
                                    && (c.vertex_mask() >> v & 1 == 1 || near(c))
                                    && near(t)
                            }
                        };
                        if !ok {
                            failures.push(format!("{} -> {}", c.display(&g), t.display(&g)));
                        }
                    }
                }
                let ev = json!({ "pairs_checked": checked, "failures": failures });
                Ok(if failures.is_empty() {
                    Outcome::pass(ev)
                } else {
                    Outcome::fail(ev)
                })
            }
            Step::OrbitCount {
                graph,
                expected,
                representatives,
                ..
            } => {
                let h = build_construction(graph)?;
                let orbits = triangle_orbits(&h)?;
                let mut hit = Vec::new();
                for r in representatives {
                    let c = Cycle::from_labels(&h, r)?;
                    hit.push(orbits.iter().position(|o| o.members.contains(&c)));
                }
                let distinct: BTreeSet<_> = hit.iter().flatten().collect();
                let ok = orbits.len() == *expected
                    && representatives.len() == *expected
                    && hit.iter().all(Option::is_some)
                    && distinct.len() == *expected;
                let ev = json!({
                    "graph": graph,
                    "orbits": orbits.iter().map(|o| json!({
                        "least": CycleRef::of(&h, &o.representative).to_string(),
                        "size": o.members.len(),
                    })).collect::<Vec<_>>(),
                    "representative_orbits": hit,
                });
                Ok(if ok {
                    Outcome::pass(ev)
                } else {
                    Outcome::fail(ev)
                })
            }
            Step::Pigeonhole { claim, .. } => self.pigeonhole(state, &g, claim, path, acc),
            Step::Axiom {
                axiom,
                statement,
                closes,
                discharges,
                requires_zero,
                linked_within,
                ..
            } => {
                acc.axioms.insert(axiom.clone());
                let mut ev = json!({ "axiom": axiom, "statement": statement });
                if let Some(spec) = requires_zero {
                    if state.fact_holds(&Fact::Zero {
                        vertices: spec.clone(),
                    })? != Some(true)
                    {
                        ev["reason"] = json!("subgraph not known to be 0-homologous");
                        return Ok(Outcome::fail(ev));
                    }
                }
                if let Some(parts) = discharges {
                    let mut names = Vec::new();
                    for p in parts {
                        let m = resolve_vertices(&g, p)?;
                        if axiom == SPATIAL_AXIOM
                            && !known_spatial_triple_linked(&g.induced_by_mask(m).graph)
                        {
                            ev["reason"] =
                                json!(format!("{} is not a known spatial case", labels_of(&g, m)));
                            return Ok(Outcome::fail(ev));
                        }
                        names.push(labels_of(&g, m));
                    }
                    for p in parts {
                        state.add_fact(&Fact::HasOne {
                            vertices: p.clone(),
                        })?;
                    }
                    ev["discharged"] = json!(names);
                }
                if let Some(spec) = linked_within {
                    state.linked_within.push(resolve_vertices(&g, spec)?);
                }
                Ok(Outcome {
                    passed: true,
                    closes: *closes,
                    evidence: ev,
                    cases: vec![],
                })
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn wlog(
        &self,
        state: &mut State,
        g: &Graph,
        objs: &[Vec<u64>],
        ordered: bool,
        targets: &[Vec<Labels>],
        fix: &Labels,
        assume: &[Fact],
    ) -> Result<Outcome> {
        if objs.is_empty() || targets.is_empty() {
            return Err(Error::Script("WLOG_ORBIT needs objects and targets".into()));
        }
        let arity = objs[0].len();
        let tmasks: Vec<Vec<u64>> = targets
            .iter()
            .map(|t| t.iter().map(|l| mask_of(g, l)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        if tmasks.iter().any(|t| t.len() != arity) {
            return Err(Error::Script(
                "target arity differs from the objects".into(),
            ));
        }
        let fixed = mask_of(g, fix)?;
        let mut maps = Vec::new();
        for obj in objs {
            let orders: Vec<Vec<u64>> = if ordered {
                vec![obj.clone()]
            } else {
                obj.iter().copied().permutations(arity).collect()
            };
            let found = tmasks.iter().enumerate().find_map(|(ti, t)| {
                orders
                    .iter()
                    .find_map(|o| state.find_symmetry(o, t, fixed))
                    .map(|p| (ti, p))
            });
            let name = obj.iter().map(|&m| labels_of(g, m)).join(" ");
            match found {
                Some((ti, p)) => {
                    maps.push(json!({ "object": name, "target": ti, "map": perm_string(g, &p) }))
                }
                None => {
                    return Ok(Outcome::fail(json!({
                        "objects": objs.len(),
                        "unmapped": name,
                    })))
                }
            }
        }
        for f in assume {
            state.add_fact(f)?;
        }
        Ok(Outcome::pass(
            json!({ "objects": objs.len(), "maps": maps, "assumed": assume.len() }),
        ))
    }

    fn transport(&self, state: &mut State, g: &Graph, t: &Transport) -> Result<Outcome> {
        let snap = state
            .snapshots
            .get(&t.snapshot)
            .cloned()
            .ok_or_else(|| Error::Script(format!("no snapshot `{}`", t.snapshot)))?;
        for f in &t.facts {
            if state.fact_holds(f)? != Some(true) {
                return Ok(Outcome::fail(
                    json!({ "reason": "transported fact is not established", "fact": f }),
                ));
            }
        }
        let from: Vec<u64> = t
            .map
            .iter()
            .map(|[a, _]| Ok(1u64 << g.vertex(a)?))
            .collect::<Result<_>>()?;
        let to: Vec<u64> = t
            .map
            .iter()
            .map(|[_, b]| Ok(1u64 << g.vertex(b)?))
            .collect::<Result<_>>()?;
        let Some(p) = snap.find_symmetry(&from, &to, 0) else {
            return Ok(Outcome::fail(
                json!({ "reason": "no automorphism preserving the snapshot realizes the map" }),
            ));
        };
        let mut images = Vec::new();
        for f in &t.facts {
            let img = map_fact(g, f, &p)?;
            state.add_fact(&img)?;
            images.push(img);
        }
        Ok(Outcome::pass(json!({
            "snapshot": t.snapshot,
            "automorphism": perm_string(g, &p),
            "facts": images,
        })))
    }

    fn normalize(
        &self,
        state: &mut State,
        g: &Graph,
        n: &Normalization,
        acc: &mut Acc,
    ) -> Result<Outcome> {
        let degree_even = |rows: &[EdgeSet], m: u64| -> bool {
            let ok = |r: &EdgeSet| {
                (0..g.vertex_count())
                    .filter(|v| m >> v & 1 == 1)
                    .all(|v| r.and(&g.edges_at(v)).len().is_multiple_of(2))
            };
            rows.iter().all(ok)
        };
        match n {
            Normalization::SwitchToPlus(labels) => {
                let m = mask_of(g, labels)?;
                let zero = state.fact_holds(&Fact::Zero {
                    vertices: VertexSpec::Labels(labels.clone()),
                })?;
                if zero != Some(true) {
                    return Ok(Outcome::fail(
                        json!({ "reason": "subgraph not known to be 0-homologous" }),
                    ));
                }
                let rows: Vec<EdgeSet> = state
                    .kb
                    .rows()
                    .map(|(r, _)| *r)
                    .chain(state.at_least.iter().flat_map(|a| a.rows.iter().copied()))
                    .collect();
                if !degree_even(&rows, m) {
                    return Ok(Outcome::fail(
                        json!({ "reason": "known facts are not invariant under switching there" }),
                    ));
                }
                let within = g.edges_within(m);
                for k in within.iter() {
                    state.kb.fix_edge(k, Z2::ZERO)?;
                }
                Ok(Outcome::pass(
                    json!({ "switched_within": labels, "edges_fixed_plus": within.len() }),
                ))
            }
            Normalization::LinklessK6 { vertices, negative } => {
                let m = mask_of(g, vertices)?;
                if vertices.len() != 6 || !g.is_clique(m) {
                    return Err(Error::Script(
                        "linkless K6 normalization needs six mutually adjacent vertices".into(),
                    ));
                }
                let touches = |r: &EdgeSet| {
                    r.iter().any(|k| {
                        let (a, b) = g.edge(k);
                        (m >> a | m >> b) & 1 == 1
                    })
                };
                if state.kb.rows().any(|(r, _)| touches(r))
                    || state.at_least.iter().any(|a| a.rows.iter().any(touches))
                    || state
                        .links
                        .iter()
                        .any(|l| (l.pair.0.vertex_mask() | l.pair.1.vertex_mask()) & m != 0)
                {
                    return Ok(Outcome::fail(
                        json!({ "reason": "earlier facts mention the K6" }),
                    ));
                }
                let report = linkless_classification();
                acc.axioms.insert(AXIOM_ZERO_K4.into());
                let k6 = Arc::new(complete_graph::<&str>(6, None)?);
                let pos = |l: &str| {
                    vertices
                        .iter()
                        .position(|x| x == l)
                        .map(|i| (i + 1).to_string())
                };
                let mut local = Vec::new();
                for [a, b] in negative {
                    match (pos(a), pos(b)) {
                        (Some(x), Some(y)) => local.push((x, y)),
                        _ => {
                            return Err(Error::Script(format!("edge ({a}, {b}) is not in the K6")))
                        }
                    }
                }
                let pairs: Vec<(&str, &str)> = local
                    .iter()
                    .map(|(x, y)| (x.as_str(), y.as_str()))
                    .collect();
                let s = EdgeSigning::from_negative_labels(k6, &pairs)?;
                let violations = linkless_k6_check(&s)?;
                let ev = json!({
                    "classes_checked": report.signings_checked,
                    "passing_classes": report.passing_classes.len(),
                    "orbits": report.orbit_count,
                    "representative_violations": violations.len(),
                });
                if report.orbit_count != 1 || !violations.is_empty() {
                    return Ok(Outcome::fail(ev));
                }
                let neg: BTreeSet<usize> = negative
                    .iter()
                    .map(|[a, b]| g.edge_by_labels(a, b))
                    .collect::<Result<_>>()?;
                for k in g.edges_within(m).iter() {
                    state.kb.fix_edge(k, Z2::from_parity(neg.contains(&k)))?;
                }
                Ok(Outcome::pass(ev))
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn branch_elim(
        &self,
        state: &mut State,
        g: &Graph,
        k4: &Labels,
        branches: &[super::script::Branch],
        conclude: &[Fact],
        path: &str,
        acc: &mut Acc,
    ) -> Result<Outcome> {
        let tris = k4_triangles(g, k4)?;
        let opts = assignments(state, &tris);
        if opts.is_empty() {
            return Ok(Outcome::fail(
                json!({ "reason": "no assignment is consistent with the branch" }),
            ));
        }
        let mut log = Vec::new();
        for (bits, s) in &opts {
            let desc = describe_assignment(g, &tris, *bits);
            let one = |i: usize| bits >> i & 1 == 1;
            let mut chosen = None;
            for (bi, b) in branches.iter().enumerate() {
                let applies = match &b.when {
                    Condition::Triangle(l) => {
                        let c = cycle(g, l)?;
                        let i = tris.iter().position(|t| *t == c).ok_or_else(|| {
                            Error::Script(format!("{} is not a triangle of the K4", c.display(g)))
                        })?;
                        one(i)
                    }
                    Condition::AllZero => *bits == 0,
                    Condition::HasOne => *bits != 0,
                };
                if applies {
                    chosen = Some((bi, b));
                    break;
                }
            }
            match chosen {
                Some((bi, b)) => {
                    let cert = match self.build_cert(s, g, &tris, *bits, &b.certificate)? {
                        Ok(c) => c,
                        Err(reason) => {
                            return Ok(Outcome::fail(json!({
                                "assignment": desc,
                                "branch": bi,
                                "reason": reason,
                                "log": log,
                            })))
                        }
                    };
                    log.push(
                        json!({ "assignment": desc, "branch": bi, "certificate": cert.summary() }),
                    );
                    acc.certificate(&format!("{path}[{desc}]"), cert);
                }
                None => {
                    for f in conclude {
                        if s.fact_holds(f)? != Some(true) {
                            return Ok(Outcome::fail(json!({
                                "assignment": desc,
                                "reason": "no branch applies and the conclusion does not hold",
                                "fact": f,
                                "log": log,
                            })));
                        }
                    }
                    log.push(json!({ "assignment": desc, "conclusion": true }));
                }
            }
        }
        for f in conclude {
            state.add_fact(f)?;
        }
        Ok(Outcome::pass(
            json!({ "assignments": opts.len(), "log": log }),
        ))
    }

    /// Instantiates a certificate template in a branch; `Err(reason)` if it does not verify.
    fn build_cert(
        &self,
        s: &State,
        g: &Graph,
        tris: &[Cycle],
        bits: u32,
        spec: &CertSpec,
    ) -> Result<std::result::Result<Certificate, String>> {
        match spec {
            CertSpec::Triple(slots) => {
                let mut fixed = Vec::new();
                for slot in slots {
                    match slot {
                        CycleSlot::Cycle(l) => fixed.push(Some(cycle(g, l)?)),
                        CycleSlot::Placeholder(p) if p == K4_ONE => fixed.push(None),
                        CycleSlot::Placeholder(p) => {
                            return Err(Error::Script(format!("unknown placeholder `{p}`")))
                        }
                    }
                }
                let used = fixed
                    .iter()
                    .flatten()
                    .fold(0u64, |m, c| m | c.vertex_mask());
                let pick = tris
                    .iter()
                    .enumerate()
                    .find(|(i, t)| bits >> i & 1 == 1 && t.vertex_mask() & used == 0)
                    .map(|(_, t)| t.clone());
                let mut cs = Vec::new();
                for f in fixed {
                    match f.or_else(|| pick.clone()) {
                        Some(c) => cs.push(c),
                        None => {
                            return Ok(Err("no 1-homologous K4 triangle fits the triple".into()))
                        }
                    }
                }
                let cert = Certificate::DisjointOneTriple {
                    cycles: [
                        CycleRef::of(g, &cs[0]),
                        CycleRef::of(g, &cs[1]),
                        CycleRef::of(g, &cs[2]),
                    ],
                };
                Ok(verify_certificate(&s.kb, &cert)?
                    .map(|_| cert)
                    .map_err(|v| v.to_string()))
            }
            CertSpec::ComposeWithLink {
                k6,
                k4,
                witness,
                external,
            } => {
                let w = cycle(g, witness)?;
                let e = cycle(g, external)?;
                let Some(reason) = s.link_reason(&w, &e) else {
                    return Ok(Err(format!(
                        "no recorded link between {} and {}",
                        w.display(g),
                        e.display(g)
                    )));
                };
                let source = Certificate::ZeroHomK4InK6 {
                    k6: k6.clone(),
                    k4: k4.clone(),
                };
                Ok(compose_with_link(&s.kb, &source, &w, &e, reason)?.map_err(|v| v.to_string()))
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn case_split(
        &self,
        state: &mut State,
        g: &Arc<Graph>,
        snapshot: &Option<String>,
        domain: &Domain,
        cases: &[super::script::Case],
        path: &str,
        acc: &mut Acc,
    ) -> Result<Outcome> {
        let (name, expected) = domain_keys(g, domain)?;
        let declared: Vec<&str> = cases.iter().map(|c| c.case.as_str()).collect();
        let declared_set: BTreeSet<&str> = declared.iter().copied().collect();
        let expected_set: BTreeSet<&str> = expected.iter().map(String::as_str).collect();
        let missing: Vec<&str> = expected_set.difference(&declared_set).copied().collect();
        let extra: Vec<&str> = declared_set.difference(&expected_set).copied().collect();
        let duplicates = declared.len() - declared_set.len();
        let mut ev = json!({
            "domain": name,
            "domain_size": expected.len(),
            "declared": declared.len(),
        });
        if !missing.is_empty() || !extra.is_empty() || duplicates > 0 {
            ev["missing"] = json!(missing);
            ev["extra"] = json!(extra);
            ev["duplicates"] = json!(duplicates);
            return Ok(Outcome::fail(ev));
        }
        if cases.iter().filter(|c| c.continues).count() > 1 {
            return Err(Error::Script("at most one case may continue".into()));
        }
        if let Domain::OneHomMember { cycles } = domain {
            let rows: Vec<EdgeSet> = cycles_of(g, cycles)?
                .iter()
                .map(|c| *c.edge_set())
                .collect();
            if !state.has_at_least_over(&rows) {
                ev["reason"] = json!("no established fact that some member is 1-homologous");
                return Ok(Outcome::fail(ev));
            }
        }
        if let Domain::ConnectorSigns { vertices, over } = domain {
            for v in vertices {
                let f = Fact::Uniform {
                    vertex: v.clone(),
                    over: over.clone(),
                };
                if state.fact_holds(&f)? != Some(true) {
                    ev["reason"] = json!(format!("connectors at {v} are not known to be uniform"));
                    return Ok(Outcome::fail(ev));
                }
            }
        }
        if let Some(s) = snapshot {
            let snap = Arc::new(state.clone());
            state.snapshots.insert(s.clone(), snap);
        }
        let base: &State = state;
        let run_case =
            |(i, case): (usize, &super::script::Case)| -> Result<(CaseReport, State, Acc, Value)> {
                let mut st = base.clone();
                let mut sub = Acc::default();
                let case_path = format!("{path}/{}/", case.case);
                let mut info = Value::Null;
                let setup = apply_case(&mut st, g, domain, &case.case);
                let steps = match setup {
                    Ok(extra) => {
                        info = extra;
                        self.run_steps(&mut st, &case.steps, &case_path, &mut sub)?
                    }
                    Err(e) if is_malformed(&e) => return Err(e),
                    Err(e) => {
                        sub.failure
                            .get_or_insert(format!("case {path}/{}: {e}", case.case));
                        vec![]
                    }
                };
                let steps_ok = sub.failure.is_none() && steps.iter().all(|s| s.passed);
                let closed = st.closed;
                let passed = steps_ok && closed != case.continues;
                if steps_ok && !passed && sub.failure.is_none() {
                    sub.failure = Some(if case.continues {
                        format!("case {path}/{} closes but is marked to continue", case.case)
                    } else {
                        format!("case {path}/{} is not closed", case.case)
                    });
                }
                let _ = i;
                Ok((
                    CaseReport {
                        case: case.case.clone(),
                        passed,
                        closed,
                        continues: case.continues,
                        steps,
                    },
                    st,
                    sub,
                    info,
                ))
            };
        let results: Vec<(CaseReport, State, Acc, Value)> = cases
            .par_iter()
            .enumerate()
            .map(run_case)
            .collect::<Result<Vec<_>>>()?;
        let mut reports = Vec::new();
        let mut next = None;
        let mut infos = Vec::new();
        let mut closed = 0;
        for (rep, st, sub, info) in results {
            acc.merge(sub);
            if rep.closed {
                closed += 1;
            }
            if rep.continues {
                next = Some(st);
            }
            if !info.is_null() {
                infos.push(json!({ "case": rep.case, "setup": info }));
            }
            reports.push(rep);
        }
        let all_passed = reports.iter().all(|r| r.passed);
        acc.splits.push(SplitSummary {
            path: path.to_string(),
            domain: name,
            total: reports.len(),
            closed,
            continued: usize::from(next.is_some()),
        });
        ev["closed"] = json!(closed);
        if !infos.is_empty() {
            ev["case_setup"] = json!(infos);
        }
        let closes = next.is_none();
        if let Some(mut st) = next {
            st.closed = false;
            st.snapshots = state.snapshots.clone();
            *state = st;
        }
        Ok(Outcome {
            passed: all_passed,
            closes,
            evidence: ev,
            cases: reports,
        })
    }

    fn cycle_set(&self, g: &Graph, set: &CycleSet) -> Result<Vec<Cycle>> {
        match (&set.cycles, &set.triangles_within) {
            (Some(cs), None) => cycles_of(g, cs),
            (None, Some(spec)) => {
                let m = resolve_vertices(g, spec)?;
                let touch = match &set.touching {
                    Some(l) => mask_of(g, l)?,
                    None => 0,
                };
                Ok(triangles_within(g, m)
                    .into_iter()
                    .filter(|t| {
                        set.touching.is_none()
                            || (t.vertex_mask() & touch).count_ones() as usize >= set.min_touch
                    })
                    .collect())
            }
            _ => Err(Error::Script(
                "cycle set needs exactly one of `cycles` and `triangles_within`".into(),
            )),
        }
    }

    fn pigeonhole(
        &self,
        state: &mut State,
        g: &Graph,
        claim: &Claim,
        path: &str,
        acc: &mut Acc,
    ) -> Result<Outcome> {
        match claim {
            Claim::SplitOrCompose {
                within,
                separating: [u, v],
                witness,
                external,
                source_reason,
            } => {
                let m = mask_of(g, within)?;
                if !state.linked_within.contains(&m) {
                    return Ok(Outcome::fail(
                        json!({ "reason": "no established link inside the vertex set" }),
                    ));
                }
                let (w, e) = (cycle(g, witness)?, cycle(g, external)?);
                let Some(reason) = state.link_reason(&w, &e).map(str::to_string) else {
                    return Ok(Outcome::fail(
                        json!({ "reason": "witness and external cycle are not a recorded link" }),
                    ));
                };
                let (bu, bv) = (1u64 << g.vertex(u)?, 1u64 << g.vertex(v)?);
                let mut split = 0;
                let mut composed = 0;
                for (a, b) in disjoint_cycle_pairs(&triangles_within(g, m)) {
                    let (ma, mb) = (a.vertex_mask(), b.vertex_mask());
                    if (ma & bu != 0 && mb & bv != 0) || (ma & bv != 0 && mb & bu != 0) {
                        split += 1;
                        continue;
                    }
                    let source = Certificate::RecordedLink {
                        cycles: [CycleRef::of(g, &a), CycleRef::of(g, &b)],
                        reason: source_reason.clone(),
                    };
                    match compose_with_link(&state.kb, &source, &w, &e, &reason)? {
                        Ok(c) => {
                            composed += 1;
                            acc.certificate(
                                &format!("{path}[{} {}]", a.display(g), b.display(g)),
                                c,
                            );
                        }
                        Err(viol) => {
                            return Ok(Outcome::fail(json!({
                                "pair": refs(g, &[a, b]),
                                "violation": viol.to_string(),
                            })))
                        }
                    }
                }
                Ok(Outcome::pass(
                    json!({ "separating_pairs": split, "composed_pairs": composed }),
                ))
            }
            Claim::CrossCompose {
                a,
                b,
                witness,
                external,
            } => {
                let ta = k4_triangles(g, a)?;
                let tb = k4_triangles(g, b)?;
                for t in [&ta, &tb] {
                    let rows: Vec<EdgeSet> = t.iter().map(|c| *c.edge_set()).collect();
                    if !state.has_at_least_over(&rows) {
                        return Ok(Outcome::fail(
                            json!({ "reason": "no at-least fact over a K4's triangles" }),
                        ));
                    }
                }
                let (w, e) = (cycle(g, witness)?, cycle(g, external)?);
                let Some(reason) = state.link_reason(&w, &e).map(str::to_string) else {
                    return Ok(Outcome::fail(
                        json!({ "reason": "witness and external cycle are not a recorded link" }),
                    ));
                };
                let all: Vec<Cycle> = ta.iter().chain(&tb).cloned().collect();
                let opts = assignments(state, &all);
                let mut log = Vec::new();
                for (bits, s) in &opts {
                    let desc = describe_assignment(g, &all, *bits);
                    let mut done = None;
                    'outer: for (i, x) in ta.iter().enumerate() {
                        for (j, y) in tb.iter().enumerate() {
                            if bits >> i & 1 == 0 || bits >> (4 + j) & 1 == 0 {
                                continue;
                            }
                            let source = Certificate::DisjointOnePair {
                                cycles: [CycleRef::of(g, x), CycleRef::of(g, y)],
                            };
                            if let Ok(c) = compose_with_link(&s.kb, &source, &w, &e, &reason)? {
                                done = Some(c);
                                break 'outer;
                            }
                        }
                    }
                    match done {
                        Some(c) => {
                            log.push(json!({ "assignment": desc, "certificate": c.summary() }));
                            acc.certificate(&format!("{path}[{desc}]"), c);
                        }
                        None => {
                            return Ok(Outcome::fail(json!({ "assignment": desc, "log": log })))
                        }
                    }
                }
                Ok(Outcome::close(
                    json!({ "assignments": opts.len(), "log": log }),
                ))
            }
            Claim::DisjointParts { fixed, parts } => {
                let cs = cycles_of(g, fixed)?;
                let mut masks: Vec<u64> = cs.iter().map(Cycle::vertex_mask).collect();
                for c in &cs {
                    if state.kb.cycle_class(c) != Some(Z2::ONE) {
                        return Ok(Outcome::fail(
                            json!({ "not_one": c.display(g).to_string() }),
                        ));
                    }
                }
                let mut names = refs(g, &cs);
                for p in parts {
                    let m = resolve_vertices(g, p)?;
                    let rows: Vec<EdgeSet> = triangles_within(g, m)
                        .iter()
                        .map(|t| *t.edge_set())
                        .collect();
                    if !state.has_at_least_over(&rows) {
                        return Ok(Outcome::fail(
                            json!({ "no_one_hom_triangle": labels_of(g, m) }),
                        ));
                    }
                    masks.push(m);
                    names.push(labels_of(g, m));
                }
                let disjoint = masks.iter().tuple_combinations().all(|(x, y)| x & y == 0);
                let ev = json!({ "parts": names, "pairwise_disjoint": disjoint });
                Ok(if disjoint && masks.len() == 3 {
                    Outcome::close(ev)
                } else {
                    Outcome::fail(ev)
                })
            }
            Claim::LinkedPairCover {
                k6,
                k4,
                cover,
                count,
            } => {
                let m6 = mask_of(g, k6)?;
                let source = Certificate::ZeroHomK4InK6 {
                    k6: k6.clone(),
                    k4: k4.clone().unwrap_or_default(),
                };
                match k4 {
                    Some(_) => {
                        if let Err(v) = check_link_source(&state.kb, &source)? {
                            return Ok(Outcome::fail(json!({ "source": v.to_string() })));
                        }
                        acc.axioms.insert(AXIOM_ZERO_K4.into());
                    }
                    None if state.linked_within.contains(&m6) => {}
                    None => {
                        return Ok(Outcome::fail(
                            json!({ "reason": "K6 not known to be linked" }),
                        ))
                    }
                }
                let cm = mask_of(g, cover)?;
                let pairs = candidate_pairs(g, &source)?;
                let bad: Vec<Vec<String>> = pairs
                    .iter()
                    .filter(|(a, b)| {
                        [a, b]
                            .iter()
                            .all(|c| ((c.vertex_mask() & cm).count_ones() as usize) < *count)
                    })
                    .map(|(a, b)| refs(g, &[a.clone(), b.clone()]))
                    .collect();
                if !state.linked_within.contains(&m6) {
                    state.linked_within.push(m6);
                }
                let ev = json!({ "pairs": pairs.len(), "uncovered": bad });
                Ok(if bad.is_empty() {
                    Outcome::pass(ev)
                } else {
                    Outcome::fail(ev)
                })
            }
            Claim::K6ZeroPairForcesLink => {
                if g.vertex_count() != 6 || g.edge_count() != 15 {
                    return Err(Error::Script("claim needs a K6 script graph".into()));
                }
                acc.axioms.insert(AXIOM_ZERO_K4.into());
                let tris = enumerate_triangles(g);
                let pairs = disjoint_cycle_pairs(&tris);
                let (mut total, mut with_pair, mut by_pair, mut by_k4, mut bad) =
                    (0u64, 0u64, 0u64, 0u64, Vec::new());
                for s in enumerate_classes(state.kb.graph_arc().clone())? {
                    total += 1;
                    let zero_pair = pairs.iter().any(|(a, b)| {
                        !s.class_unchecked(a).is_one() && !s.class_unchecked(b).is_one()
                    });
                    if !zero_pair {
                        continue;
                    }
                    with_pair += 1;
                    if !disjoint_one_hom_pairs(&s, &tris).is_empty() {
                        by_pair += 1;
                    } else if !zero_hom_k4_links(&s).is_empty() {
                        by_k4 += 1;
                    } else {
                        bad.push(s.to_doc());
                    }
                }
                let ev = json!({
                    "classes": total,
                    "with_disjoint_zero_pair": with_pair,
                    "linked_by_one_hom_pair": by_pair,
                    "linked_by_zero_k4": by_k4,
                    "counterexamples": bad,
                });
                Ok(if bad.is_empty() {
                    Outcome::close(ev)
                } else {
                    Outcome::fail(ev)
                })
            }
            Claim::LinklessK6Classes {
                expect_orbits,
                oracle,
            } => {
                acc.axioms.insert(AXIOM_ZERO_K4.into());
                let report = if *oracle {
                    search_linkless_k6(true)?
                } else {
                    linkless_classification().clone()
                };
                let ok = report.orbit_count == *expect_orbits && report.contains_figure2;
                let ev = serde_json::to_value(&report)?;
                Ok(if ok {
                    Outcome::close(ev)
                } else {
                    Outcome::fail(ev)
                })
            }
        }
    }
}

/// `k` pairwise vertex-disjoint edges each joining a vertex of `c` only to a vertex of `t` only.
fn disjoint_connectors(g: &Graph, c: &Cycle, t: &Cycle, k: usize) -> bool {
    let (mc, mt) = (c.vertex_mask(), t.vertex_mask());
    let only_c: Vec<usize> = c
        .vertices()
        .iter()
        .copied()
        .filter(|v| mt >> v & 1 == 0)
        .collect();
    let only_t: Vec<usize> = t
        .vertices()
        .iter()
        .copied()
        .filter(|v| mc >> v & 1 == 0)
        .collect();
    let edges: Vec<(usize, usize)> = only_c
        .iter()
        .flat_map(|&x| {
            only_t
                .iter()
                .filter(move |&&y| g.adjacent(x, y))
                .map(move |&y| (x, y))
        })
        .collect();
    edges.iter().combinations(k).any(|es| {
        let ends = es.iter().fold(0u64, |m, (x, y)| m | 1 << x | 1 << y);
        ends.count_ones() as usize == 2 * k
    })
}

fn domain_keys(g: &Graph, domain: &Domain) -> Result<(String, Vec<String>)> {
    Ok(match domain {
        Domain::SubgraphHomology { subgraphs } => {
            let n = subgraphs.len();
            let keys = (0..1u32 << n)
                .map(|bits| {
                    (0..n)
                        .map(|i| (bits >> (n - 1 - i) & 1).to_string())
                        .join(",")
                })
                .collect();
            ("subgraph_homology".into(), keys)
        }
        Domain::VertexUniform { .. } => (
            "vertex_uniform".into(),
            vec!["uniform".into(), "mixed".into()],
        ),
        Domain::ConnectorSigns { vertices, .. } => {
            let n = vertices.len();
            let keys = (0..1u32 << n)
                .map(|bits| {
                    vertices
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            format!(
                                "{v}{}",
                                if bits >> (n - 1 - i) & 1 == 1 {
                                    '-'
                                } else {
                                    '+'
                                }
                            )
                        })
                        .join(",")
                })
                .collect();
            ("connector_signs".into(), keys)
        }
        Domain::OneHomMember { cycles } => (
            "one_hom_member".into(),
            cycles_of(g, cycles)?
                .iter()
                .map(|c| CycleRef::of(g, c).to_string())
                .collect(),
        ),
    })
}

fn apply_case(state: &mut State, g: &Graph, domain: &Domain, key: &str) -> Result<Value> {
    match domain {
        Domain::SubgraphHomology { subgraphs } => {
            for (spec, bit) in subgraphs.iter().zip(key.split(',')) {
                let f = if bit == "0" {
                    Fact::Zero {
                        vertices: spec.clone(),
                    }
                } else {
                    Fact::HasOne {
                        vertices: spec.clone(),
                    }
                };
                state.add_fact(&f)?;
            }
            Ok(Value::Null)
        }
        Domain::VertexUniform { vertex, over } => {
            if key == "uniform" {
                state.add_fact(&Fact::Uniform {
                    vertex: vertex.clone(),
                    over: over.clone(),
                })?;
            } else {
                state.at_least.push(mixed_rows(g, vertex, over)?);
            }
            Ok(Value::Null)
        }
        Domain::ConnectorSigns { vertices, over } => {
            for (v, part) in vertices.iter().zip(key.split(',')) {
                let sign = if part.ends_with('-') {
                    Sign::Minus
                } else {
                    Sign::Plus
                };
                state.add_fact(&Fact::Edge {
                    edge: [v.clone(), over[0].clone()],
                    sign,
                })?;
            }
            Ok(json!({ "homology_determined": state.kb.homology_determined() }))
        }
        Domain::OneHomMember { cycles } => {
            let c = cycles_of(g, cycles)?
                .into_iter()
                .find(|c| CycleRef::of(g, c).to_string() == key)
                .expect("key validated against the domain");
            state.kb.fix_cycle(&c, Z2::ONE)?;
            Ok(Value::Null)
        }
    }
}

/// Runs a script step by step.
pub fn replay(script: &ProofScript) -> Result<ReplayReport> {
    replay_with(script, &ReplayOptions::default())
}

pub fn replay_with(script: &ProofScript, options: &ReplayOptions) -> Result<ReplayReport> {
    match options.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Structure(e.to_string()))?
            .install(|| run(script)),
        None => run(script),
    }
}

fn run(script: &ProofScript) -> Result<ReplayReport> {
    let start = Instant::now();
    let graph = Arc::new(build_construction(&script.graph)?);
    let mut state = State::new(graph);
    let mut acc = Acc::default();
    let engine = Engine { script };
    let steps = engine.run_steps(&mut state, &script.steps, "", &mut acc)?;
    if acc.failure.is_none() && !state.closed {
        acc.failure = Some("script ends with an open branch".into());
    }
    let declared: BTreeSet<String> = script.axioms.iter().cloned().collect();
    if acc.failure.is_none() && declared != acc.axioms {
        acc.failure = Some(format!(
            "axioms used [{}] differ from declared [{}]",
            acc.axioms.iter().join(", "),
            declared.iter().join(", ")
        ));
    }
    Ok(ReplayReport {
        script: script.id.clone(),
        statement: script.statement.clone(),
        graph: script.graph.clone(),
        passed: acc.failure.is_none(),
        failure: acc.failure,
        steps,
        certificates: acc.certificates,
        tables: acc.tables,
        case_splits: acc.splits,
        declared_axioms: script.axioms.clone(),
        axioms_used: acc.axioms.into_iter().collect(),
        notes: script.notes.clone(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
