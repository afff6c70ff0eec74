use std::sync::Arc;

use proptest::prelude::*;
use rp3link::certificates::*;
use rp3link::graphs::{
    build_construction, complete_graph, enumerate_cycles, enumerate_triangles, Cycle, EdgeSet,
    Graph,
};
use rp3link::homology::{figure2_signing, EdgeSigning, Modulo, FIGURE2_NEGATIVE};

fn k(n: usize) -> Arc<Graph> {
    Arc::new(complete_graph::<&str>(n, None).unwrap())
}

fn cyc(g: &Graph, l: &[&str]) -> Cycle {
    Cycle::from_labels(g, l).unwrap()
}

fn cref(l: &[&str]) -> CycleRef {
    CycleRef(l.iter().map(|s| s.to_string()).collect())
}

/// K10 with the linkless K6 signing on 1..6 plus extra `-` edges.
fn k10_with(extra: &[(&str, &str)]) -> EdgeSigning {
    let mut neg: Vec<(&str, &str)> = FIGURE2_NEGATIVE.to_vec();
    neg.extend_from_slice(extra);
    EdgeSigning::from_negative_labels(k(10), &neg).unwrap()
}

/// K10 with K4 {7..10} all `+` and vertex i's four connector edges signed by `signs[i-1]`.
fn connector_case(signs: [bool; 6]) -> EdgeSigning {
    let mut extra = Vec::new();
    let labels = ["1", "2", "3", "4", "5", "6"];
    for (i, &neg) in signs.iter().enumerate() {
        if neg {
            for t in ["7", "8", "9", "10"] {
                extra.push((labels[i], t));
            }
        }
    }
    k10_with(&extra)
}

#[test]
fn disjoint_pairs_examples() {
    let f = figure2_signing();
    assert!(disjoint_one_hom_pairs(&f, &enumerate_triangles(f.graph())).is_empty());

    let s = EdgeSigning::from_negative_labels(k(6), &[("1", "2"), ("4", "5")]).unwrap();
    let pairs = disjoint_one_hom_pairs(&s, &enumerate_triangles(s.graph()));
    assert!(pairs.contains(&Certificate::DisjointOnePair {
        cycles: [cref(&["1", "2", "3"]), cref(&["4", "5", "6"])]
    }));

    let plus = EdgeSigning::all_plus(k(6));
    assert!(disjoint_one_hom_pairs(&plus, &enumerate_triangles(plus.graph())).is_empty());
}

#[test]
fn disjoint_triples_examples() {
    let s = connector_case([false; 6]);
    let triples = disjoint_one_hom_triples(&s, &enumerate_triangles(s.graph()));
    assert!(triples.contains(&Certificate::DisjointOneTriple {
        cycles: [
            cref(&["1", "4", "7"]),
            cref(&["2", "5", "8"]),
            cref(&["3", "6", "9"])
        ]
    }));

    let plus = EdgeSigning::all_plus(k(10));
    assert!(disjoint_one_hom_triples(&plus, &enumerate_triangles(plus.graph())).is_empty());

    let g = Arc::new(build_construction("union:k3,k3,k3").unwrap());
    let s = EdgeSigning::from_negative_labels(g, &[("1:1", "1:2"), ("2:1", "2:3"), ("3:2", "3:3")])
        .unwrap();
    assert_eq!(
        disjoint_one_hom_triples(&s, &enumerate_triangles(s.graph())).len(),
        1
    );
}

#[test]
fn zero_hom_k4_examples() {
    assert_eq!(zero_hom_k4_links(&EdgeSigning::all_plus(k(6))).len(), 15);
    assert!(zero_hom_k4_links(&figure2_signing()).is_empty());

    // K4 {7..10} with (7,8,9) = 1; connectors at 10 chosen so that inside
    // {1,2,4,5,6,10} only G[4,5,6,10] is all 0.
    let s = k10_with(&[("7", "8"), ("1", "10"), ("2", "10")]);
    let sub = s
        .graph()
        .induced_subgraph(&["1", "2", "4", "5", "6", "10"])
        .unwrap();
    let restricted = EdgeSigning::from_negative(
        Arc::new(sub.graph.clone()),
        EdgeSet::from_indices(
            sub.edge_map
                .iter()
                .enumerate()
                .filter(|(_, &old)| s.negative_edges().contains(old))
                .map(|(new, _)| new),
        ),
    )
    .unwrap();
    assert_eq!(
        zero_hom_k4_links(&restricted),
        vec![Certificate::ZeroHomK4InK6 {
            k6: ["1", "2", "4", "5", "6", "10"].map(String::from).to_vec(),
            k4: ["4", "5", "6", "10"].map(String::from).to_vec(),
        }]
    );
}

fn table1_entries(g: &Graph) -> Vec<WitnessEntry> {
    let rows: [([&str; 3], [&str; 3], [&str; 3]); 10] = [
        (["1", "2", "4"], ["5", "6", "10"], ["1", "2", "3"]),
        (["1", "2", "5"], ["4", "6", "10"], ["1", "2", "3"]),
        (["1", "2", "6"], ["4", "5", "10"], ["1", "2", "3"]),
        (["1", "2", "10"], ["4", "5", "6"], ["1", "2", "3"]),
        (["1", "4", "5"], ["2", "6", "10"], ["1", "3", "5"]),
        (["1", "4", "6"], ["2", "5", "10"], ["1", "4", "6"]),
        (["1", "4", "10"], ["2", "5", "6"], ["2", "5", "6"]),
        (["1", "5", "6"], ["2", "4", "10"], ["1", "3", "5"]),
        (["1", "5", "10"], ["2", "4", "6"], ["1", "3", "5"]),
        (["1", "6", "10"], ["2", "4", "5"], ["2", "4", "5"]),
    ];
    rows.iter()
        .map(|(a, b, w)| WitnessEntry {
            pair: (cyc(g, a), cyc(g, b)),
            witness: cyc(g, w),
        })
        .collect()
}

fn k6_source(k6: &[&str], k4: &[&str]) -> Certificate {
    Certificate::ZeroHomK4InK6 {
        k6: k6.iter().map(|s| s.to_string()).collect(),
        k4: k4.iter().map(|s| s.to_string()).collect(),
    }
}

#[test]
fn ll_compose_table1() {
    let s = k10_with(&[("7", "8"), ("1", "10"), ("2", "10")]);
    let g = s.graph();
    let source = k6_source(&["1", "2", "4", "5", "6", "10"], &["4", "5", "6", "10"]);
    let cert = ll_compose(&s, &source, &cyc(g, &["7", "8", "9"]), &table1_entries(g))
        .unwrap()
        .unwrap();
    let Certificate::LlComposition { rows, .. } = &cert else {
        panic!("expected a composition, got {cert:?}");
    };
    assert_eq!(rows.len(), 10);
    assert_eq!(
        rows[0].linked,
        [cref(&["1", "2", "4"]), cref(&["5", "6", "10"])]
    );
    assert_eq!(rows[0].form, RowForm::LlComposition);
    assert_eq!(rows[5].form, RowForm::ThreeChain);
    assert_eq!(rows[6].linked[0], cref(&["2", "5", "6"]));
    assert_eq!(verify_certificate(&s, &cert).unwrap(), Ok(()));
}

#[test]
fn ll_compose_rejects_partner_witness() {
    let s = k10_with(&[("7", "8"), ("1", "10"), ("2", "10")]);
    let g = s.graph();
    let source = k6_source(&["1", "2", "4", "5", "6", "10"], &["4", "5", "6", "10"]);
    let mut entries = table1_entries(g);
    entries[0].witness = cyc(g, &["5", "6", "10"]);
    let v = ll_compose(&s, &source, &cyc(g, &["7", "8", "9"]), &entries)
        .unwrap()
        .unwrap_err();
    assert!(v.cycles.contains(&cref(&["5", "6", "10"])));

    entries.pop();
    let v = ll_compose(
        &s,
        &source,
        &cyc(g, &["7", "8", "9"]),
        &table1_entries(g)[..9],
    )
    .unwrap()
    .unwrap_err();
    assert_eq!(v.rule, "missing-witness");
}

#[test]
fn ll_compose_three_chain() {
    let s =
        EdgeSigning::from_negative_labels(k(10), &[("1", "4"), ("8", "9"), ("5", "6")]).unwrap();
    let g = s.graph();
    let source = Certificate::DisjointOnePair {
        cycles: [cref(&["1", "4", "7"]), cref(&["8", "9", "10"])],
    };
    let w = cyc(g, &["1", "4", "7"]);
    let entries = [WitnessEntry {
        pair: (w.clone(), cyc(g, &["8", "9", "10"])),
        witness: w,
    }];
    let cert = ll_compose(&s, &source, &cyc(g, &["3", "5", "6"]), &entries)
        .unwrap()
        .unwrap();
    assert_eq!(cert.kind(), CertificateKind::ThreeChain);
    assert_eq!(verify_certificate(&s, &cert).unwrap(), Ok(()));
}

#[test]
fn ll_compose_foreign_cycle_is_an_error() {
    let s = k10_with(&[]);
    let other = build_construction("k11").unwrap();
    let source = k6_source(&["1", "2", "4", "5", "6", "10"], &["4", "5", "6", "10"]);
    assert!(ll_compose(&s, &source, &cyc(&other, &["7", "8", "9"]), &[]).is_err());
}

#[test]
fn first_hit_all_plus_connectors() {
    let cert = find_triple_link_certificate(&connector_case([false; 6]), 3)
        .unwrap()
        .unwrap();
    assert_eq!(cert.kind(), CertificateKind::DisjointOneTriple);
}

#[test]
fn table4_case_has_a_triangle_triple() {
    // v1+, v2-, v3+, v4+, v5+, v6-: triples are tried before compositions
    let s = connector_case([false, true, false, false, false, true]);
    let cert = find_triple_link_certificate(&s, 3).unwrap().unwrap();
    assert_eq!(
        cert,
        Certificate::DisjointOneTriple {
            cycles: [
                cref(&["1", "3", "7"]),
                cref(&["2", "4", "8"]),
                cref(&["5", "6", "9"])
            ]
        }
    );
}

#[test]
fn first_hit_uses_k6_source_when_no_triple() {
    // v1- and every other vertex +
    let s = connector_case([true, false, false, false, false, false]);
    assert!(disjoint_one_hom_triples(&s, &enumerate_cycles(s.graph(), 3)).is_empty());
    let cert = find_triple_link_certificate(&s, 3).unwrap().unwrap();
    assert_eq!(cert.kind(), CertificateKind::LlComposition);
    assert_eq!(
        cert.link_source().unwrap(),
        &k6_source(&["1", "2", "4", "7", "8", "9"], &["1", "2", "4", "7"])
    );
    assert_eq!(verify_certificate(&s, &cert).unwrap(), Ok(()));
}

#[test]
fn all_plus_k9_is_silent() {
    let s = EdgeSigning::all_plus(k(9));
    assert_eq!(find_triple_link_certificate(&s, 4).unwrap(), None);
    assert_eq!(classify(&s, 4).unwrap(), Verdict::Silent);
}

#[test]
fn certificate_free_classes_exist() {
    for d in ["k6-c6-k6", "k7-e-k7"] {
        let g = Arc::new(build_construction(d).unwrap());
        let hit = search_certificate_free(g, 7).unwrap().expect(d);
        assert_eq!(classify(&hit.signing, 7).unwrap(), Verdict::Silent, "{d}");
    }
}

#[test]
fn union_of_all_plus_k10s_is_axiom_dependent() {
    let g = Arc::new(build_construction("union:k10,k10,k10").unwrap());
    let v = classify(&EdgeSigning::all_plus(g.clone()), 3).unwrap();
    assert!(matches!(v, Verdict::AxiomDependent { ref axiom, .. } if axiom == SPATIAL_AXIOM));
    assert!(matches!(
        search_certificate_free(g, 3),
        Err(rp3link::Error::Budget(_))
    ));
}

#[test]
fn certificate_json_round_trip() {
    let s = connector_case([true, false, false, false, false, false]);
    let cert = find_triple_link_certificate(&s, 3).unwrap().unwrap();
    let json = serde_json::to_string(&cert).unwrap();
    assert!(json.contains("\"rule\":\"ll_composition\""));
    let back: Certificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
}

#[test]
fn linkless_k6_exhaustive_facts() {
    let classes = search_linkless_k6(false).unwrap();
    let oracle = search_linkless_k6(true).unwrap();
    assert_eq!(classes.signings_checked, 1024);
    assert_eq!(oracle.signings_checked, 1 << 15);
    assert_eq!(classes.orbit_count, 1);
    assert!(classes.contains_figure2);
    assert_eq!(classes.one_hom_triangle_counts, vec![10]);
    assert!(classes.one_per_disjoint_pair);
    assert_eq!(classes.passing_classes, oracle.passing_classes);
    assert_eq!(classes.orbit_representatives, oracle.orbit_representatives);
}

#[test]
fn passing_set_is_closed_under_automorphisms() {
    let g = k(6);
    let group = rp3link::graphs::automorphisms(&g).unwrap();
    let report = search_linkless_k6(false).unwrap();
    for class in &report.passing_classes {
        let pairs: Vec<(&str, &str)> = class
            .iter()
            .map(|[a, b]| (a.as_str(), b.as_str()))
            .collect();
        let s = EdgeSigning::from_negative_labels(g.clone(), &pairs).unwrap();
        for p in group.iter().step_by(37) {
            assert!(linkless_k6_check(&s.permuted(p)).unwrap().is_empty());
        }
        assert_eq!(
            s.canonical(Modulo::SwitchingAndAutomorphism).unwrap(),
            figure2_signing()
                .canonical(Modulo::SwitchingAndAutomorphism)
                .unwrap()
        );
    }
}

fn signing_strategy(n: usize) -> impl Strategy<Value = EdgeSigning> {
    let m = n * (n - 1) / 2;
    proptest::collection::vec(any::<bool>(), m).prop_map(move |bits| {
        EdgeSigning::from_negative(k(n), EdgeSet::from_indices((0..m).filter(|&i| bits[i])))
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rules_are_switching_invariant(s in signing_strategy(9), switches in proptest::collection::vec(0usize..9, 1..5)) {
        let mut t = s.clone();
        for v in switches {
            t = t.switch_index(v);
        }
        let search = CertificateSearch::new(s.graph_arc().clone(), 4).unwrap();
        prop_assert_eq!(search.find(&s), search.find(&t));
        prop_assert_eq!(zero_hom_k4_links(&s), zero_hom_k4_links(&t));
    }

    #[test]
    fn found_certificates_verify(s in signing_strategy(10)) {
        let search = CertificateSearch::new(s.graph_arc().clone(), 3).unwrap();
        if let Some(cert) = search.find(&s) {
            prop_assert!(cert.is_triple_link());
            prop_assert_eq!(verify_certificate(&s, &cert).unwrap(), Ok(()));
        }
    }

    #[test]
    fn more_cycles_never_lose_certificates(s in signing_strategy(9), cut in 1usize..200) {
        let all = enumerate_cycles(s.graph(), 4);
        let fewer = &all[..cut.min(all.len())];
        let small = disjoint_one_hom_triples(&s, fewer);
        let large = disjoint_one_hom_triples(&s, &all);
        prop_assert!(small.iter().all(|c| large.contains(c)));
        let small = disjoint_one_hom_pairs(&s, fewer);
        let large = disjoint_one_hom_pairs(&s, &all);
        prop_assert!(small.iter().all(|c| large.contains(c)));
    }
}
