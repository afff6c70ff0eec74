//! Acceptance suite. Prints one line per criterion; run with `--nocapture` to see them.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rp3link::certificates::{
    classify, find_triple_link_certificate, search_certificate_free, search_linkless_k6, Verdict,
};
use rp3link::graphs::{
    build_construction, complete_graph, enumerate_cycles, enumerate_triangles, triangle_orbits,
    Cycle,
};
use rp3link::homology::{
    figure2_signing, verify_k4_parity, verify_switching_invariance, EdgeSigning, Z2,
};
use rp3link::replay::*;

const SEED: u64 = 20240611;

struct Line {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

impl Line {
    fn ok(&self) -> bool {
        self.passed && self.elapsed <= self.budget
    }
}

fn check(id: u32, name: &'static str, budget_s: u64, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (passed, detail) = f();
    let line = Line {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget_s),
    };
    println!(
        "[{}] {:>2} {:<34} {} ({} ms, budget {} s)",
        if line.ok() { "PASS" } else { "FAIL" },
        line.id,
        line.name,
        line.detail,
        line.elapsed.as_millis(),
        budget_s
    );
    line
}

fn c1() -> (bool, String) {
    let r = verify_k4_parity(SEED, 10_000).unwrap();
    let odd = r.counts[1] + r.counts[3];
    (
        r.passed() && odd == 0 && r.exhaustive == 64 && r.samples == 10_000,
        format!(
            "{} exhaustive + {} sampled, {} odd",
            r.exhaustive, r.samples, odd
        ),
    )
}

fn c2() -> (bool, String) {
    let r = verify_switching_invariance(SEED, 1_000).unwrap();
    (
        r.passed() && r.samples == 1_000,
        format!("{} samples, {} failures", r.samples, r.failures),
    )
}

/// Figure-2 signing checked directly: 10 one-homologous triangles, one in each
/// of the 10 disjoint pairs.
fn figure2_profile() -> bool {
    let s = figure2_signing();
    let t = enumerate_triangles(s.graph());
    let ones = t.iter().filter(|c| s.class_unchecked(c) == Z2::ONE).count();
    let mut pairs = 0;
    for (i, a) in t.iter().enumerate() {
        for b in &t[i + 1..] {
            if a.is_disjoint(b) {
                pairs += 1;
                if (s.class_unchecked(a) == Z2::ONE) == (s.class_unchecked(b) == Z2::ONE) {
                    return false;
                }
            }
        }
    }
    ones == 10 && pairs == 10
}

fn c3() -> (bool, String) {
    let r = search_linkless_k6(false).unwrap();
    let ok = r.signings_checked == 1024
        && !r.passing_classes.is_empty()
        && r.orbit_count == 1
        && r.contains_figure2
        && r.one_hom_triangle_counts == [10]
        && r.one_per_disjoint_pair
        && figure2_profile();
    (
        ok,
        format!(
            "{} classes pass, {} orbit",
            r.passing_classes.len(),
            r.orbit_count
        ),
    )
}

fn c3_oracle() -> (bool, String) {
    let classes = search_linkless_k6(false).unwrap();
    let raw = search_linkless_k6(true).unwrap();
    let ok = raw.signings_checked == 1 << 15
        && raw.orbit_count == classes.orbit_count
        && raw.contains_figure2
        && raw.one_hom_triangle_counts == classes.one_hom_triangle_counts
        && raw.orbit_representatives == classes.orbit_representatives;
    (
        ok,
        format!(
            "{} raw signings, {} orbit",
            raw.signings_checked, raw.orbit_count
        ),
    )
}

fn thm8() -> ReplayReport {
    replay(&builtin_script("thm8").unwrap()).unwrap()
}

/// Documented red state: rows 3 and 4 of Table 4 have a 0-homologous witness
/// (1, 2, 7) in the only case that uses Table 4.
const TABLE_ROWS_EXPECTED_RED: usize = 68;

fn c4() -> (bool, String) {
    let r = thm8();
    let rows: usize = r.tables.iter().map(|t| t.report.rows.len()).sum();
    let passed: usize = r.tables.iter().map(|t| t.report.rows_passed).sum();
    let failed: Vec<String> = r
        .tables
        .iter()
        .flat_map(|t| {
            t.report
                .failed_rows()
                .into_iter()
                .map(move |row| format!("T{} r{}", t.report.table, row))
        })
        .collect();
    (
        rows == 70 && passed == 70,
        format!(
            "{passed}/{rows} rows pass; failing: [{}]",
            failed.join(", ")
        ),
    )
}

fn c5(r: &ReplayReport) -> (bool, String) {
    let split = r.main_split().unwrap();
    let ok =
        r.passed && split.total == 64 && split.closed == 64 && r.axioms_used == r.declared_axioms;
    (ok, r.case_line().unwrap_or_default())
}

fn c6() -> (bool, String) {
    let r = replay(&builtin_script("prop5").unwrap()).unwrap();
    let kinds = |k: &str| r.steps.iter().filter(|s| s.step == k && s.passed).count();
    let ok = r.passed && kinds("WLOG_ORBIT") == 2 && kinds("BRANCH_ELIM") == 2;
    (ok, format!("passed: {}, {} steps", r.passed, r.steps.len()))
}

fn c7() -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    let sets: [(&str, usize, &[[&str; 3]]); 2] = [
        (
            "k6-c6-k6",
            5,
            &[
                ["1", "2", "3"],
                ["1", "2", "4"],
                ["1", "4", "5"],
                ["4", "5", "6"],
                ["4", "5", "A"],
            ],
        ),
        (
            "k7-e-k7",
            3,
            &[["1", "2", "3"], ["1", "2", "7"], ["1", "6", "7"]],
        ),
    ];
    for (desc, n, reps) in sets {
        let g = build_construction(desc).unwrap();
        let orbits = triangle_orbits(&g).unwrap();
        // Each listed triangle lies in a different orbit, so together they cover all of them.
        let mut hit: Vec<usize> = reps
            .iter()
            .map(|r| {
                let c = Cycle::from_labels(&g, r).unwrap();
                orbits.iter().position(|o| o.members.contains(&c)).unwrap()
            })
            .collect();
        hit.sort();
        hit.dedup();
        let total: usize = orbits.iter().map(|o| o.members.len()).sum();
        ok &= orbits.len() == n && hit.len() == n && total == enumerate_triangles(&g).len();
        detail.push(format!("{desc}: {}", orbits.len()));
    }
    (ok, detail.join(", "))
}

/// The silent class is rechecked by brute force: no three pairwise disjoint
/// 1-homologous triangles and no two disjoint 1-homologous cycles of length <= 4.
fn c8() -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for desc in ["k6-c6-k6", "k7-e-k7"] {
        let g = Arc::new(build_construction(desc).unwrap());
        let Some(hit) = search_certificate_free(g.clone(), 3).unwrap() else {
            ok = false;
            detail.push(format!("{desc}: none"));
            continue;
        };
        let s = &hit.signing;
        let ones: Vec<Cycle> = enumerate_cycles(&g, 4)
            .into_iter()
            .filter(|c| s.class_unchecked(c) == Z2::ONE)
            .collect();
        let pair = ones
            .iter()
            .enumerate()
            .any(|(i, a)| ones[i + 1..].iter().any(|b| a.is_disjoint(b)));
        let tri: Vec<&Cycle> = ones.iter().filter(|c| c.len() == 3).collect();
        let mut triple = false;
        for (i, a) in tri.iter().enumerate() {
            for (j, b) in tri.iter().enumerate().skip(i + 1) {
                for c in &tri[j + 1..] {
                    triple |= a.is_disjoint(b) && a.is_disjoint(c) && b.is_disjoint(c);
                }
            }
        }
        let silent = matches!(classify(s, 3).unwrap(), Verdict::Silent);
        ok &= silent && !ones.is_empty() && !pair && !triple;
        detail.push(format!("{desc}: class #{}", hit.class_index));
    }
    (ok, detail.join(", "))
}

fn c9() -> (bool, String) {
    let mut ok = true;
    for n in [9, 10] {
        let s = EdgeSigning::all_plus(Arc::new(complete_graph::<&str>(n, None).unwrap()));
        ok &= find_triple_link_certificate(&s, 3).unwrap().is_none();
        let v = classify(&s, 3).unwrap();
        // Only K10 has a spatial triple-link axiom to fall back on.
        ok &= if n == 10 {
            matches!(v, Verdict::AxiomDependent { .. })
        } else {
            matches!(v, Verdict::Silent)
        };
    }
    (
        ok,
        "all-+ K9: not found; all-+ K10: not found, axiom-dependent".into(),
    )
}

#[test]
fn acceptance() {
    let lines = [
        check(1, "K4 triangle parity", 1, c1),
        check(2, "switching invariance", 1, c2),
        check(3, "linkless K6 classification", 5, c3),
        check(3, "linkless K6 raw-signing oracle", 30, c3_oracle),
        check(4, "table replay", 5, c4),
        check(5, "thm8 replay", 30, || c5(&thm8())),
        check(6, "prop5 replay", 30, c6),
        check(7, "triangle orbit counts", 10, c7),
        check(8, "certificate-free searches", 60, c8),
        check(9, "negative controls", 5, c9),
    ];
    let red: Vec<u32> = lines.iter().filter(|l| !l.ok()).map(|l| l.id).collect();
    // Criterion 4 is red by a genuine defect in Table 4; pin that exact state.
    assert_eq!(red, [4], "unexpected criteria failing");
    let r = thm8();
    let passed: usize = r.tables.iter().map(|t| t.report.rows_passed).sum();
    assert_eq!(passed, TABLE_ROWS_EXPECTED_RED);
    let t4 = r.tables.iter().find(|t| t.report.table == 4).unwrap();
    assert_eq!(t4.report.failed_rows(), [3, 4]);
}

#[test]
#[ignore = "visits 2^26 classes; run explicitly"]
fn acceptance_full_quotient_sweep() {
    let opts = |workers| SweepOptions {
        mode: SweepMode::FullQuotient,
        workers,
        acknowledge_long_run: true,
        ..Default::default()
    };
    let line = check(10, "full quotient sweep", 4 * 3600, || {
        let r = sweep_k10(&opts(None)).unwrap();
        (
            r.total == FULL_QUOTIENT_CLASSES && r.silent_count == 0,
            format!("{} classes, {} silent", r.total, r.silent_count),
        )
    });
    assert!(line.ok());
    let a = sweep_k10(&SweepOptions {
        limit: Some(1 << 16),
        ..opts(Some(1))
    })
    .unwrap();
    let b = sweep_k10(&SweepOptions {
        limit: Some(1 << 16),
        ..opts(Some(8))
    })
    .unwrap();
    assert_eq!(a.normalized(), b.normalized());
}
