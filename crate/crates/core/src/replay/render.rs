use std::fmt::Write;

use super::engine::{ReplayReport, StepReport};
use super::sweep::SweepReport;
use super::table::TableReport;

fn mark(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

impl ReplayReport {
    /// `cases: closed/total certified` for the largest case split.
    pub fn case_line(&self) -> Option<String> {
        self.main_split()
            .map(|s| format!("cases: {}/{} certified", s.closed, s.total))
    }
}

pub fn table_markdown(t: &TableReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "### Table {} ({}/{} rows)\n\nK6 [{}], all-0 K4 [{}], external {}\n",
        t.table,
        t.rows_passed,
        t.rows.len(),
        t.k6.join(", "),
        t.k4.join(", "),
        t.external
    );
    for v in &t.table_failures {
        let _ = writeln!(out, "- table: {v}");
    }
    out.push_str("| row | pair | witness | result | detail |\n|---|---|---|---|---|\n");
    for r in &t.rows {
        let detail = match (&r.failure, r.form) {
            (Some(v), _) => v.to_string(),
            (None, Some(f)) => format!("{f:?}"),
            _ => String::new(),
        };
        let _ = writeln!(
            out,
            "| {} | {} {} | {} | {} | {} |",
            r.row,
            r.pair[0],
            r.pair[1],
            r.witness,
            mark(r.passed),
            detail
        );
    }
    out
}

fn steps_markdown(out: &mut String, steps: &[StepReport], depth: usize) {
    let pad = "  ".repeat(depth);
    for s in steps {
        let label = s
            .label
            .as_deref()
            .map(|l| format!(" {l}"))
            .unwrap_or_default();
        let closes = if s.closes { " (closes)" } else { "" };
        let _ = writeln!(
            out,
            "{pad}- `{}` {}{label}: {}{closes}",
            s.path,
            s.step,
            mark(s.passed)
        );
        if let Some(e) = &s.error {
            let _ = writeln!(out, "{pad}  - error: {e}");
        } else if !s.passed {
            let _ = writeln!(out, "{pad}  - evidence: `{}`", s.evidence);
        }
        for c in &s.cases {
            let state = if c.continues {
                "continues"
            } else if c.closed {
                "closed"
            } else {
                "open"
            };
            let _ = writeln!(
                out,
                "{pad}  - case `{}`: {} ({state})",
                c.case,
                mark(c.passed)
            );
            steps_markdown(out, &c.steps, depth + 2);
        }
    }
}

pub fn replay_markdown(r: &ReplayReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Replay `{}`: {}\n", r.script, mark(r.passed));
    let _ = writeln!(
        out,
        "{}\n\ngraph `{}`, {} ms\n",
        r.statement, r.graph, r.elapsed_ms
    );
    if let Some(f) = &r.failure {
        let _ = writeln!(out, "first failure: {f}\n");
    }
    if let Some(line) = r.case_line() {
        let _ = writeln!(out, "{line}\n");
    }
    let _ = writeln!(out, "axioms used: {}", r.axioms_used.join(", "));
    let _ = writeln!(out, "axioms declared: {}\n", r.declared_axioms.join(", "));
    if !r.case_splits.is_empty() {
        out.push_str("## Case splits\n\n| path | domain | cases | closed | continued |\n|---|---|---|---|---|\n");
        for s in &r.case_splits {
            let _ = writeln!(
                out,
                "| `{}` | {} | {} | {} | {} |",
                s.path, s.domain, s.total, s.closed, s.continued
            );
        }
        out.push('\n');
    }
    out.push_str("## Steps\n\n");
    steps_markdown(&mut out, &r.steps, 0);
    if !r.tables.is_empty() {
        out.push_str("\n## Tables\n\n");
        for t in &r.tables {
            let _ = writeln!(out, "at `{}`\n", t.path);
            out.push_str(&table_markdown(&t.report));
            out.push('\n');
        }
    }
    let _ = writeln!(out, "\n## Certificates ({})\n", r.certificates.len());
    for c in &r.certificates {
        let _ = writeln!(out, "- `{}` {}", c.path, c.certificate.summary());
    }
    if !r.notes.is_empty() {
        out.push_str("\n## Notes\n\n");
        for n in &r.notes {
            let _ = writeln!(out, "- {n}");
        }
    }
    out
}

pub fn sweep_markdown(s: &SweepReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# K10 sweep ({:?})\n\nvisited {} of {} classes, max cycle length {}, {} ms\n",
        s.config.mode, s.total, s.space, s.config.max_cycle_len, s.elapsed_ms
    );
    out.push_str("| outcome | classes |\n|---|---|\n");
    for (k, v) in &s.by_kind {
        let _ = writeln!(out, "| {k} | {v} |");
    }
    let _ = writeln!(out, "| silent | {} |", s.silent_count);
    if !s.silent.is_empty() {
        out.push_str("\n## Silent classes\n\n");
        for c in &s.silent {
            let neg: Vec<String> = c
                .signing
                .negative_edges
                .iter()
                .map(|[a, b]| format!("{a}-{b}"))
                .collect();
            let _ = writeln!(out, "- #{}: negative {}", c.index, neg.join(" "));
        }
    }
    out
}
