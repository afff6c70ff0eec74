use serde::Serialize;

use super::script::Table;
use crate::certificates::rules::check_row;
use crate::certificates::{
    candidate_pairs, check_link_source, ll_compose, Certificate, ClassOracle, CycleRef, RowForm,
    SecondLink, Violation, WitnessEntry,
};
use crate::error::{Error, Result};
use crate::graphs::{Cycle, IntersectionType};
use crate::homology::{SigningConstraintSet, Z2};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReport {
    /// 1-based, in printed order.
    pub row: usize,
    pub pair: [CycleRef; 2],
    pub witness: CycleRef,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection: Option<IntersectionType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<RowForm>,
    /// Failing condition, named as in the composition rule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub table: u32,
    pub k6: Vec<String>,
    pub k4: Vec<String>,
    pub external: CycleRef,
    /// Problems with the table as a whole: source, external cycle, coverage.
    pub table_failures: Vec<Violation>,
    pub rows: Vec<RowReport>,
    pub rows_passed: usize,
    /// The composition certificate, when every row passes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.table_failures.is_empty() && self.rows_passed == self.rows.len()
    }

    pub fn failed_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.row)
            .collect()
    }
}

fn same_pair(a: &(Cycle, Cycle), b: &(Cycle, Cycle)) -> bool {
    (a.0 == b.0 && a.1 == b.1) || (a.0 == b.1 && a.1 == b.0)
}

/// Checks every row of a composition table against `context`: the witness
/// must be 1-homologous under every signing consistent with the context, and
/// the structural conditions of the composition rule must hold.
pub fn run_table(table: &Table, context: &SigningConstraintSet) -> Result<TableReport> {
    let g = context.graph();
    let source = Certificate::ZeroHomK4InK6 {
        k6: table.k6.clone(),
        k4: table.k4.clone(),
    };
    let external = Cycle::from_labels(g, &table.external)?;
    let e_ref = CycleRef::of(g, &external);
    let mut table_failures = Vec::new();
    if let Err(v) = check_link_source(context, &source)? {
        table_failures.push(v);
    }
    if context.class(&external) != Some(Z2::ONE) {
        table_failures.push(Violation::new(
            "external-class",
            vec![e_ref.clone()],
            "external cycle not known to be 1-homologous",
        ));
    }
    let candidates = candidate_pairs(g, &source)?;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let a = Cycle::from_labels(g, &row.pair[0])?;
        let b = Cycle::from_labels(g, &row.pair[1])?;
        let w = Cycle::from_labels(g, &row.witness)?;
        let pair = [CycleRef::of(g, &a), CycleRef::of(g, &b)];
        let w_ref = CycleRef::of(g, &w);
        let mut report = RowReport {
            row: i + 1,
            pair: pair.clone(),
            witness: w_ref.clone(),
            passed: false,
            intersection: None,
            form: None,
            failure: None,
        };
        let all = vec![
            pair[0].clone(),
            pair[1].clone(),
            w_ref.clone(),
            e_ref.clone(),
        ];
        if !candidates
            .iter()
            .any(|c| same_pair(c, &(a.clone(), b.clone())))
        {
            report.failure = Some(Violation::new(
                "unknown-pair",
                all,
                "not a disjoint triangle pair of the K6",
            ));
        } else {
            match context.class(&w) {
                Some(Z2::ONE) => {
                    let mut first = None;
                    for (ca, cb) in [(&a, &b), (&b, &a)] {
                        match check_row(context, ca, cb, &w, &external, &SecondLink::OneHomologous)
                        {
                            Ok(it) => {
                                report.passed = true;
                                report.intersection = Some(it);
                                report.form = Some(if it == IntersectionType::Identical {
                                    RowForm::ThreeChain
                                } else {
                                    RowForm::LlComposition
                                });
                                break;
                            }
                            Err(f) => {
                                first.get_or_insert(f);
                            }
                        }
                    }
                    if !report.passed {
                        let (rule, note) = first.expect("two orientations tried");
                        report.failure = Some(Violation::new(rule, all, note));
                    }
                }
                Some(_) => {
                    report.failure = Some(Violation::new(
                        "witness-class",
                        all,
                        "witness is 0-homologous in this context",
                    ))
                }
                None => {
                    report.failure = Some(Violation::new(
                        "witness-class",
                        all,
                        "witness class is not determined by this context",
                    ))
                }
            }
        }
        entries.push(WitnessEntry {
            pair: (a, b),
            witness: w,
        });
        rows.push(report);
    }
    let covered = candidates
        .iter()
        .filter(|c| entries.iter().any(|e| same_pair(&e.pair, c)))
        .count();
    if covered != candidates.len() || entries.len() != candidates.len() {
        table_failures.push(Violation::new(
            "coverage",
            vec![],
            format!(
                "{} rows cover {covered} of {} candidate pairs",
                entries.len(),
                candidates.len()
            ),
        ));
    }
    let rows_passed = rows.iter().filter(|r| r.passed).count();
    let certificate = if table_failures.is_empty() && rows_passed == rows.len() {
        match ll_compose(context, &source, &external, &entries)? {
            Ok(c) => Some(c),
            Err(v) => {
                return Err(Error::Structure(format!(
                    "table passed row checks but composition failed: {v}"
                )))
            }
        }
    } else {
        None
    };
    Ok(TableReport {
        table: table.id,
        k6: table.k6.clone(),
        k4: table.k4.clone(),
        external: e_ref,
        table_failures,
        rows,
        rows_passed,
        certificate,
    })
}
