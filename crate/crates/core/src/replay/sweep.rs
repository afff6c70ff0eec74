use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificates::CertificateSearch;
use crate::error::{Error, Result};
use crate::graphs::{complete_graph, EdgeSet, Graph};
use crate::homology::{EdgeSigning, SigningDoc, FIGURE2_NEGATIVE, Z2};

/// Number of classes in the full sweep: K10 has a 36-dimensional cycle space
/// and the fixed K6 class pins 10 of those dimensions.
pub const FULL_QUOTIENT_CLASSES: u64 = 1 << 26;

/// Silent classes kept verbatim in a report; the count is always exact.
pub const SILENT_KEEP: usize = 1000;

const CHUNK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// The 64 uniform connector-sign vectors with `G[7..10]` all `+`.
    PaperCases,
    /// Every switching class of K10 extending the fixed K6 class.
    FullQuotient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub mode: SweepMode,
    pub workers: Option<usize>,
    pub max_cycle_len: usize,
    /// Required for `FullQuotient`.
    pub acknowledge_long_run: bool,
    /// Visit only the first `limit` classes (in index order).
    pub limit: Option<u64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            mode: SweepMode::PaperCases,
            workers: None,
            max_cycle_len: 3,
            acknowledge_long_run: false,
            limit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SilentClass {
    pub index: u64,
    pub signing: SigningDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: SweepOptions,
    /// Size of the class space for the mode.
    pub space: u64,
    pub total: u64,
    pub by_kind: BTreeMap<String, u64>,
    pub silent_count: u64,
    pub silent: Vec<SilentClass>,
    pub elapsed_ms: u64,
}

impl SweepReport {
    pub fn certified(&self) -> u64 {
        self.by_kind.values().sum()
    }

    pub fn normalized(&self) -> SweepReport {
        SweepReport {
            elapsed_ms: 0,
            config: SweepOptions {
                workers: None,
                ..self.config.clone()
            },
            ..self.clone()
        }
    }
}

struct Space {
    graph: Arc<Graph>,
    base: EdgeSigning,
    /// Edges set by the index bits, lowest bit first.
    free: Vec<usize>,
}

impl Space {
    fn signing(&self, index: u64) -> EdgeSigning {
        let mut s = self.base.clone();
        for (i, &k) in self.free.iter().enumerate() {
            s.set_sign(k, Z2::from_parity(index >> i & 1 == 1));
        }
        s
    }
}

fn space(mode: SweepMode) -> Result<Space> {
    let graph = Arc::new(complete_graph::<&str>(10, None)?);
    let g = &graph;
    let negative = FIGURE2_NEGATIVE
        .iter()
        .map(|(a, b)| g.edge_by_labels(a, b))
        .collect::<Result<Vec<_>>>()?;
    let base = EdgeSigning::from_negative(graph.clone(), EdgeSet::from_indices(negative))?;
    let free = match mode {
        // Block b (four edges) holds the connectors of vertex 6 - b, so bit b of
        // a case index is vertex 6 - b and the index order matches the case keys.
        SweepMode::PaperCases => {
            let mut free = Vec::new();
            for v in (1..=6).rev().map(|v: u32| v.to_string()) {
                for w in ["7", "8", "9", "10"] {
                    free.push(g.edge_by_labels(&v, w)?);
                }
            }
            free
        }
        SweepMode::FullQuotient => {
            let k6 = g.mask_of(&["1", "2", "3", "4", "5", "6"])?;
            let tree = ["7", "8", "9", "10"]
                .iter()
                .map(|w| g.edge_by_labels("1", w))
                .collect::<Result<Vec<_>>>()?;
            (0..g.edge_count())
                .filter(|&k| {
                    let (a, b) = g.edge(k);
                    !(k6 >> a & 1 == 1 && k6 >> b & 1 == 1) && !tree.contains(&k)
                })
                .collect()
        }
    };
    Ok(Space { graph, base, free })
}

/// Runs the certificate search over the K10 classes extending the linkless K6 class.
pub fn sweep_k10(options: &SweepOptions) -> Result<SweepReport> {
    if options.mode == SweepMode::FullQuotient && !options.acknowledge_long_run {
        return Err(Error::Budget(format!(
            "the full sweep visits {FULL_QUOTIENT_CLASSES} classes; acknowledge the long run to proceed"
        )));
    }
    match options.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Structure(e.to_string()))?
            .install(|| run(options)),
        None => run(options),
    }
}

#[derive(Default)]
struct Tally {
    by_kind: BTreeMap<String, u64>,
    silent_count: u64,
    silent: Vec<SilentClass>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.by_kind {
            *self.by_kind.entry(k).or_default() += v;
        }
        self.silent_count += other.silent_count;
        self.silent.extend(other.silent);
        self.silent.truncate(SILENT_KEEP);
        self
    }
}

fn run(options: &SweepOptions) -> Result<SweepReport> {
    let start = Instant::now();
    let sp = space(options.mode)?;
    let search = CertificateSearch::new(sp.graph.clone(), options.max_cycle_len)?;
    let size = match options.mode {
        SweepMode::PaperCases => 64,
        SweepMode::FullQuotient => FULL_QUOTIENT_CLASSES,
    };
    let total = options.limit.map_or(size, |l| l.min(size));
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(total)))
        .collect();
    let visit = |index: u64| -> Tally {
        let s = match options.mode {
            SweepMode::PaperCases => sp.signing(
                (0..6)
                    .filter(|b| index >> b & 1 == 1)
                    .fold(0u64, |m, b| m | 0b1111 << (4 * b)),
            ),
            SweepMode::FullQuotient => sp.signing(index),
        };
        let mut t = Tally::default();
        match search.find(&s) {
            Some(c) => *t.by_kind.entry(c.kind().name().to_string()).or_default() += 1,
            None => {
                t.silent_count = 1;
                t.silent.push(SilentClass {
                    index,
                    signing: s.to_doc(),
                });
            }
        }
        t
    };
    // Chunks are merged in index order, so the report does not depend on scheduling.
    let tally = chunks
        .par_iter()
        .map(|&(lo, hi)| (lo..hi).map(visit).fold(Tally::default(), Tally::merge))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    Ok(SweepReport {
        config: options.clone(),
        space: size,
        total,
        by_kind: tally.by_kind,
        silent_count: tally.silent_count,
        silent: tally.silent,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
