//! Seeded property checks: K4 triangle parity and switching invariance.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{EdgeSigning, SigningDoc};
use crate::certificates::CycleRef;
use crate::error::Result;
use crate::graphs::{complete_graph, enumerate_cycles, EdgeSet, Graph};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityCounterexample {
    pub signing: SigningDoc,
    pub k4: Vec<String>,
    pub one_hom: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityReport {
    pub seed: u64,
    /// All 2^6 signings of K4.
    pub exhaustive: u64,
    pub exhaustive_failures: u64,
    pub sample_graph: String,
    pub samples: u64,
    pub sample_failures: u64,
    /// Histogram of 1-homologous triangle counts (index 0..=4) over all checks.
    pub counts: [u64; 5],
    pub counterexamples: Vec<ParityCounterexample>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.exhaustive_failures == 0 && self.sample_failures == 0
    }
}

fn random_signing(g: &Arc<Graph>, rng: &mut ChaCha8Rng) -> Result<EdgeSigning> {
    let neg = EdgeSet::from_indices((0..g.edge_count()).filter(|_| rng.gen_bool(0.5)));
    EdgeSigning::from_negative(g.clone(), neg)
}

/// Every K4 has an even number of 1-homologous triangles: exhaustive on K4,
/// then `samples` random (signing, K4) pairs on K7.
pub fn verify_k4_parity(seed: u64, samples: u64) -> Result<ParityReport> {
    let mut counts = [0u64; 5];
    let mut counterexamples = Vec::new();
    let k4 = Arc::new(complete_graph::<&str>(4, None)?);
    let labels = ["1", "2", "3", "4"];
    let mut exhaustive_failures = 0;
    for bits in 0u64..1 << k4.edge_count() {
        let s = EdgeSigning::from_negative(
            k4.clone(),
            EdgeSet::from_indices((0..6).filter(|i| bits >> i & 1 == 1)),
        )?;
        let n = s.k4_one_hom_count(&labels)?;
        counts[n] += 1;
        if n % 2 == 1 {
            exhaustive_failures += 1;
            counterexamples.push(ParityCounterexample {
                signing: s.to_doc(),
                k4: labels.iter().map(|l| l.to_string()).collect(),
                one_hom: n,
            });
        }
    }
    let k7 = Arc::new(complete_graph::<&str>(7, None)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<String> = k7.labels().to_vec();
    let mut sample_failures = 0;
    for _ in 0..samples {
        let s = random_signing(&k7, &mut rng)?;
        let mut pick: Vec<String> = all.choose_multiple(&mut rng, 4).cloned().collect();
        pick.sort_by_key(|l| k7.vertex(l).unwrap_or(usize::MAX));
        let n = s.k4_one_hom_count(&pick)?;
        counts[n] += 1;
        if n % 2 == 1 {
            sample_failures += 1;
            counterexamples.push(ParityCounterexample {
                signing: s.to_doc(),
                k4: pick,
                one_hom: n,
            });
        }
    }
    Ok(ParityReport {
        seed,
        exhaustive: 1 << k4.edge_count(),
        exhaustive_failures,
        sample_graph: "k7".into(),
        samples,
        sample_failures,
        counts,
        counterexamples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwitchingCounterexample {
    pub signing: SigningDoc,
    pub vertex: String,
    pub cycle: CycleRef,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwitchingReport {
    pub seed: u64,
    pub samples: u64,
    pub failures: u64,
    /// Samples whose cycle passed through the switched vertex.
    pub through_vertex: u64,
    pub counterexamples: Vec<SwitchingCounterexample>,
}

impl SwitchingReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Switching at a vertex leaves every cycle class unchanged; sampled over
/// random signings of K6 and K7, random vertices, and random cycles.
pub fn verify_switching_invariance(seed: u64, samples: u64) -> Result<SwitchingReport> {
    let graphs: Vec<(Arc<Graph>, Vec<_>)> = [6, 7]
        .into_iter()
        .map(|n| {
            let g = Arc::new(complete_graph::<&str>(n, None)?);
            let cycles = enumerate_cycles(&g, n);
            Ok((g, cycles))
        })
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut failures, mut through_vertex) = (0, 0);
    let mut counterexamples = Vec::new();
    for _ in 0..samples {
        let (g, cycles) = &graphs[rng.gen_range(0..graphs.len())];
        let s = random_signing(g, &mut rng)?;
        let v = rng.gen_range(0..g.vertex_count());
        let c = &cycles[rng.gen_range(0..cycles.len())];
        if c.vertex_mask() >> v & 1 == 1 {
            through_vertex += 1;
        }
        if s.switch_index(v).class_unchecked(c) != s.class_unchecked(c) {
            failures += 1;
            counterexamples.push(SwitchingCounterexample {
                signing: s.to_doc(),
                vertex: g.label(v).to_string(),
                cycle: CycleRef::of(g, c),
            });
        }
    }
    Ok(SwitchingReport {
        seed,
        samples,
        failures,
        through_vertex,
        counterexamples,
    })
}
