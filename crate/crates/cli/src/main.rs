use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rp3link::certificates::{classify, search_certificate_free, search_linkless_k6, Verdict};
use rp3link::graphs::{build_construction, triangle_orbits, Graph, GraphDoc};
use rp3link::homology::{
    verify_k4_parity, verify_switching_invariance, EdgeSigning, SigningDoc, SpanningForest,
};
use rp3link::replay::{
    builtin_script, replay_markdown, replay_with, sweep_k10, sweep_markdown, table_markdown,
    ProofScript, ReplayOptions, SweepMode, SweepOptions,
};

#[derive(Parser)]
#[command(
    name = "rp3link",
    version,
    about = "Z/2 homology checks, link certificates, and proof replay for graphs in RP3"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads for parallel steps.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Longest cycle the certificate rules consider.
    #[arg(long, global = true, default_value_t = 3)]
    max_cycle_len: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Property checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Exhaustive searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Look for a triple-link certificate for one signing.
    Certify {
        /// Construction descriptor or graph JSON file.
        #[arg(long)]
        graph: String,
        /// Signing JSON file.
        #[arg(long)]
        signing: PathBuf,
    },
    /// Replay a proof script.
    Replay {
        /// Built-in script id.
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        script: Option<String>,
        /// Script JSON file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Report only this composition table.
        #[arg(long, conflicts_with = "case")]
        table: Option<u32>,
        /// Report only this case, e.g. `1+,2-,3+,4+,5-,6-`.
        #[arg(long)]
        case: Option<String>,
    },
    /// Certificate sweeps.
    #[command(subcommand)]
    Sweep(SweepCmd),
    /// Triangle orbits under the automorphism group.
    Orbits {
        #[arg(long)]
        graph: String,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Even number of 1-homologous triangles in every K4.
    Parity {
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Cycle classes are invariant under switching.
    Switching {
        #[arg(long, default_value_t = 1_000)]
        samples: u64,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Classify the linkless K6 switching classes.
    #[command(name = "linkless-k6")]
    LinklessK6 {
        /// Run over all 2^15 signings instead of switching classes.
        #[arg(long)]
        oracle: bool,
    },
    /// First switching class on which the rule set is silent.
    #[command(name = "certificate-free")]
    CertificateFree {
        #[arg(long)]
        graph: String,
    },
}

#[derive(Subcommand)]
enum SweepCmd {
    K10 {
        #[arg(long, value_enum, default_value = "paper")]
        mode: ModeArg,
        /// Acknowledge the long runtime of the full sweep.
        #[arg(long)]
        ack: bool,
        /// Visit only the first N classes.
        #[arg(long)]
        limit: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Full,
}

/// Bad input or arguments; exits 2.
enum Failure {
    Usage(String),
}

type Outcome = Result<(Value, String, bool), Failure>;

fn usage<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Usage(format!("{context}: {e}"))
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn load_graph(source: &str) -> Result<Graph, Failure> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(usage(source))?;
        let doc: GraphDoc = serde_json::from_str(&text).map_err(usage(source))?;
        Graph::from_doc(&doc).map_err(usage(source))
    } else {
        build_construction(source).map_err(usage("--graph"))
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn verify(cmd: &VerifyCmd, c: &Common) -> Outcome {
    match cmd {
        VerifyCmd::Parity { samples } => {
            let r = verify_k4_parity(c.seed, *samples).map_err(usage("parity"))?;
            let md = format!(
                "# K4 parity\n\nexhaustive: {} signings, {} failures\nsampled on {}: {} (seed {}), {} failures\n1-homologous triangle counts 0..4: {:?}\n",
                r.exhaustive, r.exhaustive_failures, r.sample_graph, r.samples, r.seed, r.sample_failures, r.counts
            );
            Ok((to_value(&r), md, r.passed()))
        }
        VerifyCmd::Switching { samples } => {
            let r = verify_switching_invariance(c.seed, *samples).map_err(usage("switching"))?;
            let md = format!(
                "# Switching invariance\n\n{} samples (seed {}), {} through the switched vertex, {} failures\n",
                r.samples, r.seed, r.through_vertex, r.failures
            );
            Ok((to_value(&r), md, r.passed()))
        }
    }
}

fn search(cmd: &SearchCmd, c: &Common) -> Outcome {
    match cmd {
        SearchCmd::LinklessK6 { oracle } => {
            let r = search_linkless_k6(*oracle).map_err(usage("search"))?;
            let md = format!(
                "# Linkless K6 classes ({})\n\nchecked {}; passing classes {}; orbits {}; reference class included: {}; 1-hom triangle counts {:?}; one per disjoint pair: {}\n",
                r.mode,
                r.signings_checked,
                r.passing_classes.len(),
                r.orbit_count,
                r.contains_figure2,
                r.one_hom_triangle_counts,
                r.one_per_disjoint_pair
            );
            let ok = r.orbit_count >= 1 && r.contains_figure2;
            Ok((to_value(&r), md, ok))
        }
        SearchCmd::CertificateFree { graph } => {
            let g = Arc::new(load_graph(graph)?);
            let hit = search_certificate_free(g, c.max_cycle_len).map_err(usage("search"))?;
            let v = match &hit {
                Some(h) => json!({
                    "graph": graph,
                    "found": true,
                    "class_index": h.class_index,
                    "signing": h.signing.to_doc(),
                }),
                None => json!({ "graph": graph, "found": false }),
            };
            let md = match &hit {
                Some(h) => {
                    let neg: Vec<String> = h
                        .signing
                        .to_doc()
                        .negative_edges
                        .iter()
                        .map(|[a, b]| format!("{a}-{b}"))
                        .collect();
                    format!(
                        "# Certificate-free class on `{graph}`\n\nclass #{}; negative edges: {}\n",
                        h.class_index,
                        neg.join(" ")
                    )
                }
                None => format!("# Certificate-free class on `{graph}`\n\nnone: every class is certified or axiom-dependent\n"),
            };
            Ok((v, md, hit.is_some()))
        }
    }
}

fn certify(graph: &str, signing: &Path, c: &Common) -> Outcome {
    let g = Arc::new(load_graph(graph)?);
    let name = signing.display().to_string();
    let text = std::fs::read_to_string(signing).map_err(usage(&name))?;
    let doc: SigningDoc = serde_json::from_str(&text).map_err(usage(&name))?;
    let own = doc.graph.resolve().map_err(usage(&name))?;
    if own.to_doc() != g.to_doc() {
        return Err(Failure::Usage(format!(
            "{name}: signing graph differs from --graph"
        )));
    }
    let s = EdgeSigning::from_doc_on(g.clone(), &doc).map_err(usage(&name))?;
    let verdict = classify(&s, c.max_cycle_len).map_err(usage("certify"))?;
    let any_one = s
        .fundamental_classes(&SpanningForest::of(&g))
        .iter()
        .any(|z| z.is_one());
    let (ok, line) = match &verdict {
        Verdict::Certificate { certificate } => {
            (true, format!("certificate: {}", certificate.summary()))
        }
        _ if !any_one => (false, "no certificate; no 1-homologous cycles".to_string()),
        _ => (false, "no certificate; the rule set is silent".to_string()),
    };
    let mut v = json!({ "graph": graph, "certified": ok, "summary": line, "verdict": verdict });
    if let Verdict::AxiomDependent { component, axiom } = &verdict {
        v["note"] = json!(format!(
            "[{}] has only 0-homologous cycles; a triple link then rests on `{axiom}`",
            component.join(", ")
        ));
    }
    let md = format!(
        "# Certify `{graph}`\n\n{line}\n\nverdict: {}\n",
        verdict.name()
    );
    Ok((v, md, ok))
}

fn run_replay(
    script: &Option<String>,
    file: &Option<PathBuf>,
    table: Option<u32>,
    case: &Option<String>,
    c: &Common,
) -> Outcome {
    let s = match (script, file) {
        (Some(id), _) => builtin_script(id).map_err(usage("--script"))?,
        (None, Some(p)) => {
            let name = p.display().to_string();
            let text = std::fs::read_to_string(p).map_err(usage(&name))?;
            ProofScript::from_json(&text).map_err(usage(&name))?
        }
        (None, None) => {
            return Err(Failure::Usage(
                "one of --script and --file is required".into(),
            ))
        }
    };
    let r = replay_with(&s, &ReplayOptions { workers: c.workers }).map_err(usage("replay"))?;
    if let Some(id) = table {
        let hits: Vec<_> = r.tables.iter().filter(|t| t.report.table == id).collect();
        if hits.is_empty() {
            return Err(Failure::Usage(format!(
                "script `{}` checks no table {id}",
                r.script
            )));
        }
        let ok = hits.iter().all(|t| t.report.passed());
        let md: String = hits
            .iter()
            .map(|t| {
                format!(
                    "at `{}`: {}/{} rows\n\n{}",
                    t.path,
                    t.report.rows_passed,
                    t.report.rows.len(),
                    table_markdown(&t.report)
                )
            })
            .collect();
        return Ok((
            json!({ "script": r.script, "table": id, "checks": hits }),
            md,
            ok,
        ));
    }
    if let Some(key) = case {
        let key = key.replace(' ', "");
        let found = r
            .case(&key)
            .ok_or_else(|| Failure::Usage(format!("script `{}` has no case `{key}`", r.script)))?;
        let md = format!(
            "# Case `{}` of `{}`: {}\n\n```json\n{}\n```\n",
            found.case,
            r.script,
            if found.passed { "pass" } else { "FAIL" },
            serde_json::to_string_pretty(found).expect("serializes")
        );
        return Ok((
            json!({ "script": r.script, "case": found }),
            md,
            found.passed,
        ));
    }
    let mut v = to_value(&r);
    if let Some(line) = r.case_line() {
        v["summary"] = json!(line);
    }
    Ok((v, replay_markdown(&r), r.passed))
}

fn sweep(cmd: &SweepCmd, c: &Common) -> Outcome {
    let SweepCmd::K10 { mode, ack, limit } = cmd;
    let options = SweepOptions {
        mode: match mode {
            ModeArg::Paper => SweepMode::PaperCases,
            ModeArg::Full => SweepMode::FullQuotient,
        },
        workers: c.workers,
        max_cycle_len: c.max_cycle_len,
        acknowledge_long_run: *ack,
        limit: *limit,
    };
    let r = sweep_k10(&options).map_err(usage("sweep"))?;
    let mut v = to_value(&r.normalized());
    v["config"]["workers"] = json!(null);
    Ok((v, sweep_markdown(&r), r.silent_count == 0))
}

fn orbits(graph: &str) -> Outcome {
    let g = load_graph(graph)?;
    let orbits = triangle_orbits(&g).map_err(usage("orbits"))?;
    let rows: Vec<Value> = orbits
        .iter()
        .map(|o| {
            json!({
                "representative": o.representative.vertices().iter().map(|&v| g.label(v)).collect::<Vec<_>>(),
                "size": o.members.len(),
            })
        })
        .collect();
    let mut md = format!(
        "# Triangle orbits of `{graph}`: {}\n\n| representative | size |\n|---|---|\n",
        orbits.len()
    );
    for o in &orbits {
        md.push_str(&format!(
            "| {} | {} |\n",
            o.representative.display(&g),
            o.members.len()
        ));
    }
    Ok((
        json!({ "graph": graph, "orbit_count": orbits.len(), "orbits": rows }),
        md,
        true,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let outcome = match &cli.command {
        Command::Verify(v) => verify(v, c),
        Command::Search(s) => search(s, c),
        Command::Certify { graph, signing } => certify(graph, signing, c),
        Command::Replay {
            script,
            file,
            table,
            case,
        } => run_replay(script, file, *table, case, c),
        Command::Sweep(s) => sweep(s, c),
        Command::Orbits { graph } => orbits(graph),
    };
    match outcome {
        Ok((mut value, md, ok)) => {
            let mut out = std::io::stdout().lock();
            match c.format {
                Format::Json => {
                    strip_timing(&mut value);
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&value).expect("serializes")
                    );
                }
                Format::Md => {
                    let _ = write!(out, "{md}");
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
