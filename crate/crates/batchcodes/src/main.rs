//! Thin command-line front end over the `batchcodes` library.
//!
//! Exit codes: 0 success / property holds; 1 property false or no
//! certificate; 2 budget exhausted or undecided; 3 usage or input error.

use std::io::Read;

/// Like println!, but a consumer closing the pipe ends the process
/// quietly instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use batchcodes::constructions::{
    construct_t3, example1_code, greedy_packing, grid_line_code_with_slopes, grid_slopes,
    johnson_bound, packing_code, simplex_code, BlockOrder, CertifiedBy, CodeReport,
};
use batchcodes::error::Error;
use batchcodes::extremal::{
    max_edges_berge_girth, max_edges_sparsity, redundancy_table, verify_extremal_equality,
    ExtremalLimits,
};
use batchcodes::formats;
use batchcodes::graphs::{girth_certificate, CertifyTarget, GirthCertificate};
use batchcodes::sim::{simulate, SimConfig};
use batchcodes::verify::{
    is_asynchronous_batch_code, is_batch_code, is_pir_code, AsyncMode, SearchLimits,
};
use batchcodes::{audit, GeneratorMatrix};

#[derive(Parser)]
#[command(
    name = "batchcodes",
    about = "Construct, verify and benchmark graph-based batch and PIR codes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code family; prints the matrix, the underlying
    /// combinatorial object and a report as one JSON document
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Check a retrieval property of a code (matrix from stdin or --input)
    Verify {
        #[command(subcommand)]
        property: Property,
    },
    /// Search for a parity subset certifying the batch/PIR property
    /// through left degrees and girth
    CertifyTheorem1 {
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Budget for the exhaustive subset phase
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
    /// Exact small-instance extremal search
    Search {
        #[command(subcommand)]
        what: SearchWhat,
    },
    /// Redundancy of the constructed families against the 2*sqrt(k) bound
    Bounds {
        #[arg(long)]
        t: usize,
        /// Dimensions as an inclusive range, e.g. 4..16
        #[arg(long, value_parser = parse_range)]
        k_range: Option<(usize, usize)>,
    },
    /// Run the retrieval simulator from a JSON config
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Write the event trace as JSON lines to this file
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Run the independent trace auditor afterwards
        #[arg(long)]
        audit: bool,
        /// Allow joint re-planning of running requests instead of stalling
        #[arg(long)]
        relaxed: bool,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Redundancy-optimal t=3 family: k = m^2, rho = 2m
    T3 {
        #[arg(long)]
        m: usize,
    },
    /// Greedy 2-(eta, r, 1) packing design and its PIR code
    Packing {
        #[arg(long)]
        eta: usize,
        #[arg(long)]
        r: usize,
        /// Greedy visiting order: omit for lexicographic
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Grid-line hypergraph code with progression-free slopes
    Efr {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Comma-separated slope set; derived from m and r when omitted
        #[arg(long, value_delimiter = ',')]
        slopes: Option<Vec<usize>>,
    },
    /// The [7,3] simplex code: batch at t=4 but not asynchronous
    Simplex,
    /// The [8,4] asynchronous batch code used as the running example
    Example1,
}

#[derive(Subcommand)]
enum Property {
    Batch(VerifyArgs),
    Pir(VerifyArgs),
    Async(AsyncArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    max_nodes: Option<u64>,
}

#[derive(Args)]
struct AsyncArgs {
    #[command(flatten)]
    common: VerifyArgs,
    /// Allow re-choosing the remaining sets jointly with the newcomer's
    #[arg(long)]
    relaxed: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    Batch,
    Pir,
}

#[derive(Subcommand)]
enum SearchWhat {
    /// Maximum edges under Berge girth >= kappa + 1
    B(SearchArgs),
    /// Maximum edges under the kappa-sparsity condition
    F(SearchArgs),
    /// Run both searches and check that the values agree
    Theorem5(SearchArgs),
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    eta: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    kappa: usize,
    #[arg(long)]
    max_nodes: Option<u64>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| "expected a range like 4..16".to_string())?;
    let lo: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: usize = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err("range start exceeds end".into());
    }
    Ok((lo, hi))
}

fn read_input(path: &Option<PathBuf>) -> Result<GeneratorMatrix, Error> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    formats::read_matrix_str(&text)
}

fn limits(max_nodes: Option<u64>) -> SearchLimits {
    SearchLimits {
        max_set_size: None,
        max_nodes: max_nodes.unwrap_or(SearchLimits::default().max_nodes),
    }
}

fn construct_doc(
    matrix: &GeneratorMatrix,
    report: &CodeReport,
    extra: serde_json::Value,
) -> serde_json::Value {
    let mut doc = json!({
        "matrix": formats::matrix_to_json(matrix),
        "report": report,
    });
    if let serde_json::Value::Object(extra) = extra {
        doc.as_object_mut().expect("doc is an object").extend(extra);
    }
    doc
}

fn run() -> Result<u8, Error> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version on stdout with success
            let code = if e.use_stderr() { 3 } else { 0 };
            e.print().ok();
            return Ok(code);
        }
    };
    match cli.command {
        Command::Construct { family } => {
            let doc = match family {
                Family::T3 { m } => {
                    let (graph, code, report) = construct_t3(m)?;
                    construct_doc(
                        &code,
                        &report,
                        json!({ "graph": formats::bipartite_to_json(&graph) }),
                    )
                }
                Family::Packing { eta, r, seed } => {
                    let order = match seed {
                        Some(s) => BlockOrder::Seeded(s),
                        None => BlockOrder::Lexicographic,
                    };
                    let design = greedy_packing(eta, r, order)?;
                    let (code, report) = packing_code(&design)?;
                    construct_doc(
                        &code,
                        &report,
                        json!({
                            "packing": {
                                "eta": eta,
                                "r": r,
                                "blocks": design
                                    .blocks
                                    .iter()
                                    .map(|b| b.iter().map(|v| v + 1).collect::<Vec<_>>())
                                    .collect::<Vec<_>>(),
                                "johnson_bound": johnson_bound(eta, r)?,
                            }
                        }),
                    )
                }
                Family::Efr { m, r, slopes } => {
                    let slopes = slopes.unwrap_or_else(|| grid_slopes(m, r));
                    let (h, code, report) = grid_line_code_with_slopes(m, r, &slopes)?;
                    construct_doc(
                        &code,
                        &report,
                        json!({
                            "slopes": slopes,
                            "hypergraph": formats::hypergraph_to_text(&h),
                        }),
                    )
                }
                Family::Simplex => {
                    let code = simplex_code();
                    let report = CodeReport {
                        family: "simplex".into(),
                        n: code.n(),
                        k: code.k(),
                        t: 4,
                        rho: code.rho(),
                        certified_by: CertifiedBy::DirectVerifier,
                        girth: None,
                        berge_girth: None,
                    };
                    construct_doc(&code, &report, json!({}))
                }
                Family::Example1 => {
                    let (graph, code, report) = construct_t3(2)?;
                    debug_assert_eq!(code, example1_code());
                    let mut report = report;
                    report.family = "example1".into();
                    construct_doc(
                        &code,
                        &report,
                        json!({ "graph": formats::bipartite_to_json(&graph) }),
                    )
                }
            };
            out!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(0)
        }
        Command::Verify { property } => {
            let (verdict, holds) = match property {
                Property::Batch(args) => {
                    let g = read_input(&args.input)?;
                    let r = is_batch_code(&g, args.t, &limits(args.max_nodes))?;
                    (formats::batch_report_to_json(args.t, &r), r.holds)
                }
                Property::Pir(args) => {
                    let g = read_input(&args.input)?;
                    let r = is_pir_code(&g, args.t, &limits(args.max_nodes))?;
                    (formats::pir_report_to_json(args.t, &r), r.holds)
                }
                Property::Async(args) => {
                    let g = read_input(&args.common.input)?;
                    let mode = if args.relaxed {
                        AsyncMode::Relaxed
                    } else {
                        AsyncMode::Strict
                    };
                    let r = is_asynchronous_batch_code(
                        &g,
                        args.common.t,
                        mode,
                        &limits(args.common.max_nodes),
                    )?;
                    (
                        formats::async_report_to_json(args.common.t, args.relaxed, &r),
                        r.holds,
                    )
                }
            };
            out!("{}", serde_json::to_string_pretty(&verdict)?);
            Ok(if holds { 0 } else { 1 })
        }
        Command::CertifyTheorem1 {
            t,
            target,
            input,
            budget,
        } => {
            let g = read_input(&input)?;
            if !g.is_systematic() {
                return Err(Error::InvalidInput(
                    "the girth certificate needs a systematic matrix [I | A]".into(),
                ));
            }
            let adj: Vec<Vec<usize>> = (0..g.k())
                .map(|i| {
                    (g.k()..g.n())
                        .filter(|&j| g.column(j).get(i))
                        .map(|j| j - g.k())
                        .collect()
                })
                .collect();
            let graph = batchcodes::BipartiteGraph::new(g.k(), g.n() - g.k(), adj)?;
            let target = match target {
                TargetArg::Batch => CertifyTarget::Batch,
                TargetArg::Pir => CertifyTarget::Pir,
            };
            let cert = girth_certificate(&graph, t, target, budget);
            let (doc, code) = match cert {
                GirthCertificate::Found { kept } => (
                    json!({
                        "status": "found",
                        "kept_parities": kept.iter().map(|b| b + 1).collect::<Vec<_>>(),
                    }),
                    0,
                ),
                GirthCertificate::NotFound => (json!({ "status": "not-found" }), 1),
                GirthCertificate::Unknown => (json!({ "status": "unknown" }), 2),
            };
            out!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(code)
        }
        Command::Search { what } => {
            let lim = |args: &SearchArgs| ExtremalLimits {
                max_nodes: args
                    .max_nodes
                    .unwrap_or(ExtremalLimits::default().max_nodes),
            };
            match what {
                SearchWhat::B(args) => {
                    let out = max_edges_berge_girth(args.eta, args.r, args.kappa, lim(&args))?;
                    let doc = json!({
                        "eta": out.eta, "r": out.r, "kappa": out.kappa,
                        "B": out.value, "exact": out.exact, "nodes": out.nodes,
                        "witness": formats::hypergraph_to_text(&out.witness),
                    });
                    out!("{}", serde_json::to_string_pretty(&doc)?);
                    Ok(if out.exact { 0 } else { 2 })
                }
                SearchWhat::F(args) => {
                    let out = max_edges_sparsity(args.eta, args.r, args.kappa, lim(&args))?;
                    let doc = json!({
                        "eta": out.eta, "r": out.r, "kappa": out.kappa,
                        "F": out.value, "exact": out.exact, "nodes": out.nodes,
                        "witness": formats::hypergraph_to_text(&out.witness),
                    });
                    out!("{}", serde_json::to_string_pretty(&doc)?);
                    Ok(if out.exact { 0 } else { 2 })
                }
                SearchWhat::Theorem5(args) => {
                    let eq = verify_extremal_equality(args.eta, args.r, args.kappa, lim(&args))?;
                    if eq.equal {
                        out!("B=F={}", eq.girth_value);
                    } else {
                        out!("B={} F={}", eq.girth_value, eq.sparsity_value);
                    }
                    out!("{}", serde_json::to_string_pretty(&eq)?);
                    Ok(if !eq.exact {
                        2
                    } else if eq.equal {
                        0
                    } else {
                        1
                    })
                }
            }
        }
        Command::Bounds { t, k_range } => {
            let ks: Vec<usize> = match k_range {
                Some((lo, hi)) => (lo..=hi).collect(),
                None => vec![4, 9, 16, 25],
            };
            let rows = redundancy_table(t, &ks)?;
            out!(
                "{:>10} {:>6} {:>6} {:>10} {:>8} {:>12} {:>6}",
                "family",
                "k",
                "rho",
                "2*sqrt(k)",
                "ratio",
                "rho/sqrt(k)",
                "tight"
            );
            for r in &rows {
                out!(
                    "{:>10} {:>6} {:>6} {:>10.4} {:>8.4} {:>12.4} {:>6}",
                    r.family,
                    r.k,
                    r.rho,
                    r.bound,
                    r.ratio,
                    r.rho_over_sqrt_k,
                    r.tight
                );
            }
            Ok(0)
        }
        Command::Simulate {
            config,
            trace,
            audit: run_audit,
            relaxed,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg: SimConfig = serde_json::from_str(&text)?;
            if relaxed {
                cfg.relaxed = true;
            }
            let result = simulate(&cfg)?;
            let jsonl = formats::trace_to_jsonl(&result);
            if let Some(path) = &trace {
                std::fs::write(path, &jsonl)?;
            }
            for w in &result.stats.warnings {
                eprintln!("warning: {w}");
            }
            out!(
                "{:>12} {:>12} {:>12} {:>16} {:>16}",
                "requests",
                "stalls",
                "makespan",
                "mean completion",
                "mean occupancy"
            );
            out!(
                "{:>12} {:>12} {:>12.4} {:>16.4} {:>16.4}",
                result.stats.completed,
                result.stats.stalls,
                result.stats.makespan,
                result.stats.mean_completion,
                result.stats.mean_occupancy
            );
            if run_audit {
                let report = audit::audit_jsonl(&jsonl)?;
                out!(
                    "audit: {} events, {} violations",
                    report.events,
                    report.violations.len()
                );
                for v in &report.violations {
                    eprintln!("audit violation: {v}");
                }
                if !report.clean() {
                    return Ok(1);
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::BudgetExceeded { .. } => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
