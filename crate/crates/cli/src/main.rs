mod commands;
mod range;
mod sweep;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use obi_core::constructions::ConstructionFamily;
use obi_core::solver::{beta_b, SolveOptions, DEFAULT_NODE_LIMIT};
use obi_core::{Broadcast, Circulant, CirculantSpec};
use serde_json::json;

use commands::{ConstructOutput, ConstructParams, TransformKind, TransformParams};
use range::Span;
use sweep::{Grid, SweepConfig};

const EXIT_BUDGET: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "obi", version, about = "Broadcast independence of oriented circulant graphs C(n; 1, a)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Budget {
    /// Search nodes per instance.
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: u64,
    /// Seconds per instance.
    #[arg(long, default_value_t = 30.0)]
    time_limit: f64,
}

impl Budget {
    fn options(&self) -> Result<SolveOptions> {
        if !(self.time_limit >= 0.0 && self.time_limit.is_finite()) {
            bail!("--time-limit must be a non-negative number of seconds");
        }
        Ok(SolveOptions {
            node_limit: self.node_limit,
            time_limit: Some(Duration::from_secs_f64(self.time_limit)),
            threads: workers(),
            ..SolveOptions::default()
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute beta_b of one graph.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "steps")]
        a: Option<usize>,
        /// Comma-separated step set, e.g. 1,2,4.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        steps: Option<Vec<i64>>,
        /// Value cap; defaults to the smallest cap licensed by a lemma.
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        no_symmetry: bool,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check solver, theorems, constructions, bounds and distances for every n <= max-n.
    Verify {
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        min_n: usize,
        /// Also print one line per instance and per check.
        #[arg(long)]
        details: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Solve a grid of instances.
    Sweep {
        /// Restrict to one construction family's parameter grid.
        #[arg(long)]
        family: Option<ConstructionFamily>,
        #[arg(long)]
        n: Option<Span>,
        #[arg(long)]
        a: Option<Span>,
        #[arg(long)]
        q: Option<Span>,
        #[arg(long)]
        k: Option<Span>,
        #[arg(long, default_value = "0")]
        s: Span,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build and certify a lower-bound construction.
    Construct {
        /// single, 3a-1, a3, k(a-1), qa or qa+a-1.
        family: ConstructionFamily,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        s: usize,
    },
    /// Apply a bounding rewrite to a broadcast (sampled from --seed when --f is absent).
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        /// Broadcast in compact form, e.g. "0:7,12:2".
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long)]
        ell: Option<u32>,
        /// Include the rewrite trace.
        #[arg(long)]
        explain: bool,
    },
    /// Compare the closed-form distance with BFS.
    DistanceCheck {
        #[arg(long, requires = "a")]
        n: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        /// Check every legal pair with n up to this value instead.
        #[arg(long, conflicts_with = "n")]
        max_n: Option<usize>,
    },
    /// Write the graph in DOT, optionally labelled with a broadcast.
    ExportDot {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        /// Broadcast in compact form.
        #[arg(long, conflicts_with = "witness")]
        broadcast: Option<String>,
        /// Label with an optimal broadcast from the solver.
        #[arg(long)]
        witness: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn workers() -> usize {
    std::env::var("OBI_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Solve { n, a, steps, cap, no_symmetry, budget, format } => {
            let spec = match (a, steps) {
                (Some(a), None) => {
                    obi_core::regime::validate_two_step(n, a)?;
                    CirculantSpec::two_step(n, a as i64)
                }
                (None, Some(steps)) => CirculantSpec::new(n, steps),
                _ => bail!("solve needs --a or --steps"),
            };
            let mut opts = budget.options()?;
            if let Some(c) = cap {
                opts = SolveOptions { value_cap: Some(c), cap_provenance: obi_core::CapProvenance::User, ..opts };
            }
            opts.symmetry_breaking = !no_symmetry;
            let (res, rep) = beta_b(&spec, &opts)?;
            match (format, a) {
                (Format::Csv, Some(a)) => {
                    let row = sweep::Row {
                        n,
                        a,
                        regime: rep.as_ref().map_or(String::new(), |r| r.regime.family.label().to_string()),
                        beta: res.beta,
                        optimal: res.optimal,
                        predicted: rep.as_ref().and_then(|r| r.exact.as_ref()).map(|b| b.value),
                        lower: rep.as_ref().map_or(0, |r| r.max_lower()),
                        upper: rep.as_ref().map_or(u32::MAX, |r| r.min_upper()),
                        nodes: res.nodes,
                        ms: (res.elapsed_ms * 1e3).round() / 1e3,
                    };
                    sweep::write_rows(&[row], Format::Csv, io::stdout().lock())?;
                }
                (Format::Csv, None) => bail!("CSV output needs a two-step graph (--a)"),
                (Format::Json, _) => print_json(&json!({
                    "graph": spec.to_string(),
                    "result": res,
                    "report": rep,
                }))?,
            }
            Ok(if res.optimal { 0 } else { EXIT_BUDGET })
        }
        Cmd::Verify { max_n, min_n, details, budget } => {
            let rep = verify::run(min_n, max_n, &budget.options()?)?;
            if details {
                for r in &rep.instances {
                    print_json(&json!({ "instance": r }))?;
                }
                for c in &rep.checks {
                    print_json(c)?;
                }
            }
            for t in &rep.tallies {
                print_json(t)?;
            }
            let skipped: usize = rep.tallies.iter().map(|t| t.skipped).sum();
            print_json(&json!({
                "summary": {
                    "instances": rep.instances.len(),
                    "failures": rep.failures(),
                    "skipped": skipped,
                }
            }))?;
            Ok(if rep.failures() == 0 { 0 } else { 1 })
        }
        Cmd::Sweep { family, n, a, q, k, s, budget, format, output } => {
            let grid = match family {
                Some(family) => Grid::Family { family, a, q, k, s, n },
                None => Grid::Pairs {
                    n: n.context("sweep needs --n (or --family)")?,
                    a: a.context("sweep needs --a (or --family)")?,
                },
            };
            let cfg = SweepConfig { grid, opts: budget.options()? };
            let rows = sweep::run(&cfg)?;
            let mut out = sink(output.as_ref())?;
            sweep::write_rows(&rows, format, &mut out)?;
            out.flush()?;
            Ok(if rows.iter().all(|r| r.optimal) { 0 } else { EXIT_BUDGET })
        }
        Cmd::Construct { family, n, a, q, k, s } => {
            let rec = commands::construct(family, &ConstructParams { n, a, q, k, s })?;
            let valid = rec.is_certified();
            print_json(&ConstructOutput { record: &rec, cost: rec.broadcast.cost(), valid })?;
            Ok(if valid { 0 } else { 1 })
        }
        Cmd::Transform { kind, n, a, f, seed, i, ell, explain } => {
            let out = commands::transform(&TransformParams { kind, n, a, f, seed, i, ell, explain })?;
            print_json(&out)?;
            Ok(0)
        }
        Cmd::DistanceCheck { n, a, max_n } => {
            let pairs: Vec<(usize, usize)> = match (n, a, max_n) {
                (Some(n), Some(a), None) => vec![(n, a)],
                (None, _, Some(m)) => (4..=m)
                    .flat_map(|n| (2..n).map(move |a| (n, a)))
                    .filter(|&(n, a)| obi_core::regime::validate_two_step(n, a).is_ok())
                    .collect(),
                _ => bail!("distance-check needs --n and --a, or --max-n"),
            };
            if pairs.is_empty() {
                bail!("nothing to check");
            }
            let mut bad = 0;
            for (n, a) in pairs {
                let c = commands::distance_check(n, a)?;
                bad += c.mismatches;
                print_json(&c)?;
            }
            Ok(if bad == 0 { 0 } else { 1 })
        }
        Cmd::ExportDot { n, a, broadcast, witness, output } => {
            obi_core::regime::validate_two_step(n, a)?;
            let g = Circulant::two_step(n, a as i64)?;
            let f = match (broadcast, witness) {
                (Some(text), _) => Some(Broadcast::from_compact(n, &text)?),
                (None, true) => {
                    let (res, _) = beta_b(&g.spec(), &SolveOptions { threads: workers(), ..SolveOptions::default() })?;
                    Some(res.witness)
                }
                (None, false) => None,
            };
            let mut out = sink(output.as_ref())?;
            out.write_all(commands::export_dot(&g, f.as_ref())?.as_bytes())?;
            out.flush()?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let _ = rayon::ThreadPoolBuilder::new().num_threads(workers()).build_global();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
