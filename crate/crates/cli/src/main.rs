// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! `graphlet` command-line tool.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use graphlet::baselines::{run_baseline, AcceptanceRule, BaselineMethod};
use graphlet::bench::{
    parse_steps, run_bench, similarity, BenchMethod, BenchSpec, Truth, TruthSource,
};
use graphlet::estimate::relationship_edge_count;
use graphlet::{
    alpha_table, catalog, exact_enumerate, load_edge_list_path, run_estimate, run_parallel,
    EstimatorConfig, Graph, Method, NeighborOracle, WalkMode,
};

#[derive(Parser)]
#[command(
    name = "graphlet",
    version,
    about = "Graphlet concentration estimation by random walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Edge list, one `u v` pair per line; `#` starts a comment.
    #[arg(long)]
    graph: PathBuf,
    /// Keep only the largest connected component.
    #[arg(long)]
    lcc: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate concentrations (and counts when |R(d)| is known) by a walk.
    Estimate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "base")]
        method: String,
        #[arg(long, default_value = "srw")]
        walk: String,
        #[arg(long, default_value_t = 20_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        burn_in: u64,
        /// Independent chains; more than one prints a JSON array.
        #[arg(long, default_value_t = 1)]
        chains: usize,
        /// Number of relationship-graph edges, for counts when d > 2.
        #[arg(long)]
        r_d: Option<u64>,
        /// Route every neighbor request through a counting oracle and report
        /// its statistics on stderr.
        #[arg(long)]
        restricted: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exact per-class counts by enumeration.
    Exact {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Coefficient table as CSV: one row per walk dimension d.
    Alpha {
        #[arg(long)]
        k: usize,
        /// Single dimension; all of 1..=k when omitted.
        #[arg(long)]
        d: Option<usize>,
        /// Print alpha / 2.
        #[arg(long)]
        halves: bool,
    },
    /// NRMSE sweep over methods and budgets.
    Bench {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        /// Comma-separated, e.g. `d1-base-srw,d2-css-nb,wedge`.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        /// `start:end:step` or a comma-separated list.
        #[arg(long)]
        steps: String,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `exact` or a JSON truth file.
        #[arg(long, default_value = "exact")]
        truth: String,
        /// Directory for results.csv, timings.csv and plot.csv; results go
        /// to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Competing samplers.
    Baseline {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "degree-minus-one")]
        acceptance: String,
    },
    /// Cosine similarity of the concentration vectors of two JSON reports.
    Similarity {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

/// Failure attributable to the invocation rather than the computation.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl fmt::Display) -> anyhow::Error {
    Usage(e.to_string()).into()
}

/// Configuration errors from the library count as usage errors.
fn lib(e: graphlet::Error) -> anyhow::Error {
    use graphlet::Error::*;
    match e {
        UnsupportedK(_) | InvalidDimension { .. } | NotEstimable { .. } | Config(_) => usage(e),
        other => other.into(),
    }
}

fn existing(path: &Path) -> Result<()> {
    if !path.is_file() {
        return Err(usage(format!("file not found: {}", path.display())));
    }
    Ok(())
}

fn load_graph(args: &GraphArgs) -> Result<Graph> {
    existing(&args.graph)?;
    let g = load_edge_list_path(&args.graph)
        .with_context(|| format!("loading {}", args.graph.display()))?;
    if args.lcc {
        Ok(g.largest_connected_component()?)
    } else {
        Ok(g)
    }
}

fn graph_name(args: &GraphArgs) -> String {
    args.graph.display().to_string()
}

fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn read_concentration(path: &Path) -> Result<Vec<f64>> {
    existing(path)?;
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    let entries = value
        .get("concentration")
        .and_then(|c| c.as_array())
        .ok_or_else(|| anyhow::anyhow!("{} has no concentration array", path.display()))?;
    entries
        .iter()
        .map(|x| match x {
            serde_json::Value::Null => Ok(0.0),
            other => other
                .as_f64()
                .ok_or_else(|| anyhow::anyhow!("non-numeric concentration entry")),
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate {
            graph,
            k,
            d,
            method,
            walk,
            steps,
            seed,
            burn_in,
            chains,
            r_d,
            restricted,
            format,
        } => {
            let method: Method = method.parse().map_err(lib)?;
            let walk: WalkMode = walk.parse().map_err(lib)?;
            let g = load_graph(&graph)?;
            let cfg = EstimatorConfig::new(k, d, steps)
                .method(method)
                .walk(walk)
                .seed(seed)
                .burn_in(burn_in);
            cfg.validate().map_err(lib)?;
            let r_d = r_d.or_else(|| relationship_edge_count(&g, d));
            let oracle = NeighborOracle::new(&g);
            let mut reports = if restricted {
                run_parallel(&cfg, &oracle, chains).map_err(lib)?
            } else if chains == 1 {
                vec![run_estimate(&cfg, &g).map_err(lib)?]
            } else {
                run_parallel(&cfg, &g, chains).map_err(lib)?
            };
            if restricted {
                let stats = oracle.stats();
                eprintln!(
                    "oracle calls: {}, distinct nodes: {}",
                    stats.calls, stats.touched
                );
            }
            for r in &mut reports {
                r.graph = Some(graph_name(&graph));
                if let Some(r_d) = r_d {
                    r.counts = Some(graphlet::estimate::estimate_counts(r, r_d)?);
                }
            }
            match (format, reports.as_slice()) {
                (Format::Json, [one]) => emit(&one.to_json()?),
                (Format::Json, many) => emit(&serde_json::to_string_pretty(many)?),
                (Format::Csv, [one]) => {
                    let mut buf = Vec::new();
                    one.write_csv(&mut buf)?;
                    emit(&String::from_utf8(buf)?)
                }
                (Format::Csv, _) => Err(usage("--format csv supports a single chain")),
            }
        }
        Command::Exact { graph, k, format } => {
            catalog(k).map_err(lib)?;
            let g = load_graph(&graph)?;
            let counts = exact_enumerate(&g, k)?;
            match format {
                Format::Json => emit(&counts.to_json()?),
                Format::Csv => {
                    let mut buf = Vec::new();
                    counts.write_csv(&mut buf)?;
                    emit(&String::from_utf8(buf)?)
                }
            }
        }
        Command::Alpha { k, d, halves } => {
            let classes = catalog(k).map_err(lib)?.len();
            let dims: Vec<usize> = match d {
                Some(d) => vec![d],
                None => (1..=k).collect(),
            };
            let mut text = String::from("d");
            for i in 1..=classes {
                text.push_str(&format!(",{i}"));
            }
            text.push('\n');
            for d in dims {
                let table = alpha_table(k, d).map_err(lib)?;
                text.push_str(&d.to_string());
                for &a in &table.alpha {
                    if halves {
                        text.push_str(&format!(",{}", a as f64 / 2.0));
                    } else {
                        text.push_str(&format!(",{a}"));
                    }
                }
                text.push('\n');
            }
            emit(&text)
        }
        Command::Bench {
            graph,
            k,
            methods,
            steps,
            runs,
            seed,
            truth,
            out,
        } => {
            let methods = methods
                .iter()
                .map(|m| m.parse::<BenchMethod>())
                .collect::<graphlet::Result<Vec<_>>>()
                .map_err(lib)?;
            let truth_source = if truth == "exact" {
                TruthSource::Exact
            } else {
                let p = PathBuf::from(&truth);
                existing(&p)?;
                TruthSource::File(p)
            };
            let spec = BenchSpec {
                k,
                methods,
                steps: parse_steps(&steps).map_err(lib)?,
                runs,
                seed,
                truth: truth_source,
            };
            spec.validate().map_err(lib)?;
            let g = load_graph(&graph)?;
            let truth = Truth::resolve(&spec.truth, &g, k)?;
            let result = run_bench(&g, &spec, &truth)?;
            match out {
                Some(dir) => result.write_all(&dir).map_err(Into::into),
                None => {
                    let mut buf = Vec::new();
                    result.write_results_csv(&mut buf)?;
                    emit(&String::from_utf8(buf)?)
                }
            }
        }
        Command::Baseline {
            graph,
            method,
            samples,
            seed,
            acceptance,
        } => {
            let method: BaselineMethod = method.parse().map_err(lib)?;
            let rule: AcceptanceRule = acceptance.parse().map_err(lib)?;
            let g = load_graph(&graph)?;
            let report = run_baseline(&g, method, samples, seed, rule)?;
            emit(&report.to_json()?)
        }
        Command::Similarity { a, b } => {
            let (ca, cb) = (read_concentration(&a)?, read_concentration(&b)?);
            let s = similarity(&ca, &cb)?;
            emit(&s.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
