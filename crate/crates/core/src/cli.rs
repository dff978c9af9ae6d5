//! The `lt-influence` command line.
//!
//! Results go to `out` as JSON or TSV, diagnostics to `err`. Every result
//! carries a [`RunManifest`]; in TSV it is written as leading `#` lines.
//! Exit codes: 0 success, 1 usage or validation error, 2 internal error.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::closed_form::{sigma_uilt, sigma_uislt, sigma_uslt};
use crate::error::{Error, Result};
use crate::evaluator::{Evaluator, DEFAULT_MC_RUNS};
use crate::exact::{
    optimal_seed_exhaustive_with, sigma_via_paths, ExactEngine, DEFAULT_RECURSION_CAP,
    DEFAULT_SUBSET_BUDGET,
};
use crate::generate::{barabasi_albert, random_lt_graph, random_tree, random_uislt_params};
use crate::graph::{build_uislt, make_transition_matrix, normalize_adjacency, Adjacency, InfluenceGraph, SeedSet, UisltParams};
use crate::ingest::{collaboration_weights, direct_coauthorship, normalize_collaboration};
use crate::io::{parse_coauthorship, parse_edge_list, parse_graph_tsv, parse_node_list, parse_real_list, write_graph_tsv};
use crate::montecarlo::{estimate_activation_probs, estimate_sigma, simulate_activation};
use crate::optimize::{g1_sieving, greedy, SelectionResult, SievingConfig, DEFAULT_ALPHA, DEFAULT_EPSILON};
use crate::rank::{build_g1, pagerank, rank_by_degree, rank_by_weighted_outdegree, RankList, DEFAULT_DAMPING, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::rng::{derive_seed, RNG_ALGORITHM};

/// Environment variable capping the worker thread count (0 = automatic).
pub const THREADS_ENV: &str = "LT_INFLUENCE_THREADS";

/// Stream tag for evaluating finished seed sets in `compare`.
const COMPARE_EVAL_TAG: u64 = 0xe7a1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "lt-influence", version, about = "Influence spread under the Linear Threshold model")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check weights and in-sums of a graph file.
    Validate { graph: String },
    /// Generate a graph.
    Gen(GenArgs),
    /// Build an influence graph from coauthorship records.
    Ingest {
        #[arg(long)]
        coauth: String,
        /// Send each pair's strength to the author with the higher id only.
        #[arg(long)]
        directed: bool,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Monte Carlo estimate of the spread of a seed set.
    Simulate {
        graph: String,
        #[arg(long)]
        seeds: String,
        #[arg(long, default_value_t = DEFAULT_MC_RUNS)]
        runs: usize,
        #[arg(long)]
        rng: Option<u64>,
        /// Also print the step-by-step activation of run 0.
        #[arg(long)]
        trace: bool,
    },
    /// Exact spread of a seed set.
    Exact {
        graph: String,
        #[arg(long)]
        seeds: String,
        #[arg(long, value_enum, default_value = "recursion")]
        method: ExactMethod,
        #[arg(long, default_value_t = DEFAULT_RECURSION_CAP)]
        cap: usize,
    },
    /// Best K-subset by exhaustive search.
    Optimum {
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u128,
        #[arg(long, default_value_t = DEFAULT_RECURSION_CAP)]
        cap: usize,
    },
    /// Closed-form spread on a complete UISLT, USLT or UILT graph.
    ClosedForm(ClosedFormArgs),
    /// Rank nodes.
    Rank {
        graph: String,
        #[arg(long, value_enum, default_value = "pagerank")]
        method: RankMethod,
        #[arg(long, default_value_t = DEFAULT_DAMPING)]
        damping: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Greedy seed selection.
    Greedy {
        graph: String,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// G1-sieving seed selection.
    Sieve {
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Spread of each method's top-K set for K = 1..k.
    Compare {
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "greedy,sieve,pagerank,degree,wdegree")]
        methods: String,
        #[arg(long, default_value_t = DEFAULT_MC_RUNS)]
        runs: usize,
        #[arg(long)]
        rng: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExactMethod {
    Recursion,
    Paths,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RankMethod {
    Pagerank,
    Degree,
    Wdegree,
    G1,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Use the exact recursion instead of Monte Carlo.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = DEFAULT_RECURSION_CAP)]
    cap: usize,
    #[arg(long, default_value_t = DEFAULT_MC_RUNS)]
    runs: usize,
    #[arg(long)]
    rng: Option<u64>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Complete UISLT graph from --alphas/--betas, or sampled with --n.
    #[arg(long, group = "model")]
    uislt: bool,
    /// Degree-normalized graph from --adjacency, --ba or --tree.
    #[arg(long, group = "model")]
    degree: bool,
    /// Random LT graph on N nodes.
    #[arg(long, group = "model", value_name = "N")]
    random: Option<usize>,
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long)]
    betas: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Undirected edge list (or 0/1 matrix with --matrix).
    #[arg(long)]
    adjacency: Option<String>,
    #[arg(long)]
    matrix: bool,
    /// Barabási–Albert graph on N nodes.
    #[arg(long, value_name = "N")]
    ba: Option<usize>,
    /// Edges per new node for --ba.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Uniform random tree on N nodes.
    #[arg(long, value_name = "N")]
    tree: Option<usize>,
    #[arg(long, default_value_t = 0.3)]
    edge_prob: f64,
    #[arg(long)]
    rng: Option<u64>,
    #[arg(short, long, default_value = "-")]
    output: String,
}

#[derive(Debug, Args)]
struct ClosedFormArgs {
    #[arg(long, group = "model")]
    uislt: bool,
    #[arg(long, group = "model")]
    uslt: bool,
    #[arg(long, group = "model")]
    uilt: bool,
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long)]
    betas: Option<String>,
    #[arg(long)]
    seeds: String,
}

/// Everything needed to reproduce a result.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub rng_seeds: BTreeMap<String, u64>,
    pub evaluator: BTreeMap<String, String>,
    pub version: String,
    pub timestamp: String,
}

struct Ctx<'a> {
    format: Format,
    manifest: RunManifest,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn rng(&mut self, name: &str, given: Option<u64>) -> Result<u64> {
        let seed = match given {
            Some(s) => s,
            None => {
                let s: u64 = rand::random();
                writeln!(self.err, "{name}: no --rng given, using {s}")?;
                s
            }
        };
        self.manifest.rng_seeds.insert(name.to_string(), seed);
        self.manifest
            .evaluator
            .insert("rng_algorithm".into(), RNG_ALGORITHM.into());
        Ok(seed)
    }

    fn evaluator(&mut self, args: &EvalArgs) -> Result<Evaluator> {
        let ev = if args.exact {
            Evaluator::Exact { cap: args.cap }
        } else {
            Evaluator::monte_carlo(args.runs, self.rng("rng", args.rng)?)
        };
        self.manifest.evaluator.extend(ev.describe());
        Ok(ev)
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.manifest.evaluator.insert(key.to_string(), value.to_string());
    }

    /// Writes a result: `json` in JSON mode, `header` + `rows` in TSV mode.
    fn emit(&mut self, json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
        match self.format {
            Format::Json => {
                let doc = json!({ "manifest": self.manifest, "result": json });
                writeln!(self.out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))?;
            }
            Format::Tsv => {
                write!(self.out, "{}", manifest_comment(&self.manifest))?;
                writeln!(self.out, "{}", header.join("\t"))?;
                for r in rows {
                    writeln!(self.out, "{}", r.join("\t"))?;
                }
            }
        }
        Ok(())
    }
}

fn manifest_comment(m: &RunManifest) -> String {
    let mut s = format!("# command_line={}\n", m.command_line.join(" "));
    for (k, v) in &m.rng_seeds {
        s += &format!("# rng_seed.{k}={v}\n");
    }
    for (k, v) in &m.evaluator {
        s += &format!("# param.{k}={v}\n");
    }
    s += &format!("# version={}\n# timestamp={}\n", m.version, m.timestamp);
    s
}

fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
    }
    Ok(s)
}

fn read_graph(path: &str) -> Result<InfluenceGraph> {
    parse_graph_tsv(&read_input(path)?)
}

fn write_output(ctx: &mut Ctx<'_>, path: &str, text: &str) -> Result<()> {
    if path == "-" {
        ctx.out.write_all(text.as_bytes())?;
    } else {
        std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {path}: {e}")))?;
    }
    Ok(())
}

fn seeds_arg(text: &str) -> SeedSet {
    SeedSet::new(parse_node_list(text).unwrap_or_default())
}

fn parse_seeds(text: &str, n: usize) -> Result<SeedSet> {
    let nodes = parse_node_list(text)?;
    let set = SeedSet::new(nodes);
    set.check_nonempty(n)?;
    Ok(set)
}

fn f(x: f64) -> String {
    x.to_string()
}

fn configure_threads(err: &mut dyn Write) {
    let Ok(v) = std::env::var(THREADS_ENV) else { return };
    match v.trim().parse::<usize>() {
        Ok(n) => {
            // Fails harmlessly if the pool already exists (repeated in-process runs).
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Err(_) => {
            let _ = writeln!(err, "ignoring {THREADS_ENV}={v:?}: not a number");
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    configure_threads(err);
    let manifest = RunManifest {
        command_line: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        rng_seeds: BTreeMap::new(),
        evaluator: BTreeMap::new(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
    };
    let mut ctx = Ctx {
        format: cli.format,
        manifest,
        out,
        err,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            if e.is_user_error() {
                1
            } else {
                2
            }
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx<'_>) -> Result<i32> {
    match command {
        Command::Validate { graph } => validate(ctx, &graph),
        Command::Gen(args) => gen(ctx, args).map(|_| 0),
        Command::Ingest { coauth, directed, output } => {
            let records = parse_coauthorship(&read_input(&coauth)?)?;
            let (raw, warnings) = collaboration_weights(&records);
            for w in &warnings {
                writeln!(ctx.err, "warning: {w}")?;
            }
            let g = if directed {
                direct_coauthorship(&raw)?
            } else {
                normalize_collaboration(&raw)?
            };
            ctx.param("directed", directed);
            let text = manifest_comment(&ctx.manifest) + &write_graph_tsv(&g);
            write_output(ctx, &output, &text)?;
            Ok(0)
        }
        Command::Simulate {
            graph,
            seeds,
            runs,
            rng,
            trace,
        } => {
            let g = read_graph(&graph)?;
            let a0 = parse_seeds(&seeds, g.node_count())?;
            let seed = ctx.rng("rng", rng)?;
            ctx.param("runs", runs);
            let est = estimate_activation_probs(&g, &a0, runs, seed)?;
            let mut json = json!({
                "seeds": a0,
                "mean": est.sigma.mean,
                "half_width": est.sigma.half_width,
                "runs": est.sigma.runs,
                "rng_seed": est.sigma.rng_seed,
                "g": est.probs,
            });
            let mut rows = vec![
                vec!["mean".into(), "".into(), f(est.sigma.mean)],
                vec!["half_width".into(), "".into(), f(est.sigma.half_width)],
            ];
            rows.extend(est.probs.iter().enumerate().map(|(j, &p)| vec!["g".into(), j.to_string(), f(p)]));
            if trace {
                let t = simulate_activation(&g, &a0, seed)?;
                for (k, step) in t.steps.iter().enumerate() {
                    let ids: Vec<String> = step.iter().map(|v| v.to_string()).collect();
                    rows.push(vec!["step".into(), k.to_string(), ids.join(",")]);
                }
                json["trace"] = serde_json::to_value(&t).expect("serializable");
            }
            ctx.emit(json, &["field", "index", "value"], rows)?;
            Ok(0)
        }
        Command::Exact { graph, seeds, method, cap } => {
            let g = read_graph(&graph)?;
            let a0 = parse_seeds(&seeds, g.node_count())?;
            ctx.param("cap", cap);
            let recursion = match method {
                ExactMethod::Paths => None,
                _ => Some(ExactEngine::new(&g, cap)?.sigma_set(&a0)?),
            };
            let paths = match method {
                ExactMethod::Recursion => None,
                _ => Some(sigma_via_paths(&g, &a0)?),
            };
            let difference = recursion.zip(paths).map(|(a, b)| (a - b).abs());
            let mut rows = Vec::new();
            for (name, v) in [("recursion", recursion), ("paths", paths), ("difference", difference)] {
                if let Some(v) = v {
                    rows.push(vec![name.to_string(), f(v)]);
                }
            }
            let json = json!({"seeds": a0, "recursion": recursion, "paths": paths, "difference": difference});
            ctx.emit(json, &["method", "sigma"], rows)?;
            Ok(0)
        }
        Command::Optimum { graph, k, budget, cap } => {
            let g = read_graph(&graph)?;
            ctx.param("budget", budget);
            ctx.param("cap", cap);
            let (set, value) = optimal_seed_exhaustive_with(&g, k, budget, cap)?;
            let rows = vec![vec![k.to_string(), set.to_string(), f(value)]];
            ctx.emit(json!({"k": k, "chosen": set, "sigma": value}), &["k", "chosen", "sigma"], rows)?;
            Ok(0)
        }
        Command::ClosedForm(args) => closed_form(ctx, args),
        Command::Rank {
            graph,
            method,
            damping,
            tol,
            max_iter,
            eval,
        } => {
            let g = read_graph(&graph)?;
            let list = match method {
                RankMethod::Pagerank => pagerank(&make_transition_matrix(&g)?, damping, tol, max_iter)?,
                RankMethod::Degree => rank_by_degree(&g),
                RankMethod::Wdegree => rank_by_weighted_outdegree(&g),
                RankMethod::G1 => {
                    let ev = ctx.evaluator(&eval)?;
                    build_g1(&g, ev)?
                }
            };
            ctx.manifest.evaluator.extend(list.metadata.clone());
            emit_rank(ctx, &list)?;
            Ok(0)
        }
        Command::Greedy { graph, k, eval } => {
            let g = read_graph(&graph)?;
            let ev = ctx.evaluator(&eval)?;
            let r = greedy(&g, k, ev)?;
            emit_selection(ctx, &r, json!({"k": k, "evaluator": ev}))?;
            Ok(0)
        }
        Command::Sieve {
            graph,
            k,
            alpha,
            epsilon,
            eval,
        } => {
            let g = read_graph(&graph)?;
            let ev = ctx.evaluator(&eval)?;
            let config = SievingConfig { alpha, epsilon, k };
            ctx.param("alpha", alpha);
            ctx.param("epsilon", epsilon);
            let r = g1_sieving(&g, config, ev)?;
            for w in &r.warnings {
                writeln!(ctx.err, "warning: {w}")?;
            }
            emit_selection(ctx, &r, json!({"sieving": config, "evaluator": ev}))?;
            Ok(0)
        }
        Command::Compare {
            graph,
            k,
            methods,
            runs,
            rng,
            alpha,
            epsilon,
        } => {
            let g = read_graph(&graph)?;
            let seed = ctx.rng("rng", rng)?;
            ctx.param("runs", runs);
            ctx.param("alpha", alpha);
            ctx.param("epsilon", epsilon);
            compare(ctx, &g, k, &methods, runs, seed, alpha, epsilon)
        }
    }
}

fn validate(ctx: &mut Ctx<'_>, path: &str) -> Result<i32> {
    let g = read_graph(path)?;
    let report = g.validate();
    let rows = report
        .violations
        .iter()
        .map(|v| {
            let value = serde_json::to_value(v).expect("serializable");
            vec![
                value["kind"].as_str().unwrap_or_default().to_string(),
                value.to_string(),
            ]
        })
        .collect();
    let json = json!({
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "valid": report.is_empty(),
        "violations": report.violations,
    });
    ctx.emit(json, &["kind", "detail"], rows)?;
    if report.is_empty() {
        Ok(0)
    } else {
        writeln!(ctx.err, "{report}")?;
        Ok(1)
    }
}

fn gen(ctx: &mut Ctx<'_>, a: GenArgs) -> Result<()> {
    let g = if a.uislt {
        let params = match (&a.alphas, &a.betas, a.n) {
            (Some(al), Some(be), _) => UisltParams::new(parse_real_list(al)?, parse_real_list(be)?)?,
            (None, None, Some(n)) => random_uislt_params(n, ctx.rng("rng", a.rng)?),
            _ => return Err(Error::InvalidArgument("--uislt needs --alphas and --betas, or --n".into())),
        };
        build_uislt(&params)?
    } else if a.degree {
        let adj = if let Some(path) = &a.adjacency {
            let text = read_input(path)?;
            if a.matrix {
                Adjacency::from_matrix(&parse_matrix(&text)?)?
            } else {
                let (n, edges) = parse_edge_list(&text)?;
                Adjacency::from_edges(n, &edges)?
            }
        } else if let Some(n) = a.ba {
            ctx.param("m", a.m);
            barabasi_albert(n, a.m, ctx.rng("rng", a.rng)?)?
        } else if let Some(n) = a.tree {
            random_tree(n, ctx.rng("rng", a.rng)?)
        } else {
            return Err(Error::InvalidArgument("--degree needs --adjacency, --ba or --tree".into()));
        };
        normalize_adjacency(&adj)?
    } else if let Some(n) = a.random {
        if !(0.0..=1.0).contains(&a.edge_prob) {
            return Err(Error::InvalidArgument(format!("edge probability {} outside [0, 1]", a.edge_prob)));
        }
        ctx.param("edge_prob", a.edge_prob);
        random_lt_graph(n, a.edge_prob, ctx.rng("rng", a.rng)?)
    } else {
        return Err(Error::InvalidArgument("choose one of --uislt, --degree, --random".into()));
    };
    let text = manifest_comment(&ctx.manifest) + &write_graph_tsv(&g);
    write_output(ctx, &a.output, &text)
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<u8>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(k, l)| {
            l.split_whitespace()
                .map(|t| match t {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    _ => Err(Error::Parse {
                        line: k + 1,
                        msg: format!("expected 0 or 1, found {t:?}"),
                    }),
                })
                .collect()
        })
        .collect()
}

fn closed_form(ctx: &mut Ctx<'_>, a: ClosedFormArgs) -> Result<i32> {
    let need = |v: &Option<String>, name: &str| -> Result<Vec<f64>> {
        parse_real_list(v.as_deref().ok_or_else(|| Error::InvalidArgument(format!("missing --{name}")))?)
    };
    if a.uislt {
        let params = UisltParams::new(need(&a.alphas, "alphas")?, need(&a.betas, "betas")?)?;
        let a0 = parse_seeds(&a.seeds, params.len())?;
        let ev = sigma_uislt(&params, &a0)?;
        let mut rows = vec![vec!["sigma".into(), "".into(), f(ev.sigma)], vec!["alpha_seed".into(), "".into(), f(ev.alpha_seed)]];
        rows.extend(ev.terms.iter().enumerate().map(|(m, &h)| vec!["h".into(), m.to_string(), f(h)]));
        ctx.emit(json!({"model": "uislt", "seeds": a0, "evaluation": ev}), &["field", "m", "value"], rows)?;
    } else {
        let (model, sigma) = if a.uslt {
            let betas = need(&a.betas, "betas")?;
            let a0 = parse_seeds(&a.seeds, betas.len())?;
            ("uslt", sigma_uslt(&betas, &a0)?)
        } else if a.uilt {
            let alphas = need(&a.alphas, "alphas")?;
            let a0 = parse_seeds(&a.seeds, alphas.len())?;
            ("uilt", sigma_uilt(&alphas, &a0)?)
        } else {
            return Err(Error::InvalidArgument("choose one of --uislt, --uslt, --uilt".into()));
        };
        let rows = vec![vec!["sigma".into(), "".into(), f(sigma)]];
        ctx.emit(json!({"model": model, "seeds": seeds_arg(&a.seeds), "sigma": sigma}), &["field", "m", "value"], rows)?;
    }
    Ok(0)
}

fn emit_rank(ctx: &mut Ctx<'_>, list: &RankList) -> Result<()> {
    let rows = list
        .entries
        .iter()
        .enumerate()
        .map(|(r, &(v, s))| vec![(r + 1).to_string(), v.to_string(), f(s)])
        .collect();
    ctx.emit(serde_json::to_value(list).expect("serializable"), &["rank", "node", "score"], rows)
}

fn emit_selection(ctx: &mut Ctx<'_>, r: &SelectionResult, config: Value) -> Result<()> {
    let rows = r
        .per_round
        .iter()
        .enumerate()
        .map(|(t, rr)| vec![(t + 1).to_string(), rr.picked.to_string(), rr.pool_size.to_string(), f(rr.gain)])
        .collect();
    let json = json!({
        "chosen": r.chosen,
        "sigma": r.sigma,
        "per_round": r.per_round,
        "evaluator_calls": r.evaluator_calls,
        "warnings": r.warnings,
        "config": config,
    });
    ctx.emit(json, &["round", "picked", "pool_size", "gain"], rows)
}

#[allow(clippy::too_many_arguments)]
fn compare(
    ctx: &mut Ctx<'_>,
    g: &InfluenceGraph,
    k: usize,
    methods: &str,
    runs: usize,
    seed: u64,
    alpha: f64,
    epsilon: f64,
) -> Result<i32> {
    let methods: Vec<&str> = methods.split(',').map(str::trim).filter(|m| !m.is_empty()).collect();
    if methods.is_empty() {
        return Err(Error::InvalidArgument("no methods given".into()));
    }
    let ev = Evaluator::monte_carlo(runs, seed);
    let eval_seed = derive_seed(seed, COMPARE_EVAL_TAG);
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &method in &methods {
        let order: Vec<usize> = match method {
            "greedy" => greedy(g, k, ev)?.chosen_order(),
            "sieve" => {
                let r = g1_sieving(g, SievingConfig { alpha, epsilon, k }, ev)?;
                for w in &r.warnings {
                    writeln!(ctx.err, "warning: sieve: {w}")?;
                }
                r.chosen_order()
            }
            "pagerank" => pagerank(&make_transition_matrix(g)?, DEFAULT_DAMPING, DEFAULT_TOL, DEFAULT_MAX_ITER)?
                .nodes()
                .take(k)
                .collect(),
            "degree" => rank_by_degree(g).nodes().take(k).collect(),
            "wdegree" => rank_by_weighted_outdegree(g).nodes().take(k).collect(),
            other => return Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        };
        if order.len() < k {
            return Err(Error::InvalidArgument(format!("K = {k} exceeds what {method} can provide")));
        }
        for kk in 1..=k {
            let set = SeedSet::new(order[..kk].iter().copied());
            let est = estimate_sigma(g, &set, runs, eval_seed)?;
            rows.push(vec![kk.to_string(), method.to_string(), f(est.mean), f(est.half_width)]);
            json_rows.push(json!({"k": kk, "method": method, "sigma": est.mean, "half_width": est.half_width, "set": set}));
        }
    }
    ctx.emit(json!({ "rows": json_rows }), &["K", "method", "sigma", "half_width"], rows)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("lt-influence").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = run_str(&["frobnicate"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("compare"));
    }

    #[test]
    fn missing_file_is_user_error() {
        let (code, _, err) = run_str(&["validate", "/nonexistent/graph.tsv"]);
        assert_eq!(code, 1);
        assert!(err.contains("cannot read"));
    }

    #[test]
    fn closed_form_uislt_json() {
        let (code, out, _) = run_str(&["closed-form", "--uislt", "--alphas", "0.5,0.5", "--betas", "1,1", "--seeds", "0"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["evaluation"]["sigma"], 1.5);
        assert_eq!(v["result"]["evaluation"]["terms"][0], 1.0);
        assert!(v["manifest"]["version"].is_string());
    }

    #[test]
    fn infeasible_params_exit_one() {
        let (code, _, _) = run_str(&["closed-form", "--uislt", "--alphas", "0.9,0.9", "--betas", "2,2", "--seeds", "0"]);
        assert_eq!(code, 1);
    }
}
