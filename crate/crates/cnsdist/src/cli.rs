//! Command-line front end: one binary with `generate`, `cns`, and
//! `evaluate` subcommands.
//!
//! Every run is reproducible: all randomness flows from an explicit
//! `--seed` (omitting it where randomness is needed is an error, never a
//! time-based fallback), and every artifact embeds the resolved
//! configuration that produced it.

use crate::engine::{
    class_distributions_analytic, empirical_class_counts_q, empirical_class_distributions,
    AnalyticMode, ClassCondDistributions, EngineError,
};
use crate::eval::{evaluate, EvalError, EvalMode, EvalOptions, IndexSpec, SplitSpec};
use crate::graph::{load_edge_list, Graph, GraphError, ParseOptions};
use crate::indices::{IndexError, IndexKind};
use crate::io::{
    artifact_json, render_eval_table, write_edge_list, write_pmf_csv, IoError,
};
use crate::models::{BaModel, ModelError, ModelKind, ProbModel, RingModel};
use crate::pmf::{DistError, Pmf};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write as _};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Errors grouped by exit code: usage 2, input 3, numerical 4.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NoConvergence { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DistError> for CliError {
    fn from(e: DistError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<IndexError> for CliError {
    fn from(e: IndexError) -> Self {
        match e {
            IndexError::KatzDiverged | IndexError::KatzStalled => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Index(inner) => inner.into(),
            EvalError::Dist(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// A model specification as it appears in `--config` files and sidecars.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDescriptor {
    pub kind: ModelKind,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0: Option<u32>,
}

impl ModelDescriptor {
    pub fn build(&self) -> Result<ProbModel, CliError> {
        let kind = self.kind;
        let need_m = || {
            self.m
                .ok_or_else(|| usage(format!("model {kind} needs --m")))
        };
        let need_p = || {
            self.p
                .ok_or_else(|| usage(format!("model {kind} needs --p")))
        };
        self.reject_unused()?;
        let model = match kind {
            ModelKind::Rrl => RingModel::rrl(self.n, need_m()?)?.into(),
            ModelKind::Mrl => RingModel::mrl(self.n, need_m()?, need_p()?)?.into(),
            ModelKind::Er => match (self.k, self.eta) {
                (Some(_), Some(_)) => {
                    return Err(usage("model er takes --k or --eta, not both"))
                }
                (Some(k), None) => RingModel::er_from_mean_degree(self.n, k)?.into(),
                (None, Some(eta)) => RingModel::er(self.n, eta)?.into(),
                (None, None) => return Err(usage("model er needs --k or --eta")),
            },
            ModelKind::Ws => RingModel::ws(self.n, need_m()?, need_p()?)?.into(),
            ModelKind::Nw => RingModel::nw(self.n, need_m()?, need_p()?)?.into(),
            ModelKind::Unified => {
                let eta = self
                    .eta
                    .ok_or_else(|| usage("model unified needs --eta"))?;
                let alpha = self
                    .alpha
                    .ok_or_else(|| usage("model unified needs --alpha"))?;
                RingModel::unified(self.n, need_m()?, eta, alpha)?.into()
            }
            ModelKind::Ba => {
                let m = need_m()?;
                BaModel::new(self.n, m, self.m0.unwrap_or(m))?.into()
            }
        };
        Ok(model)
    }

    /// Parameters that a kind does not consume are rejected rather than
    /// silently ignored.
    fn reject_unused(&self) -> Result<(), CliError> {
        let allowed: &[&str] = match self.kind {
            ModelKind::Rrl => &["m"],
            ModelKind::Mrl | ModelKind::Ws | ModelKind::Nw => &["m", "p"],
            ModelKind::Er => &["k", "eta"],
            ModelKind::Unified => &["m", "eta", "alpha"],
            ModelKind::Ba => &["m", "m0"],
        };
        let given = [
            ("m", self.m.is_some()),
            ("p", self.p.is_some()),
            ("k", self.k.is_some()),
            ("eta", self.eta.is_some()),
            ("alpha", self.alpha.is_some()),
            ("m0", self.m0.is_some()),
        ];
        for (name, present) in given {
            if present && !allowed.contains(&name) {
                return Err(usage(format!(
                    "model {} does not take --{name}",
                    self.kind
                )));
            }
        }
        Ok(())
    }
}

#[derive(Args, Debug, Clone, Default)]
struct ModelArgs {
    /// Model kind: rrl | mrl | er | ws | nw | unified | ba.
    #[arg(long)]
    model: Option<String>,
    /// Node count.
    #[arg(long)]
    n: Option<u32>,
    /// Ring coupling range, or links per arriving node (ba).
    #[arg(long)]
    m: Option<u32>,
    /// Rewiring (ws), deletion (mrl), or addition (nw) probability.
    #[arg(long)]
    p: Option<f64>,
    /// Target mean degree (er).
    #[arg(long)]
    k: Option<f64>,
    /// Link probability: er, or near-link probability for unified.
    #[arg(long)]
    eta: Option<f64>,
    /// Far-link probability (unified).
    #[arg(long)]
    alpha: Option<f64>,
    /// Seed-clique size (ba); defaults to m.
    #[arg(long)]
    m0: Option<u32>,
    /// JSON model descriptor file; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ModelArgs {
    fn descriptor(&self) -> Result<Option<ModelDescriptor>, CliError> {
        let from_file: Option<ModelDescriptor> = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                Some(serde_json::from_str(&text).map_err(|e| {
                    CliError::Input(format!("{}: {e}", path.display()))
                })?)
            }
            None => None,
        };
        let kind = match (&self.model, &from_file) {
            (Some(s), _) => Some(
                s.parse::<ModelKind>()
                    .map_err(|e| usage(e.to_string()))?,
            ),
            (None, Some(d)) => Some(d.kind),
            (None, None) => None,
        };
        let Some(kind) = kind else {
            if self.n.is_some() || self.m.is_some() {
                return Err(usage("model parameters given without --model"));
            }
            return Ok(None);
        };
        let n = self
            .n
            .or(from_file.as_ref().map(|d| d.n))
            .ok_or_else(|| usage("--n is required with --model"))?;
        let pick_u32 = |flag: Option<u32>, file: fn(&ModelDescriptor) -> Option<u32>| {
            flag.or_else(|| from_file.as_ref().and_then(file))
        };
        let pick_f64 = |flag: Option<f64>, file: fn(&ModelDescriptor) -> Option<f64>| {
            flag.or_else(|| from_file.as_ref().and_then(file))
        };
        Ok(Some(ModelDescriptor {
            kind,
            n,
            m: pick_u32(self.m, |d| d.m),
            p: pick_f64(self.p, |d| d.p),
            k: pick_f64(self.k, |d| d.k),
            eta: pick_f64(self.eta, |d| d.eta),
            alpha: pick_f64(self.alpha, |d| d.alpha),
            m0: pick_u32(self.m0, |d| d.m0),
        }))
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "cnsdist",
    version,
    about = "Common-neighbor-size distributions of networks, analytic and empirical"
)]
struct Cli {
    /// Worker threads; results are identical for any value.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a graph from a model and write it as an edge list.
    Generate(GenerateArgs),
    /// Compute class-conditional CNS distributions.
    Cns(CnsArgs),
    /// Run link-prediction evaluation, experimental and theoretical.
    Evaluate(EvaluateArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// RNG seed; required for every model except rrl.
    #[arg(long)]
    seed: Option<u64>,
    /// Edge-list output path; a `.json` sidecar lands next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CnsArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Edge-list input (empirical mode).
    #[arg(long)]
    input: Option<PathBuf>,
    /// analytic | empirical | both; inferred from the source if omitted.
    #[arg(long)]
    mode: Option<String>,
    /// Node-set size; 2 compares node pairs.
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Monte Carlo set draws for analytic q > 2.
    #[arg(long, default_value_t = 100_000)]
    sample_sets: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for p_c.csv, p_d.csv, p_a.csv and summary.json.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Edge-list input; alternatively give a model to sample from.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated indices: cn, ra, aa, lp, katz, katz-shifted.
    #[arg(long, default_value = "cn,ra,aa,lp,katz")]
    indices: String,
    /// Fraction of links removed into each test set.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Number of independent splits.
    #[arg(long, default_value_t = 100)]
    reps: usize,
    /// Sampled score comparisons per AUC estimate.
    #[arg(long, default_value_t = 10_000)]
    comparisons: usize,
    /// Ranking cutoff for precision; defaults to the test-set size.
    #[arg(long)]
    top_l: Option<usize>,
    /// Weight of the 3-step term in the local-path index.
    #[arg(long)]
    phi_lp: Option<f64>,
    /// Attenuation of the Katz index.
    #[arg(long)]
    phi_katz: Option<f64>,
    /// Skip splitting entirely; report theoretical values only.
    #[arg(long)]
    theory_only: bool,
    /// Skip the theoretical side.
    #[arg(long, conflicts_with = "theory_only")]
    experiment_only: bool,
    /// Write the JSON report here (the text table always prints).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses argv and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 on usage errors, 0 for --help/--version
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    // first initialization wins; later calls in the same process no-op
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global();
    let threads = cli.threads;
    let result = match cli.command {
        Command::Generate(args) => run_generate(args, threads),
        Command::Cns(args) => run_cns(args, threads),
        Command::Evaluate(args) => run_evaluate(args, threads),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn require_seed(seed: Option<u64>, why: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| usage(format!("--seed is required ({why})")))
}

fn create_file(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| {
        CliError::Input(format!("{}: {e}", path.display()))
    })?))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut w = create_file(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn run_generate(args: GenerateArgs, threads: usize) -> Result<(), CliError> {
    let desc = args
        .model
        .descriptor()?
        .ok_or_else(|| usage("generate needs --model or --config"))?;
    let model = desc.build()?;
    let seed = if model.kind() == ModelKind::Rrl {
        args.seed.unwrap_or(0)
    } else {
        require_seed(args.seed, "sampling is random")?
    };
    let graph = model.sample(seed);
    let config = json!({
        "command": "generate",
        "model": desc,
        "seed": seed,
        "threads": threads,
    });
    let comment = format!("config: {config}");
    let mut w = create_file(&args.out)?;
    write_edge_list(&mut w, &graph, std::slice::from_ref(&comment))?;
    w.flush()?;
    let sidecar = sidecar_path(&args.out);
    write_json(
        &sidecar,
        &artifact_json(
            "generate-sidecar",
            config,
            json!({
                "nodes": graph.node_count(),
                "edges": graph.edge_count(),
                "mean_degree": graph.mean_degree(),
                "expected_mean_degree": model.expected_mean_degree(),
            }),
        ),
    )?;
    println!(
        "wrote {} edges to {} (sidecar {})",
        graph.edge_count(),
        args.out.display(),
        sidecar.display()
    );
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CnsMode {
    Analytic,
    Empirical,
    Both,
}

impl CnsMode {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "analytic" => Ok(CnsMode::Analytic),
            "empirical" => Ok(CnsMode::Empirical),
            "both" => Ok(CnsMode::Both),
            other => Err(usage(format!(
                "unknown mode `{other}`; valid: analytic, empirical, both"
            ))),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            CnsMode::Analytic => "analytic",
            CnsMode::Empirical => "empirical",
            CnsMode::Both => "both",
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let loaded = load_edge_list(BufReader::new(file), &ParseOptions::default())?;
    Ok(loaded.graph)
}

fn run_cns(args: CnsArgs, threads: usize) -> Result<(), CliError> {
    let desc = args.model.descriptor()?;
    let mode = match (&args.mode, &desc, &args.input) {
        (Some(s), _, _) => CnsMode::parse(s)?,
        (None, Some(_), None) => CnsMode::Analytic,
        (None, None, Some(_)) => CnsMode::Empirical,
        (None, Some(_), Some(_)) => {
            return Err(usage("both --model and --input given; pick one source"))
        }
        (None, None, None) => return Err(usage("cns needs --model/--config or --input")),
    };
    // exactly one input source per run
    match mode {
        CnsMode::Analytic | CnsMode::Both => {
            if desc.is_none() {
                return Err(usage(format!("{} mode needs a model", mode.as_str())));
            }
            if args.input.is_some() {
                return Err(usage(format!(
                    "{} mode samples its own graph; drop --input",
                    mode.as_str()
                )));
            }
        }
        CnsMode::Empirical => {
            if args.input.is_none() {
                return Err(usage("empirical mode needs --input"));
            }
            if desc.is_some() {
                return Err(usage("empirical mode reads a file; drop the model flags"));
            }
        }
    }

    let needs_sampling_seed = match mode {
        CnsMode::Both => true,                     // samples a graph
        CnsMode::Analytic => args.q > 2,           // Monte Carlo sets
        CnsMode::Empirical => false,
    };
    let seed = if needs_sampling_seed {
        Some(require_seed(args.seed, "this mode draws random samples")?)
    } else {
        args.seed
    };

    let analytic = match (mode, &desc) {
        (CnsMode::Analytic | CnsMode::Both, Some(d)) => {
            let model = d.build()?;
            let m = if args.q == 2 {
                AnalyticMode::Exact
            } else {
                AnalyticMode::Sampled {
                    sample_count: args.sample_sets,
                    seed: seed.expect("checked above"),
                }
            };
            Some(class_distributions_analytic(&model, args.q, m)?)
        }
        _ => None,
    };

    let empirical = match mode {
        CnsMode::Empirical => {
            let graph = load_graph(args.input.as_ref().expect("checked above"))?;
            Some(empirical_distributions(&graph, args.q)?)
        }
        CnsMode::Both => {
            let model = desc.as_ref().expect("checked above").build()?;
            let graph = model.sample(seed.expect("checked above"));
            Some(empirical_distributions(&graph, args.q)?)
        }
        CnsMode::Analytic => None,
    };

    let config = json!({
        "command": "cns",
        "mode": mode.as_str(),
        "model": desc,
        "input": args.input.as_ref().map(|p| p.display().to_string()),
        "q": args.q,
        "sample_sets": if mode != CnsMode::Empirical && args.q > 2 {
            Some(args.sample_sets)
        } else {
            None
        },
        "seed": seed,
        "threads": threads,
    });
    let comment = format!("config: {config}");

    fs::create_dir_all(&args.out_dir)?;
    let primary = analytic.as_ref().or(empirical.as_ref()).expect("one mode ran");
    write_class_csvs(&args.out_dir, "", primary, &comment)?;
    if mode == CnsMode::Both {
        write_class_csvs(
            &args.out_dir,
            "empirical_",
            empirical.as_ref().expect("both mode"),
            &comment,
        )?;
    }

    let mut result = json!({
        "summary": summarize(primary),
    });
    if let (Some(a), Some(e)) = (&analytic, &empirical) {
        result["empirical_summary"] = summarize(e);
        result["total_variation"] = json!({
            "p_c": tv_gap(&a.p_c, &e.p_c),
            "p_d": tv_gap(&a.p_d, &e.p_d),
            "p_a": a.p_a.total_variation(&e.p_a),
        });
    }
    let summary_path = args.out_dir.join("summary.json");
    write_json(&summary_path, &artifact_json("cns-summary", config, result))?;
    let s = summarize(primary);
    println!(
        "chi_c={} mixture_residual={} (files in {})",
        s["chi_c"], s["mixture_residual"],
        args.out_dir.display()
    );
    Ok(())
}

fn empirical_distributions(graph: &Graph, q: usize) -> Result<ClassCondDistributions, CliError> {
    if q == 2 {
        Ok(empirical_class_distributions(graph)?)
    } else {
        Ok(empirical_class_counts_q(graph, q)?.to_distributions()?)
    }
}

fn write_class_csvs(
    dir: &Path,
    prefix: &str,
    dists: &ClassCondDistributions,
    comment: &String,
) -> Result<(), CliError> {
    let parts: [(&str, Option<&Pmf>); 3] = [
        ("p_c", dists.p_c.as_ref()),
        ("p_d", dists.p_d.as_ref()),
        ("p_a", Some(&dists.p_a)),
    ];
    for (name, pmf) in parts {
        let Some(pmf) = pmf else { continue };
        let path = dir.join(format!("{prefix}{name}.csv"));
        let mut w = create_file(&path)?;
        write_pmf_csv(&mut w, pmf, std::slice::from_ref(comment))?;
        w.flush()?;
    }
    Ok(())
}

fn summarize(d: &ClassCondDistributions) -> serde_json::Value {
    let stats = |p: &Pmf| json!({ "mean": p.mean(), "median": p.median() });
    json!({
        "chi_c": d.chi_c,
        "mixture_residual": d.mixture_residual(),
        "p_c": d.p_c.as_ref().map(stats),
        "p_d": d.p_d.as_ref().map(stats),
        "p_a": stats(&d.p_a),
    })
}

fn tv_gap(a: &Option<Pmf>, b: &Option<Pmf>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.total_variation(b)),
        _ => None,
    }
}

fn run_evaluate(args: EvaluateArgs, threads: usize) -> Result<(), CliError> {
    let desc = args.model.descriptor()?;
    let mut sample_seed = None;
    let graph = match (&args.input, &desc) {
        (Some(_), Some(_)) => {
            return Err(usage("both --model and --input given; pick one source"))
        }
        (Some(path), None) => load_graph(path)?,
        (None, Some(d)) => {
            let seed = require_seed(args.seed, "sampling the model graph")?;
            sample_seed = Some(seed);
            d.build()?.sample(seed)
        }
        (None, None) => return Err(usage("evaluate needs --input or --model")),
    };

    let mut indices = Vec::new();
    for name in args.indices.split(',') {
        let name = name.trim();
        if name.is_empty() {
            continue;
        }
        let mut spec: IndexSpec = name.parse().map_err(|_| {
            usage(format!(
                "unknown index `{name}`; valid: cn, ra, aa, lp, katz, katz-shifted"
            ))
        })?;
        spec.phi = match spec.kind {
            IndexKind::Lp => args.phi_lp,
            IndexKind::Katz => args.phi_katz,
            _ => None,
        };
        if !indices.contains(&spec) {
            indices.push(spec);
        }
    }

    let mode = if args.theory_only {
        EvalMode::TheoryOnly
    } else if args.experiment_only {
        EvalMode::ExperimentOnly
    } else {
        EvalMode::Both
    };
    let seed = if mode == EvalMode::TheoryOnly {
        args.seed.unwrap_or(0)
    } else {
        require_seed(args.seed, "splitting links is random")?
    };

    let opts = EvalOptions {
        indices,
        split: SplitSpec {
            epsilon: args.eps,
            seed,
            repetitions: args.reps,
        },
        n_comparisons: args.comparisons,
        top_l: args.top_l,
        mode,
    };
    let report = evaluate(&graph, &opts)?;
    print!("{}", render_eval_table(&report));

    if let Some(out) = &args.out {
        let config = json!({
            "command": "evaluate",
            "input": args.input.as_ref().map(|p| p.display().to_string()),
            "model": desc,
            "sample_seed": sample_seed,
            "indices": opts.indices.iter().map(|s| s.label()).collect::<Vec<_>>(),
            "eps": args.eps,
            "reps": args.reps,
            "comparisons": args.comparisons,
            "top_l": args.top_l,
            "phi_lp": args.phi_lp,
            "phi_katz": args.phi_katz,
            "mode": mode,
            "seed": seed,
            "threads": threads,
        });
        write_json(
            out,
            &artifact_json("eval-report", config, serde_json::to_value(&report)?),
        )?;
        println!("report written to {}", out.display());
    }
    Ok(())
}
