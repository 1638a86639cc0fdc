//! `mgraph`: batch front end for generation, analysis, property checks,
//! predictions and distance oracles.
//!
//! Reports go to stdout as JSON and embed the [`RunConfig`] that produced
//! them; `mgraph replay` re-executes that config.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::bail;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use mgraph::algos::{self, AlgoResult, Params};
use mgraph::genmodel::{self, ModelKind, ModelSpec, WeightMode};
use mgraph::graph::{load_edge_list, save_edge_list};
use mgraph::oracle::{self, HubLabeling};
use mgraph::properties::{self, DegreeParams, DevParams, TouchParams, UntouchParams};
use mgraph::{metrics, theory, Graph};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "mgraph", version, about = "Power-law graph workbench")]
struct Cli {
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true, env = "MGRAPH_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// Everything that determines a run's output. Thread count is left out
/// because results do not depend on it.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunConfig {
    #[serde(flatten)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "args", rename_all = "kebab-case")]
enum Command {
    /// Sample a random graph and keep its giant component.
    Generate(GenerateArgs),
    /// Run a diameter, radius or closeness algorithm.
    Analyze(AnalyzeArgs),
    /// Check one of the four neighborhood-growth properties.
    Verify(VerifyArgs),
    /// Asymptotic predictions for a power-law exponent.
    Predict(PredictArgs),
    /// Build, query or summarize a hub-label distance oracle.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Degree and distance statistics of a graph.
    Stats(StatsArgs),
    /// Re-run the config embedded in a report.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_model)]
    model: ModelKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// deterministic-quantile or iid-sample.
    #[arg(long, default_value = "deterministic-quantile", value_parser = parse_weight_mode)]
    weight_mode: WeightMode,
    /// Edge-list path; the sidecar is written to `<out>.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct GraphInput {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Restrict to the largest connected component first.
    #[arg(long)]
    giant: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct AnalyzeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphInput,
    /// Registered algorithm name, or `all`.
    #[arg(long)]
    algo: String,
    #[arg(long)]
    k: Option<usize>,
    /// Start vertex (file label) for 2-Sweep and iFub.
    #[arg(long)]
    start: Option<u64>,
    #[arg(long)]
    max_degree_start: bool,
    #[arg(long, default_value_t = 10)]
    initial_k: usize,
    #[arg(long, default_value_t = 5)]
    hub_period: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report zero wall times so that outputs compare byte for byte.
    #[arg(long)]
    no_timing: bool,
    /// Prefix for the comparison-table CSV.
    #[arg(long)]
    out_prefix: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphInput,
    /// 1 dev, 2 touch, 3 untouch, 4 degree.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    property: u8,
    #[arg(long, default_value_t = 0.5)]
    x: f64,
    #[arg(long, default_value_t = 0.6)]
    y: f64,
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    /// Sampled pairs for property 2.
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    /// Source (file label) for property 3; a seeded random vertex by default.
    #[arg(long)]
    source: Option<u64>,
    /// Sampled targets for property 3; min(n, 10000) by default.
    #[arg(long)]
    targets: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    z_resolution: f64,
    /// Power-law exponent for property 4.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Prefix for the series CSV.
    #[arg(long)]
    out_prefix: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct PredictArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
enum OracleCommand {
    /// Build labels for every vertex of a graph.
    Build {
        #[arg(long)]
        input: PathBuf,
        /// Output label file.
        #[arg(long)]
        labels: PathBuf,
    },
    /// Exact distances for pairs of dense vertex ids.
    Query {
        #[arg(long)]
        labels: PathBuf,
        /// Vertex ids, read as consecutive `s t` pairs.
        #[arg(required = true, num_args = 2..)]
        vertices: Vec<u32>,
    },
    /// Label size statistics.
    Stats {
        #[arg(long)]
        labels: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct StatsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphInput,
    /// Also compute diameter, radius, average distance and C (needs a connected graph).
    #[arg(long)]
    distances: bool,
    /// Source sample for the average distance; min(n, 1000) by default.
    #[arg(long)]
    sample: Option<usize>,
    /// Exponent x for the τ table, measured d̃_avg and the tail constant.
    #[arg(long)]
    tau_x: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Prefix for the τ table CSV.
    #[arg(long)]
    out_prefix: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct ReplayArgs {
    /// A JSON report written by any other subcommand.
    report: PathBuf,
}

/// A caller mistake detected by the front end itself.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: mgraph::Error| e.to_string())
}

fn parse_weight_mode(s: &str) -> Result<WeightMode, String> {
    s.parse().map_err(|e: mgraph::Error| e.to_string())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<mgraph::Error>() {
            return if e.is_usage() { 2 } else { 1 };
        }
        if cause.is::<Usage>() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    let config = match cli.command {
        Command::Replay(args) => load_config(&args.report)?,
        command => RunConfig { command },
    };
    let report = execute(&config)?;
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    Ok(())
}

fn load_config(path: &Path) -> anyhow::Result<RunConfig> {
    let file = File::open(path).map_err(|e| mgraph::Error::Io { path: path.into(), source: e })?;
    let mut report: Value =
        serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let config = report
        .get_mut("config")
        .map(Value::take)
        .ok_or_else(|| usage(format!("{}: no embedded config", path.display())))?;
    let config: RunConfig = serde_json::from_value(config).map_err(|e| usage(format!("embedded config: {e}")))?;
    if matches!(config.command, Command::Replay(_)) {
        return Err(usage("embedded config is itself a replay"));
    }
    Ok(config)
}

fn execute(config: &RunConfig) -> anyhow::Result<Value> {
    let body = match &config.command {
        Command::Generate(a) => cmd_generate(a)?,
        Command::Analyze(a) => cmd_analyze(a)?,
        Command::Verify(a) => cmd_verify(a)?,
        Command::Predict(a) => cmd_predict(a)?,
        Command::Oracle(a) => cmd_oracle(a)?,
        Command::Stats(a) => cmd_stats(a)?,
        Command::Replay(_) => unreachable!("resolved before dispatch"),
    };
    let mut report = json!({ "tool_version": VERSION, "config": config });
    report.as_object_mut().unwrap().extend(body.as_object().expect("bodies are objects").clone());
    Ok(report)
}

/// A loaded graph and the file label of each dense vertex id.
struct Loaded {
    graph: Graph,
    labels: Vec<u64>,
}

impl Loaded {
    fn open(input: &GraphInput) -> anyhow::Result<Self> {
        let (graph, labels) = load_edge_list(&input.input)?;
        if !input.giant {
            return Ok(Loaded { graph, labels });
        }
        let (giant, map) = graph.giant_component();
        let mut kept = vec![0u64; giant.n()];
        for (old, &new) in map.iter().enumerate() {
            if new != mgraph::UNREACHED {
                kept[new as usize] = labels[old];
            }
        }
        Ok(Loaded { graph: giant, labels: kept })
    }

    fn id_of(&self, label: u64) -> anyhow::Result<u32> {
        self.labels
            .binary_search(&label)
            .map(|i| i as u32)
            .map_err(|_| usage(format!("vertex {label} not in graph")))
    }

    fn label(&self, v: u32) -> u64 {
        self.labels[v as usize]
    }

    fn summary(&self) -> Value {
        json!({ "n": self.graph.n(), "m": self.graph.m() })
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let file = File::create(path).map_err(|e| mgraph::Error::Io { path: path.into(), source: e })?;
    Ok(BufWriter::new(file))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn degree_histogram(g: &Graph) -> Vec<(usize, u64)> {
    let mut hist = std::collections::BTreeMap::new();
    for d in g.degrees() {
        *hist.entry(d).or_insert(0u64) += 1;
    }
    hist.into_iter().collect()
}

fn cmd_generate(a: &GenerateArgs) -> anyhow::Result<Value> {
    let spec = ModelSpec { kind: a.model, n: a.n, beta: a.beta, weight_mode: a.weight_mode, seed: a.seed };
    let gen = genmodel::generate(&spec)?;
    save_edge_list(&gen.graph, &a.out)?;
    let sidecar = json!({
        "tool_version": VERSION,
        "spec": spec,
        "giant": { "n": gen.graph.n(), "m": gen.graph.m() },
        "raw": { "n": gen.raw_n, "m": gen.raw_m },
        "degree_histogram": degree_histogram(&gen.graph),
    });
    let sidecar_path = with_suffix(&a.out, ".json");
    let mut w = create(&sidecar_path)?;
    serde_json::to_writer_pretty(&mut w, &sidecar)?;
    writeln!(w)?;
    w.flush()?;
    Ok(json!({
        "output": a.out,
        "sidecar": sidecar_path,
        "spec": spec,
        "giant": sidecar["giant"],
        "raw": sidecar["raw"],
    }))
}

/// Serializes a result with vertex ids translated to file labels.
fn labelled(r: &AlgoResult, g: &Loaded) -> Value {
    let mut v = serde_json::to_value(r).expect("results serialize");
    v["witnesses"] = json!(r.witnesses.iter().map(|&w| g.label(w)).collect::<Vec<_>>());
    if let Some(ranking) = &r.ranking {
        v["ranking"] = json!(ranking.iter().map(|&(w, f)| (g.label(w), f)).collect::<Vec<_>>());
    }
    if let Some(s) = r.params.start {
        v["params"]["start"] = json!(g.label(s));
    }
    v
}

fn cmd_analyze(a: &AnalyzeArgs) -> anyhow::Result<Value> {
    let chosen: Vec<&dyn algos::Algorithm> = if a.algo == "all" {
        algos::registry().to_vec()
    } else {
        vec![algos::algorithm(&a.algo).map_err(|e| {
            let names: Vec<_> = algos::registry().iter().map(|x| x.name()).collect();
            usage(format!("{e}; expected one of: all, {}", names.join(", ")))
        })?]
    };
    let g = Loaded::open(&a.graph)?;
    let params = Params {
        k: a.k,
        start: a.start.map(|s| g.id_of(s)).transpose()?,
        max_degree_start: a.max_degree_start,
        initial_k: a.initial_k,
        hub_period: a.hub_period,
        seed: a.seed,
    };
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for algo in &chosen {
        match algo.run(&g.graph, &params) {
            Ok(rs) => results.extend(rs.into_iter().map(|r| (algo.exact(), r))),
            // A single failure aborts a one-algorithm run but not the battery.
            Err(e) if chosen.len() == 1 => return Err(e.into()),
            Err(e) => failures.push(json!({ "algo": algo.name(), "error": e.to_string() })),
        }
    }
    if a.no_timing {
        for (_, r) in &mut results {
            r.wall_time_ms = 0.0;
        }
    }
    let mut body = json!({
        "graph": g.summary(),
        "results": results.iter().map(|(_, r)| labelled(r, &g)).collect::<Vec<_>>(),
    });
    if chosen.len() > 1 {
        let table = comparison(&results);
        if let Some(prefix) = &a.out_prefix {
            write_table_csv(&with_suffix(prefix, ".analyze.csv"), &table)?;
        }
        body["failures"] = json!(failures);
        body["exact_agree"] = json!(table.agree);
        body["table"] = json!(table.rows);
    }
    Ok(body)
}

#[derive(Serialize)]
struct Row {
    algo: String,
    measure: algos::Measure,
    exact: bool,
    value: u64,
    /// Distance from the exact value of the same measure, when known.
    gap: Option<i64>,
    bfs_count: u64,
    wall_time_ms: f64,
}

struct Comparison {
    rows: Vec<Row>,
    agree: bool,
}

fn comparison(results: &[(bool, AlgoResult)]) -> Comparison {
    let exact_value = |m: algos::Measure| results.iter().find(|(e, r)| *e && r.measure == m).map(|(_, r)| r.value);
    let agree = results
        .iter()
        .filter(|(e, _)| *e)
        .all(|(_, r)| exact_value(r.measure) == Some(r.value));
    let rows = results
        .iter()
        .map(|(exact, r)| Row {
            algo: r.algo.clone(),
            measure: r.measure,
            exact: *exact,
            value: r.value,
            gap: exact_value(r.measure).map(|x| x as i64 - r.value as i64),
            bfs_count: r.bfs_count,
            wall_time_ms: r.wall_time_ms,
        })
        .collect();
    Comparison { rows, agree }
}

fn write_table_csv(path: &Path, table: &Comparison) -> anyhow::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "algo,measure,exact,value,gap,bfs_count,wall_time_ms")?;
    for r in &table.rows {
        let measure = serde_json::to_value(r.measure)?;
        let gap = r.gap.map_or(String::new(), |g| g.to_string());
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.algo,
            measure.as_str().unwrap_or_default(),
            r.exact,
            r.value,
            gap,
            r.bfs_count,
            r.wall_time_ms
        )?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> anyhow::Result<Value> {
    let g = Loaded::open(&a.graph)?;
    let report = match a.property {
        1 => properties::verify_dev_with(&g.graph, &DevParams::new(a.x, a.eps))?,
        2 => properties::verify_touch_with(&g.graph, &TouchParams::new(a.x, a.y, a.pairs, a.seed))?,
        3 => {
            let source = a.source.map(|s| g.id_of(s)).transpose()?;
            let targets = a.targets.unwrap_or_else(|| g.graph.n().min(10_000));
            let p = UntouchParams::new(source, targets, a.z_resolution, a.seed);
            properties::verify_untouch_with(&g.graph, &p)?
        }
        4 => {
            let beta = a.beta.ok_or_else(|| usage("property 4 needs --beta"))?;
            properties::verify_degree_with(&g.graph, &DegreeParams::new(beta))?
        }
        p => bail!(Usage(format!("unknown property {p}"))),
    };
    if let Some(prefix) = &a.out_prefix {
        let path = with_suffix(prefix, &format!(".property{}.csv", a.property));
        let mut w = create(&path)?;
        report.series.write_csv(&mut w)?;
        w.flush()?;
    }
    Ok(json!({ "graph": g.summary(), "report": report }))
}

fn cmd_predict(a: &PredictArgs) -> anyhow::Result<Value> {
    Ok(json!({ "prediction": theory::predict_for_model(a.beta, a.n)? }))
}

fn cmd_oracle(a: &OracleCommand) -> anyhow::Result<Value> {
    match a {
        OracleCommand::Build { input, labels } => {
            let (g, _) = load_edge_list(input)?;
            let built = oracle::build_labels(&g, None)?;
            built.save(labels)?;
            Ok(json!({ "labels": labels, "stats": built.stats() }))
        }
        OracleCommand::Query { labels, vertices } => {
            if vertices.len() % 2 != 0 {
                return Err(usage("query takes vertex ids in pairs"));
            }
            let hl = HubLabeling::load(labels)?;
            let answers = vertices
                .chunks(2)
                .map(|p| {
                    let d = hl.query(p[0], p[1])?;
                    Ok(json!({ "s": p[0], "t": p[1], "distance": (d != mgraph::UNREACHED).then_some(d) }))
                })
                .collect::<mgraph::Result<Vec<_>>>()?;
            Ok(json!({ "queries": answers }))
        }
        OracleCommand::Stats { labels } => Ok(json!({ "stats": HubLabeling::load(labels)?.stats() })),
    }
}

fn cmd_stats(a: &StatsArgs) -> anyhow::Result<Value> {
    let g = Loaded::open(&a.graph)?;
    let graph = &g.graph;
    let (_, sizes) = graph.components();
    let degrees = graph.degrees();
    let mut body = json!({
        "graph": g.summary(),
        "components": sizes.len(),
        "largest_component": sizes.iter().max().copied().unwrap_or(0),
        "max_degree": degrees.iter().max().copied().unwrap_or(0),
        "mean_degree": if degrees.is_empty() { 0.0 } else { 2.0 * graph.m() as f64 / degrees.len() as f64 },
        "degree_histogram": degree_histogram(graph),
    });
    if a.distances {
        let (d, r) = algos::exact_sumsweep::exact_sumsweep(graph, &Params::default());
        let sample = a.sample.unwrap_or_else(|| metrics::default_sample_size(graph.n()));
        let avg = metrics::average_distance(graph, sample, a.seed)?;
        body["diameter"] = json!(d.value);
        body["radius"] = json!(r.value);
        body["average_distance"] = json!(avg);
        body["C"] = match metrics::constant_c(d.value as u32, avg.mean) {
            Ok(c) => json!(c),
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    if let Some(x) = a.tau_x {
        let grid = if (x - 0.5).abs() < 1e-12 { vec![x] } else { vec![x, 1.0 - x] };
        let table = metrics::tau_table(graph, &grid, None)?;
        body["tau"] = json!({
            "x": x,
            "d_avg": metrics::measured_d_avg(&table, x).ok(),
            "tail_fit": metrics::estimate_c_tail(&table, x).ok(),
        });
        if let Some(prefix) = &a.out_prefix {
            let mut w = create(&with_suffix(prefix, ".tau.csv"))?;
            table.write_csv(&mut w)?;
            w.flush()?;
        }
    }
    Ok(body)
}
