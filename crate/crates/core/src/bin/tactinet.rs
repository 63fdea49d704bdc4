use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use tracing_subscriber::EnvFilter;

use tactinet::io;
use tactinet::pipeline::{
    characterize_groups, parse_edge_list, run_pipeline, with_thread_budget, write_tables,
    PipelineConfig,
};
use tactinet::pitch::{ingest_events, summarize_sample, IngestConfig, PitchGrid};
use tactinet::scoremodel::{self, optimize_xi, rolling_cis, CiConfig, XiConfig};
use tactinet::simbench::{generate_scenario, run_replications, BenchmarkSummary, ScenarioSpec};
use tactinet::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tactinet",
    version,
    about = "Cluster samples of passing networks and model style effects on goals"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TACTINET_THREADS")]
    threads: Option<usize>,
    /// Print progress events (same as RUST_LOG=info).
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one zone network per match and team from an events CSV.
    Ingest(IngestArgs),
    /// Preprocess, detect communities, and merge a network sample.
    Cluster(ClusterArgs),
    /// Run the synthetic two-group benchmark against the naive baseline.
    Simulate(SimulateArgs),
    /// Rolling confidence intervals for the style effect on goals.
    FitScores(FitScoresArgs),
    /// Per-group co-membership tables from partitions and a grouping.
    Characterize(CharacterizeArgs),
    /// Descriptive statistics of a network sample.
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Events CSV `match_id,team_id,seq,category,x,y`.
    #[arg(long)]
    events: PathBuf,
    /// Output sample CSV; the manifest goes next to it as `.json`.
    #[arg(long)]
    out: PathBuf,
    /// Coordinates are absolute; mirror the away team.
    #[arg(long)]
    flip_away: bool,
    #[arg(long, default_value_t = 3)]
    columns: usize,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long)]
    mirror_y: bool,
}

#[derive(Args)]
struct ClusterArgs {
    /// JSON config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sample CSV.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Manifest JSON (default: input with `.json` extension).
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    groups: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Edges to zero before preprocessing, e.g. "3-7,1-9"; "" for none.
    #[arg(long)]
    zero_edges: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Reference design, e.g. "2.1".
    #[arg(long, conflicts_with = "spec")]
    scenario: Option<String>,
    /// Design JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.7,0.95")]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    replications: usize,
    #[arg(long, default_value_t = 2)]
    groups: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-replication ARI rows CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON (stdout when omitted).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Instead of benchmarking, write one generated sample (with manifest
    /// and true groups) to this CSV path.
    #[arg(long)]
    sample_out: Option<PathBuf>,
}

#[derive(Args)]
struct FitScoresArgs {
    /// Matches CSV `date,home,away,home_goals,away_goals,home_style,away_style`.
    #[arg(long)]
    matches: PathBuf,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = scoremodel::DEFAULT_XI)]
    xi: f64,
    /// First matchday (integer day or YYYY-MM-DD).
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    #[arg(long, default_value_t = 5)]
    exclude_last: usize,
    /// Choose xi among these by one-step-ahead prediction before fitting.
    #[arg(long, value_delimiter = ',')]
    xi_candidates: Option<Vec<f64>>,
    /// Prediction window for xi selection.
    #[arg(long, requires = "xi_candidates")]
    xi_from: Option<String>,
    #[arg(long, requires = "xi_candidates")]
    xi_to: Option<String>,
    /// Output CSV `t,delta_hat,ci_low,ci_high,adjustment` (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CharacterizeArgs {
    #[arg(long)]
    partitions: PathBuf,
    #[arg(long)]
    groups: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct SummarizeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Optional CSV `network_id,group` naming a category per network.
    #[arg(long)]
    groups: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string_pretty(value)?) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn ingest(a: IngestArgs) -> Result<()> {
    let events = io::read_events(File::open(&a.events)?)?;
    let grid = PitchGrid {
        columns: a.columns,
        rows: a.rows,
        mirror_y: a.mirror_y,
        ..PitchGrid::default()
    };
    let sample = ingest_events(
        &events,
        &IngestConfig {
            grid,
            flip_away: a.flip_away,
        },
    )?;
    io::save_sample(&sample, &a.out, &a.out.with_extension("json"))?;
    print_json(&json!({ "networks": sample.len(), "nodes": sample.node_count() }))?;
    Ok(())
}

fn cluster(a: ClusterArgs, threads: Option<usize>) -> Result<()> {
    let mut config: PipelineConfig = match &a.config {
        Some(p) => io::read_json(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(v) = a.input {
        config.input = Some(v);
    }
    if let Some(v) = a.manifest {
        config.manifest = Some(v);
    }
    if let Some(v) = a.output {
        config.output = v;
    }
    if let Some(v) = a.alpha {
        config.alpha = v;
    }
    if let Some(v) = a.groups {
        config.groups = Some(v);
    }
    if let Some(v) = a.seed {
        config.seed = v;
    }
    if let Some(v) = a.zero_edges {
        config.zero_edges = parse_edge_list(&v)?;
    }
    if threads.is_some() {
        config.threads = threads;
    }
    let artifacts = run_pipeline(&config)?;
    print_json(&serde_json::to_value(&artifacts.summary)?)?;
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let spec = match (&a.scenario, &a.spec) {
        (Some(s), _) => {
            let (major, minor) = s
                .split_once('.')
                .ok_or_else(|| Error::Invalid(format!("scenario `{s}`")))?;
            let parse = |v: &str| {
                v.parse::<u8>()
                    .map_err(|_| Error::Invalid(format!("scenario `{s}`")))
            };
            ScenarioSpec::reference(parse(major)?, parse(minor)?)?
        }
        (None, Some(p)) => io::read_json(p)?,
        (None, None) => return Err(Error::Invalid("give --scenario or --spec".into())),
    };
    if let Some(path) = &a.sample_out {
        let (sample, truth) = generate_scenario(&spec, a.seed)?;
        io::save_sample(&sample, path, &path.with_extension("json"))?;
        let ids: Vec<String> = sample.labels().map(str::to_string).collect();
        let truth_path = path.with_file_name(format!(
            "{}_truth.csv",
            path.file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("sample")
        ));
        io::write_groups(&ids, &truth, create(&truth_path)?)?;
        print_json(&json!({ "networks": sample.len(), "truth": truth_path }))?;
        return Ok(());
    }
    let result = run_replications(&spec, &a.alphas, a.replications, a.seed, a.groups)?;
    if let Some(p) = &a.out {
        tactinet::simbench::write_rows(&result, create(p)?)?;
    }
    let summary = BenchmarkSummary::from(&result);
    match &a.summary {
        Some(p) => io::write_json(&summary, p)?,
        None => print_json(&serde_json::to_value(&summary)?)?,
    }
    Ok(())
}

fn fit_scores(a: FitScoresArgs) -> Result<()> {
    let (matches, format) = io::read_matches(File::open(&a.matches)?)?;
    let day = |s: &str| scoremodel::parse_day(s).map(|d| d.0);
    let mut xi = a.xi;
    if let Some(candidates) = &a.xi_candidates {
        let missing = || Error::Invalid("xi selection needs --xi-from and --xi-to".into());
        let cfg = XiConfig {
            from: day(a.xi_from.as_deref().ok_or_else(missing)?)?,
            to: day(a.xi_to.as_deref().ok_or_else(missing)?)?,
        };
        xi = optimize_xi(&matches, candidates, &cfg)?;
        eprintln!("{}", json!({ "selected_xi": xi }));
    }
    let cfg = CiConfig {
        level: a.level,
        xi,
        ..CiConfig::default()
    };
    let results = rolling_cis(&matches, day(&a.from)?, day(&a.to)?, &cfg, a.exclude_last)?;
    match &a.out {
        Some(p) => io::write_cis(&results, format, create(p)?)?,
        None => io::write_cis(&results, format, std::io::stdout().lock())?,
    }
    Ok(())
}

fn characterize(a: CharacterizeArgs) -> Result<()> {
    let (ids, partitions) = io::read_partitions(File::open(&a.partitions)?)?;
    let (group_ids, groups) = io::read_groups(File::open(&a.groups)?)?;
    if ids != group_ids {
        return Err(Error::ShapeMismatch(
            "partitions and groups list different networks".into(),
        ));
    }
    let tables = characterize_groups(&ids, &partitions, &groups)?;
    write_tables(&tables, &a.output)?;
    let sizes: Vec<usize> = tables.iter().map(|t| t.members.len()).collect();
    print_json(&json!({ "groups": tables.len(), "sizes": sizes }))?;
    Ok(())
}

fn summarize(a: SummarizeArgs) -> Result<()> {
    let manifest = a.manifest.unwrap_or_else(|| a.input.with_extension("json"));
    let sample = io::load_sample(&a.input, &manifest)?;
    let names: Option<Vec<String>> = match &a.groups {
        Some(p) => {
            let (ids, groups) = io::read_groups(File::open(p)?)?;
            let labels: Vec<String> = sample.labels().map(str::to_string).collect();
            if ids != labels {
                return Err(Error::ShapeMismatch(
                    "group file does not list the sample's networks in order".into(),
                ));
            }
            Some(groups.groups().iter().map(|g| g.to_string()).collect())
        }
        None => None,
    };
    let stats = summarize_sample(&sample, names.as_deref())?;
    match &a.out {
        Some(p) => io::write_json(&stats, p)?,
        None => print_json(&serde_json::to_value(&stats)?)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let threads = cli.threads;
    if threads == Some(0) {
        return Err(Error::Invalid("thread budget must be at least 1".into()));
    }
    with_thread_budget(threads, move || match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Cluster(a) => cluster(a, threads),
        Command::Simulate(a) => simulate(a),
        Command::FitScores(a) => fit_scores(a),
        Command::Characterize(a) => characterize(a),
        Command::Summarize(a) => summarize(a),
    })?
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default = if cli.verbose { "info" } else { "warn" };
    tracing_subscriber::fmt()
        .with_env_filter(
            EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new(default)),
        )
        .with_writer(std::io::stderr)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}
