//! `keygraph` — k-connectivity of sensor networks under random key
//! predistribution with unreliable links, from the command line.
//!
//! Subcommands: `analyze` (closed forms for one scenario), `simulate`
//! (Monte Carlo for one scenario), `sweep` (grid of scenarios, CSV/JSON,
//! optional gnuplot script), `dimension` (smallest key ring reaching a
//! target probability), `degree-dist` (empirical low-degree counts against
//! their Poisson law).

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use keygraph::analysis;
use keygraph::experiment::{degree_count_gof, run_sweep, sweep_csv, sweep_json, SweepConfig};
use keygraph::models::ModelParams;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

/// Default master seed; fixed so casual runs reproduce byte for byte.
const DEFAULT_SEED: &str = "42";

#[derive(Parser)]
#[command(
    name = "keygraph",
    version,
    about = "k-connectivity analysis and simulation for sensor networks \
             under key predistribution with on/off links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form edge probabilities, scaling deviation, and the
    /// asymptotic k-connectivity probability for one scenario
    Analyze(AnalyzeArgs),
    /// Monte Carlo estimate for one scenario, with confidence interval and
    /// the analytical prediction alongside
    Simulate(SimulateArgs),
    /// Monte Carlo sweep over a (p, K) grid; CSV or JSON, optional gnuplot
    /// script
    Sweep(SweepArgs),
    /// Smallest key ring size whose predicted k-connectivity probability
    /// reaches a target
    Dimension(DimensionArgs),
    /// Empirical frequencies of "no node has degree h" against their
    /// Poisson predictions
    DegreeDist(DegreeDistArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// number of nodes
    #[arg(long)]
    n: usize,
    /// keys per node (ring size)
    #[arg(long = "K")]
    ring_size: usize,
    /// key pool size
    #[arg(long = "P")]
    pool_size: usize,
    /// probability that a channel is on
    #[arg(long = "p")]
    on_prob: f64,
    /// connectivity level to test
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Args)]
struct OutputArgs {
    /// output file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    /// table, csv, or json
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Monte Carlo samples
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// 64-bit master seed, or `random`
    #[arg(long, default_value = DEFAULT_SEED)]
    seed: Seed,
    /// worker threads (default: all cores; env KEYGRAPH_JOBS overrides)
    #[arg(long)]
    jobs: Option<usize>,
    /// confidence level for the Wilson interval
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// number of nodes
    #[arg(long)]
    n: usize,
    /// key pool size
    #[arg(long = "P")]
    pool_size: usize,
    /// connectivity level to test
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// comma-separated channel probabilities, e.g. 0.2,0.5,0.8
    #[arg(long = "p")]
    p_list: PList,
    /// ring size range a:b or a:b:step, or a single value
    #[arg(long = "K")]
    ring_range: RingRange,
    /// Monte Carlo samples per (p, K) cell
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// 64-bit master seed, or `random`
    #[arg(long, default_value = DEFAULT_SEED)]
    seed: Seed,
    /// worker threads (default: all cores; env KEYGRAPH_JOBS overrides)
    #[arg(long)]
    jobs: Option<usize>,
    /// confidence level for the Wilson intervals
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
    /// output file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json (table is not available for sweeps)
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// write a gnuplot script plotting the sweep; requires --output and
    /// csv format
    #[arg(long)]
    emit_plot: Option<PathBuf>,
}

#[derive(Args)]
struct DimensionArgs {
    /// number of nodes
    #[arg(long)]
    n: usize,
    /// key pool size
    #[arg(long = "P")]
    pool_size: usize,
    /// probability that a channel is on
    #[arg(long = "p")]
    on_prob: f64,
    /// connectivity level to guarantee
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// required k-connectivity probability, in (0, 1)
    #[arg(long)]
    target: f64,
    /// dimension against the simple p*K^2/P surrogate instead of the exact
    /// edge probability
    #[arg(long)]
    approx: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct DegreeDistArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Monte Carlo samples
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// 64-bit master seed, or `random`
    #[arg(long, default_value = DEFAULT_SEED)]
    seed: Seed,
    /// worker threads (default: all cores; env KEYGRAPH_JOBS overrides)
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy)]
enum Seed {
    Fixed(u64),
    Random,
}

impl Seed {
    fn resolve(self) -> u64 {
        match self {
            Seed::Fixed(value) => value,
            Seed::Random => rand::random(),
        }
    }
}

impl FromStr for Seed {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "random" {
            return Ok(Seed::Random);
        }
        s.parse::<u64>()
            .map(Seed::Fixed)
            .map_err(|_| format!("seed must be a 64-bit integer or `random`, got `{s}`"))
    }
}

#[derive(Clone)]
struct PList(Vec<f64>);

impl FromStr for PList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("`{part}` is not a probability"))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if values.is_empty() {
            return Err("probability list is empty".to_string());
        }
        Ok(PList(values))
    }
}

#[derive(Clone)]
struct RingRange(Vec<usize>);

impl FromStr for RingRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |part: &str| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{part}` is not a ring size"))
        };
        let expanded = match parts.as_slice() {
            [single] => vec![parse(single)?],
            [start, end] => expand_range(parse(start)?, parse(end)?, 1)?,
            [start, end, step] => expand_range(parse(start)?, parse(end)?, parse(step)?)?,
            _ => return Err(format!("`{s}` is not of the form a, a:b, or a:b:step")),
        };
        Ok(RingRange(expanded))
    }
}

fn expand_range(start: usize, end: usize, step: usize) -> Result<Vec<usize>, String> {
    if step == 0 {
        return Err("ring range step must be positive".to_string());
    }
    if start > end {
        return Err(format!("ring range {start}:{end} is reversed"));
    }
    Ok((start..=end).step_by(step).collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Dimension(args) => cmd_dimension(args),
        Command::DegreeDist(args) => cmd_degree_dist(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Advisory notes when a scenario sits outside the regime the asymptotic
/// theory assumes; printed to stderr so machine output stays clean.
fn print_regime_advisories(params: &ModelParams) {
    if params.pool_size < params.n {
        eprintln!(
            "warning: pool size P={} below node count n={}; the asymptotic \
             theory assumes P grows at least linearly with n",
            params.pool_size, params.n
        );
    }
    if params.ring_size as f64 / params.pool_size as f64 > 0.1 {
        eprintln!(
            "warning: K/P = {}/{} exceeds 0.1; the asymptotic theory assumes \
             rings are a vanishing fraction of the pool",
            params.ring_size, params.pool_size
        );
    }
}

fn scenario_params(scenario: &ScenarioArgs) -> Result<ModelParams, String> {
    ModelParams::new(
        scenario.n,
        scenario.ring_size,
        scenario.pool_size,
        scenario.on_prob,
        scenario.k,
    )
    .map_err(|e| e.to_string())
}

fn configure_workers(jobs: Option<usize>) -> Result<(), String> {
    let jobs = match std::env::var("KEYGRAPH_JOBS") {
        Ok(value) => Some(
            value
                .parse::<usize>()
                .map_err(|_| format!("KEYGRAPH_JOBS=`{value}` is not a thread count"))?,
        ),
        Err(_) => jobs,
    };
    if let Some(jobs) = jobs {
        if jobs == 0 {
            return Err("worker count must be at least 1".to_string());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    Ok(())
}

fn write_out(output: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), String> {
    let params = scenario_params(&args.scenario)?;
    let prediction = analysis::predict(&params).map_err(|e| e.to_string())?;
    print_regime_advisories(&params);
    let content = match args.out.format {
        Format::Table => output::analyze_table(&params, &prediction),
        Format::Csv => output::analyze_csv(&params, &prediction),
        Format::Json => output::analyze_json(&params, &prediction),
    };
    write_out(&args.out.output, &content)
}

fn single_cell_config(
    params: &ModelParams,
    trials: u64,
    master_seed: u64,
    confidence: f64,
) -> SweepConfig {
    SweepConfig {
        n: params.n,
        pool_size: params.pool_size,
        k: params.k,
        p_values: vec![params.on_prob],
        ring_sizes: vec![params.ring_size],
        trials,
        master_seed,
        confidence,
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), String> {
    let params = scenario_params(&args.scenario)?;
    configure_workers(args.jobs)?;
    print_regime_advisories(&params);
    let config = single_cell_config(&params, args.trials, args.seed.resolve(), args.confidence);
    let cells = run_sweep(&config).map_err(|e| e.to_string())?;
    let content = match args.out.format {
        Format::Table => output::simulate_table(&config, &cells[0]),
        Format::Csv => sweep_csv(&config, &cells),
        Format::Json => sweep_json(&config, &cells),
    };
    write_out(&args.out.output, &content)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), String> {
    if args.format == Format::Table {
        return Err("sweep output is csv or json; table is not available".to_string());
    }
    if args.emit_plot.is_some() {
        if args.output.is_none() {
            return Err("--emit-plot needs --output so the script can reference the data file"
                .to_string());
        }
        if args.format != Format::Csv {
            return Err("--emit-plot requires csv output".to_string());
        }
    }
    configure_workers(args.jobs)?;
    let config = SweepConfig {
        n: args.n,
        pool_size: args.pool_size,
        k: args.k,
        p_values: args.p_list.0.clone(),
        ring_sizes: args.ring_range.0.clone(),
        trials: args.trials,
        master_seed: args.seed.resolve(),
        confidence: args.confidence,
    };
    let normalized = config.normalized().map_err(|e| e.to_string())?;
    let cells = run_sweep(&normalized).map_err(|e| e.to_string())?;
    let content = match args.format {
        Format::Csv => sweep_csv(&normalized, &cells),
        Format::Json => sweep_json(&normalized, &cells),
        Format::Table => unreachable!("rejected above"),
    };
    write_out(&args.output, &content)?;
    if let Some(plot_path) = args.emit_plot {
        let csv_path = args.output.as_ref().expect("checked above");
        let script = output::gnuplot_script(&normalized, csv_path, &plot_path);
        std::fs::write(&plot_path, script)
            .map_err(|e| format!("cannot write {}: {e}", plot_path.display()))?;
    }
    Ok(())
}

fn cmd_dimension(args: DimensionArgs) -> Result<(), String> {
    let dimensioning = analysis::dimension_key_ring(
        args.n,
        args.pool_size,
        args.on_prob,
        args.k,
        args.target,
        args.approx,
    )
    .map_err(|e| e.to_string())?;
    let request = args.request();
    let content = match args.out.format {
        Format::Table => output::dimension_table(&request, &dimensioning),
        Format::Csv => output::dimension_csv(&request, &dimensioning),
        Format::Json => output::dimension_json(&request, &dimensioning),
    };
    write_out(&args.out.output, &content)
}

fn cmd_degree_dist(args: DegreeDistArgs) -> Result<(), String> {
    let params = scenario_params(&args.scenario)?;
    configure_workers(args.jobs)?;
    print_regime_advisories(&params);
    let config = single_cell_config(&params, args.trials, args.seed.resolve(), 0.95);
    let cells = run_sweep(&config).map_err(|e| e.to_string())?;
    let prediction = analysis::predict(&params).map_err(|e| e.to_string())?;
    let rows = degree_count_gof(&cells[0], &prediction.degree_means);
    let content = match args.out.format {
        Format::Table => output::degree_dist_table(&params, &cells[0], &rows),
        Format::Csv => output::degree_dist_csv(&params, &cells[0], &rows),
        Format::Json => output::degree_dist_json(&config, &cells[0], &rows),
    };
    write_out(&args.out.output, &content)
}

/// Dimensioning request passed through to the renderers.
pub(crate) struct DimensionRequest {
    pub n: usize,
    pub pool_size: usize,
    pub on_prob: f64,
    pub k: usize,
    pub target: f64,
    pub approx: bool,
}

impl DimensionArgs {
    fn request(&self) -> DimensionRequest {
        DimensionRequest {
            n: self.n,
            pool_size: self.pool_size,
            on_prob: self.on_prob,
            k: self.k,
            target: self.target,
            approx: self.approx,
        }
    }
}
