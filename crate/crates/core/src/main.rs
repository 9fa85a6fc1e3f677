use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use tempoclose::bench::{run_grid, Algorithm, GridSpec, CSV_HEADER};
use tempoclose::closure::{Closure, Flavor};
use tempoclose::format::{write_snapshot_stream, IngestStats, SnapshotReader};
use tempoclose::generate::{GenModel, GenSpec};
use tempoclose::graph::ParamTracker;
use tempoclose::nonstrict::nonstrict_closure_stream;
use tempoclose::strict::strict_closure_stream;

#[derive(Parser)]
#[command(name = "tempoclose", version, about = "Transitive closures of journeys in evolving graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the closure of a snapshot stream
    Close(CloseArgs),
    /// Look up one pair in a closure file (exit 0 reachable, 1 not, 2 error)
    Query(QueryArgs),
    /// Generate a seeded synthetic evolving graph
    #[command(subcommand)]
    Gen(GenCommand),
    /// Time closure algorithms over a generator grid, emitting CSV
    Bench(BenchArgs),
    /// Print n, k, mu (largest snapshot), m (distinct arcs) of a graph
    Params(ParamsArgs),
}

#[derive(Args)]
struct FlavorFlags {
    /// Strict journeys: at most one arc per step (the default)
    #[arg(long)]
    strict: bool,
    /// Non-strict journeys: any number of same-step arcs may chain
    #[arg(long, conflicts_with = "strict")]
    non_strict: bool,
}

impl FlavorFlags {
    fn flavor(&self) -> Flavor {
        if self.non_strict {
            Flavor::NonStrict
        } else {
            Flavor::Strict
        }
    }
}

#[derive(Args)]
struct CloseArgs {
    /// Graph file; '-' or omitted reads standard input
    input: Option<PathBuf>,
    #[command(flatten)]
    flavor: FlavorFlags,
    /// Stop consuming the stream once the closure is complete
    #[arg(long)]
    early_stop: bool,
    /// Destination file (default: standard output)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// closure: the reach-pair text format; csv: one summary row
    #[arg(long, value_parser = ["closure", "csv"], default_value = "closure")]
    format: String,
}

#[derive(Args)]
struct QueryArgs {
    /// Closure file produced by `close`
    closure: PathBuf,
    /// Source vertex
    u: usize,
    /// Target vertex
    v: usize,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Exactly --arcs-per-step distinct arcs in every snapshot
    Uniform(UniformArgs),
    /// Independent per-pair birth/death chains, stationary start
    Markovian(MarkovianArgs),
}

#[derive(Args)]
struct GenCommon {
    /// Vertex count
    #[arg(long)]
    n: usize,
    /// Step count
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Destination file (default: standard output)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct UniformArgs {
    #[command(flatten)]
    common: GenCommon,
    #[arg(long)]
    arcs_per_step: usize,
}

#[derive(Args)]
struct MarkovianArgs {
    #[command(flatten)]
    common: GenCommon,
    /// Probability an absent arc appears at the next step
    #[arg(long)]
    p_birth: f64,
    /// Probability a present arc disappears at the next step
    #[arg(long)]
    p_death: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// Vertex counts, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Step counts, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// Uniform model: arcs per snapshot
    #[arg(long)]
    arcs_per_step: Option<usize>,
    /// Markovian model: birth probability (requires --p-death)
    #[arg(long, requires = "p_death", conflicts_with = "arcs_per_step")]
    p_birth: Option<f64>,
    /// Markovian model: death probability
    #[arg(long, requires = "p_birth", conflicts_with = "arcs_per_step")]
    p_death: Option<f64>,
    /// Instances per grid cell
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Base seed; instance s uses seed + s in grid order
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated subset of dedicated-strict, dedicated-nonstrict, baseline
    #[arg(long, value_delimiter = ',', default_value = "dedicated-strict,baseline")]
    algorithms: Vec<Algorithm>,
    /// Let the dedicated engines stop at completeness
    #[arg(long)]
    early_stop: bool,
    /// CSV destination (default: standard output)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ParamsArgs {
    /// Graph file; '-' or omitted reads standard input
    input: Option<PathBuf>,
}

fn open_input(path: Option<&Path>) -> anyhow::Result<Box<dyn BufRead>> {
    match path {
        None => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) if p == Path::new("-") => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) => {
            let file = File::open(p).with_context(|| format!("opening {}", p.display()))?;
            Ok(Box::new(BufReader::new(file)))
        }
    }
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(file)))
        }
    }
}

fn warn_on_drops(stats: IngestStats) {
    if stats.self_loops_dropped > 0 || stats.duplicate_arcs_dropped > 0 {
        eprintln!(
            "warning: dropped {} self-loop(s) and {} duplicate arc(s)",
            stats.self_loops_dropped, stats.duplicate_arcs_dropped
        );
    }
}

fn stop_text(stop: Option<usize>) -> String {
    stop.map_or_else(|| "none".to_string(), |s| s.to_string())
}

fn cmd_close(args: &CloseArgs) -> anyhow::Result<()> {
    let input = open_input(args.input.as_deref())?;
    let start = Instant::now();
    let mut reader = SnapshotReader::new(input)?;
    let n = reader.n();
    let mut tracker = ParamTracker::new(n);
    let flavor = args.flavor.flavor();
    let closure = match flavor {
        Flavor::Strict => strict_closure_stream(n, tracker.wrap(&mut reader), args.early_stop)?,
        Flavor::NonStrict => nonstrict_closure_stream(n, tracker.wrap(&mut reader), args.early_stop)?,
    };
    let wall_time_s = start.elapsed().as_secs_f64();
    warn_on_drops(reader.stats());
    // Under --early-stop the tail of the stream is never read, so these
    // parameters describe the consumed prefix.
    let params = tracker.params();
    eprintln!(
        "n={n} k={} mu={} m={} connected={} stop_step={}",
        params.k,
        params.mu,
        params.m,
        closure.is_connected(),
        stop_text(closure.stop_step())
    );
    let mut out = open_output(args.output.as_deref())?;
    if args.format == "csv" {
        let algorithm = match flavor {
            Flavor::Strict => Algorithm::DedicatedStrict,
            Flavor::NonStrict => Algorithm::DedicatedNonStrict,
        };
        writeln!(out, "{CSV_HEADER}")?;
        // Seed column is empty: the instance came from a file, not a
        // generator. Wall time covers the streamed parse+close pass.
        writeln!(
            out,
            "{algorithm},{n},{},{},{},,{wall_time_s:.9},{},{}",
            params.k,
            params.mu,
            params.m,
            closure.stop_step().map_or(String::new(), |s| s.to_string()),
            closure.is_connected()
        )?;
    } else {
        closure.write_text(&mut out)?;
    }
    out.flush().context("flushing output")?;
    Ok(())
}

fn cmd_query(args: &QueryArgs) -> i32 {
    let file = match File::open(&args.closure) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: opening {}: {e}", args.closure.display());
            return 2;
        }
    };
    let closure = match Closure::read_text(BufReader::new(file)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if args.u >= closure.n() || args.v >= closure.n() {
        eprintln!("error: vertex out of range for n={}", closure.n());
        return 2;
    }
    let reachable = closure.reaches(args.u, args.v);
    println!("{reachable}");
    if reachable {
        0
    } else {
        1
    }
}

fn cmd_gen(cmd: &GenCommand) -> anyhow::Result<()> {
    let (common, model) = match cmd {
        GenCommand::Uniform(a) => (&a.common, GenModel::Uniform { arcs_per_step: a.arcs_per_step }),
        GenCommand::Markovian(a) => (&a.common, GenModel::Markovian { p_birth: a.p_birth, p_death: a.p_death }),
    };
    let spec = GenSpec { n: common.n, k: common.k, model, seed: common.seed };
    let stream = spec.stream()?;
    let mut out = open_output(common.output.as_deref())?;
    write_snapshot_stream(&mut out, spec.n, stream, &spec.header_comments())?;
    out.flush().context("flushing output")?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> anyhow::Result<()> {
    let model = match (args.arcs_per_step, args.p_birth, args.p_death) {
        (Some(arcs_per_step), None, None) => GenModel::Uniform { arcs_per_step },
        (None, Some(p_birth), Some(p_death)) => GenModel::Markovian { p_birth, p_death },
        _ => bail!("pick a model: --arcs-per-step for uniform, or --p-birth with --p-death for markovian"),
    };
    let spec = GridSpec {
        ns: args.n.clone(),
        ks: args.k.clone(),
        model,
        reps: args.reps,
        base_seed: args.seed,
        algorithms: args.algorithms.clone(),
        early_stop: args.early_stop,
    };
    if spec.algorithms.is_empty() {
        bail!("no algorithms selected");
    }
    let mut out = open_output(args.output.as_deref())?;
    let records = run_grid(&spec, &mut out)?;
    out.flush().context("flushing output")?;
    eprintln!("{} rows", records.len());
    Ok(())
}

fn cmd_params(args: &ParamsArgs) -> anyhow::Result<()> {
    let input = open_input(args.input.as_deref())?;
    let mut reader = SnapshotReader::new(input)?;
    let n = reader.n();
    let mut tracker = ParamTracker::new(n);
    for snapshot in tracker.wrap(&mut reader) {
        snapshot?;
    }
    warn_on_drops(reader.stats());
    let params = tracker.params();
    println!("n={n} k={} mu={} m={}", params.k, params.mu, params.m);
    Ok(())
}

fn run(command: &Command) -> anyhow::Result<()> {
    match command {
        Command::Close(args) => cmd_close(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Params(args) => cmd_params(args),
        Command::Query(_) => unreachable!("query handled in main"),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Query(args) => cmd_query(args),
        other => match run(other) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e:#}");
                1
            }
        },
    };
    std::process::exit(code);
}
