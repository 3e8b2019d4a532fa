use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use colorcomm_core::harness::{run_on, to_csv, Point, MIN_BENCH_SEEDS};
use colorcomm_core::io::{parse_coloring, parse_graph, write_graph, ColoringFile};
use colorcomm_core::zec::{build_label_table, StrategyPair, WIN_BOUND};
use colorcomm_core::{
    cmd_bench, cmd_run, find_failure_witness, gen_random_instance, gen_zec_product_instance, product_game_estimate,
    verify_edge_coloring, verify_vertex_coloring, zec_win_probability, ExperimentConfig, HarnessError, Model,
    PartitionStrategy, Problem, ZecStrategy,
};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "colorcomm",
    version,
    about = "Two-party graph coloring protocols with exact bit accounting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance as a graph file.
    Gen(GenArgs),
    /// Run protocols and emit one JSON report per run.
    Run(RunArgs),
    /// Sweep seeds per point and emit aggregate CSV.
    Bench(SweepArgs),
    /// Check a coloring file against a graph file.
    Verify { graph: PathBuf, coloring: PathBuf },
    /// Evaluate a pair of zero-communication strategies.
    Zec(ZecArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long, default_value = "bounded-uniform")]
    model: Model,
    #[arg(long, default_value = "random")]
    partition: PartitionStrategy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit a union of this many gadgets instead of a random graph.
    #[arg(long, conflicts_with_all = ["n", "delta"])]
    zec_gadgets: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// vertex, edge or zec. Required unless given by --config.
    problem: Option<Problem>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    delta: Vec<usize>,
    #[arg(long)]
    model: Option<Model>,
    #[arg(long)]
    partition: Option<PartitionStrategy>,
    /// Seeds per sweep point.
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long)]
    first_seed: Option<u64>,
    /// JSON experiment config; flags given alongside override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Run once on this graph file instead of generating instances.
    #[arg(long, conflicts_with_all = ["n", "delta", "model", "partition", "seeds"])]
    graph: Option<PathBuf>,
    /// Protocol seed for --graph.
    #[arg(long, default_value_t = 0, requires = "graph")]
    seed: u64,
    /// Write the transcript JSON here (with --graph).
    #[arg(long, requires = "graph")]
    transcript: Option<PathBuf>,
    /// Write the output coloring here (with --graph).
    #[arg(long, requires = "graph")]
    coloring: Option<PathBuf>,
}

#[derive(Args)]
struct ZecArgs {
    /// Strategy file `{"alice": [...], "bob": [...]}`. Uniform play if absent.
    #[arg(long, conflicts_with = "random")]
    strategies: Option<PathBuf>,
    /// Draw both strategies at random from this seed.
    #[arg(long)]
    random: Option<u64>,
    /// Print the strategy pair instead of evaluating it.
    #[arg(long)]
    dump: bool,
    /// Also estimate winning this many independent copies at once.
    #[arg(long)]
    copies: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<HarnessError> for Fail {
    fn from(e: HarnessError) -> Self {
        Fail {
            code: e.exit_code() as u8,
            msg: e.to_string(),
        }
    }
}

type CliResult = Result<u8, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Fail::usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config(args: &SweepArgs, default_seeds: u64) -> Result<ExperimentConfig, Fail> {
    let mut cfg = match &args.config {
        Some(path) => serde_json::from_str::<ExperimentConfig>(&read(path)?)
            .map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?,
        None => {
            let problem = args
                .problem
                .ok_or_else(|| Fail::usage("problem is required without --config"))?;
            ExperimentConfig::new(problem, Vec::new(), Vec::new(), default_seeds)
        }
    };
    if let Some(p) = args.problem {
        cfg.problem = p;
    }
    if !args.n.is_empty() {
        cfg.n = args.n.clone();
    }
    if !args.delta.is_empty() {
        cfg.delta = args.delta.clone();
    }
    if let Some(m) = args.model {
        cfg.model = m;
    }
    if let Some(p) = args.partition {
        cfg.partition = p;
    }
    if let Some(s) = args.seeds {
        cfg.seeds = s;
    }
    if let Some(s) = args.first_seed {
        cfg.first_seed = s;
    }
    Ok(cfg)
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn gen(args: GenArgs) -> CliResult {
    let p = match args.zec_gadgets {
        Some(count) => gen_zec_product_instance(count, args.seed),
        None => {
            let n = args.n.ok_or_else(|| Fail::usage("--n is required"))?;
            let delta = args.delta.ok_or_else(|| Fail::usage("--delta is required"))?;
            gen_random_instance(n, delta, args.model, args.partition, args.seed)
                .map_err(|e| Fail::usage(e.to_string()))?
        }
    };
    emit(args.out.as_deref(), &write_graph(&p))?;
    Ok(0)
}

fn run(args: RunArgs) -> CliResult {
    let Some(graph) = &args.graph else {
        let cfg = config(&args.sweep, 1)?;
        let reports = cmd_run(&cfg)?;
        let text: String = reports.iter().map(json_line).collect();
        emit(args.sweep.out.as_deref(), &text)?;
        let bad = reports.iter().filter(|r| !r.verified).count();
        if bad > 0 {
            eprintln!("{bad} of {} runs failed verification", reports.len());
            return Ok(EXIT_VERIFY);
        }
        return Ok(0);
    };
    let cfg = config(&args.sweep, 1)?;
    cfg.validate()?;
    let p = parse_graph(&read(graph)?).map_err(|e| Fail::usage(format!("{}: {e}", graph.display())))?;
    let pt = Point {
        n: p.n(),
        delta: p.max_degree(),
    };
    let outcome = run_on(&cfg, &p, pt, args.seed)?;
    if let Some(path) = &args.transcript {
        let text = serde_json::to_string_pretty(&outcome.transcript).expect("serializable");
        emit(Some(path), &text)?;
    }
    if let Some(path) = &args.coloring {
        emit(Some(path), &outcome.output.to_file(&p, outcome.report.palette))?;
    }
    emit(args.sweep.out.as_deref(), &json_line(&outcome.report))?;
    Ok(if outcome.report.verified { 0 } else { EXIT_VERIFY })
}

fn bench(args: SweepArgs) -> CliResult {
    let cfg = config(&args, MIN_BENCH_SEEDS)?;
    let rows = cmd_bench(&cfg)?;
    emit(args.out.as_deref(), &to_csv(&rows))?;
    let failures: usize = rows.iter().map(|r| r.failures).sum();
    if failures > 0 {
        eprintln!("{failures} runs failed verification");
        return Ok(EXIT_VERIFY);
    }
    Ok(0)
}

fn verify(graph: &Path, coloring: &Path) -> CliResult {
    let p = parse_graph(&read(graph)?).map_err(|e| Fail::usage(format!("{}: {e}", graph.display())))?;
    let file = parse_coloring(&read(coloring)?, &p).map_err(|e| Fail::usage(format!("{}: {e}", coloring.display())))?;
    let violations = match &file {
        ColoringFile::Vertex { palette, coloring } => verify_vertex_coloring(p.graph(), coloring, *palette),
        ColoringFile::Edge { palette, coloring } => verify_edge_coloring(&p, coloring, *palette),
    };
    for v in &violations {
        print!("{}", json_line(v));
    }
    if violations.is_empty() {
        eprintln!("ok");
        Ok(0)
    } else {
        eprintln!("{} violations", violations.len());
        Ok(EXIT_VERIFY)
    }
}

fn zec(args: ZecArgs) -> CliResult {
    let pair = match (&args.strategies, args.random) {
        (Some(path), _) => serde_json::from_str::<StrategyPair>(&read(path)?)
            .map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?,
        (None, Some(seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            StrategyPair {
                alice: ZecStrategy::random_dirichlet(&mut rng),
                bob: ZecStrategy::random_dirichlet(&mut rng),
            }
        }
        (None, None) => StrategyPair {
            alice: ZecStrategy::uniform(),
            bob: ZecStrategy::uniform(),
        },
    };
    if args.dump {
        emit(args.out.as_deref(), &json_line(&pair))?;
        return Ok(0);
    }
    let win = zec_win_probability(&pair.alice, &pair.bob);
    let witness = find_failure_witness(&pair.alice, &pair.bob).map_err(|e| Fail {
        code: 3,
        msg: e.to_string(),
    })?;
    let product = args.copies.map(|copies| {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        product_game_estimate(&pair.alice, &pair.bob, copies, args.trials, &mut rng)
    });
    let report = json!({
        "winProbability": win,
        "winBound": WIN_BOUND,
        "labels": build_label_table(&pair.alice, &pair.bob),
        "witness": witness,
        "product": product,
    });
    emit(args.out.as_deref(), &json_line(&report))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Bench(a) => bench(a),
        Command::Verify { graph, coloring } => verify(&graph, &coloring),
        Command::Zec(a) => zec(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
