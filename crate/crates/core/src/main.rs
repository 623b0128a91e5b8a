use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kcb::adversary::AdversaryError;
use kcb::harness::{self, Family, RunError};
use kcb::trace::MatchupTrace;
use kcb::verify::{chromatic_number_with_budget, Chromatic, DEFAULT_NODE_BUDGET};
use kcb::{AlgorithmSpec, StrategySpec};

/// Default directory for traces and tables when `--out` is not given.
const OUT_DIR_VAR: &str = "KCB_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "kcb",
    version,
    about = "Online coloring under components-bounded adversaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one strategy against one algorithm and write the trace.
    Run {
        #[command(flatten)]
        matchup: MatchupArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Trace file (JSON Lines). Defaults to $KCB_OUT_DIR/<label>.jsonl, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verify the trace before writing it.
        #[arg(long)]
        verify: bool,
    },
    /// Check one or more trace files.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Run a family over a parameter range and emit a table.
    Sweep {
        #[command(flatten)]
        matchup: MatchupArgs,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Girth parameter for the universal family.
        #[arg(long)]
        ck_free: Option<usize>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact chromatic number of the graph in a trace file.
    Chromatic {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        limit: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
}

#[derive(Args)]
struct MatchupArgs {
    #[arg(long, value_enum)]
    strategy: StrategyName,
    #[arg(long, value_enum)]
    algorithm: AlgorithmName,
    /// Seed for the baseline algorithm.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lift the desk-scale budget on the universal adversary (t up to 8).
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ck_free: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    Clique,
    #[value(name = "ff_bipartite_2cb")]
    FfBipartite2cb,
    #[value(name = "ff_3colorable_1cb")]
    Ff3Colorable1cb,
    Forest,
    #[value(name = "cbip_tree")]
    CbipTree,
    Universal,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmName {
    Firstfit,
    Cbip,
    Baseline,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Adversary(
                AdversaryError::OverBudget(_) | AdversaryError::InvalidParameter(_),
            ) => Failure::Usage(e.to_string()),
            e => Failure::Check(e.to_string()),
        }
    }
}

impl AlgorithmName {
    fn spec(self, seed: u64) -> AlgorithmSpec {
        match self {
            AlgorithmName::Firstfit => AlgorithmSpec::FirstFit,
            AlgorithmName::Cbip => AlgorithmSpec::Cbip,
            AlgorithmName::Baseline => AlgorithmSpec::Baseline { seed },
        }
    }
}

impl StrategyName {
    fn family(self, ck_free: Option<usize>) -> Family {
        match self {
            StrategyName::Clique => Family::Clique,
            StrategyName::FfBipartite2cb => Family::FfBipartite2cb,
            StrategyName::Ff3Colorable1cb => Family::Ff3Colorable1cb,
            StrategyName::Forest => Family::Forest,
            StrategyName::CbipTree => Family::CbipTree,
            StrategyName::Universal => Family::Universal { ck_free },
        }
    }

    fn spec(self, p: &ParamArgs) -> Result<StrategySpec, Failure> {
        let need = |value: Option<usize>, flag: &str| {
            value.ok_or_else(|| Failure::Usage(format!("this strategy needs --{flag}")))
        };
        let param = match self {
            StrategyName::Clique | StrategyName::FfBipartite2cb => need(p.n, "n")?,
            StrategyName::Ff3Colorable1cb => need(p.rounds, "rounds")?,
            StrategyName::Forest | StrategyName::CbipTree => need(p.kappa, "kappa")?,
            StrategyName::Universal => need(p.t, "t")?,
        };
        Ok(self.family(p.ck_free).spec(param))
    }
}

fn default_path(out: Option<PathBuf>, file_name: String) -> Option<PathBuf> {
    out.or_else(|| std::env::var_os(OUT_DIR_VAR).map(|dir| Path::new(&dir).join(file_name)))
}

fn emit(path: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&path, text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            matchup,
            params,
            out,
            verify,
        } => {
            let strategy = matchup.strategy.spec(&params)?;
            let algorithm = matchup.algorithm.spec(matchup.seed);
            let trace = harness::run_matchup_with(strategy, algorithm, matchup.allow_large)?;
            let s = &trace.summary;
            eprintln!(
                "{} vs {}: bins_used={} vertices={} max_components={}",
                strategy.label(),
                algorithm.label(),
                s.bins_used,
                s.vertices,
                s.max_components
            );
            if verify {
                let report = harness::verify_trace(&trace);
                eprint!("{report}");
                if !report.passed() {
                    return Err(Failure::Check("verification failed".into()));
                }
            }
            let name = format!("{}_{}.jsonl", strategy.label(), algorithm.label());
            emit(default_path(out, name), &trace.to_jsonl())
        }
        Command::Verify { files, format } => {
            let mut all_passed = true;
            for file in files {
                let text = read(&file)?;
                match harness::verify_trace_text(&text) {
                    Ok(report) => {
                        all_passed &= report.passed();
                        match format {
                            ReportFormat::Text => print!("{}:\n{report}", file.display()),
                            ReportFormat::Json => println!(
                                "{}",
                                serde_json::json!({ "file": file.display().to_string(), "passed": report.passed(), "checks": report.checks })
                            ),
                        }
                    }
                    Err(e) => {
                        all_passed = false;
                        match format {
                            ReportFormat::Text => println!("{}:\nFAIL parse: {e}", file.display()),
                            ReportFormat::Json => println!(
                                "{}",
                                serde_json::json!({ "file": file.display().to_string(), "passed": false, "error": e.to_string() })
                            ),
                        }
                    }
                }
            }
            if all_passed {
                Ok(())
            } else {
                Err(Failure::Check("verification failed".into()))
            }
        }
        Command::Sweep {
            matchup,
            from,
            to,
            ck_free,
            format,
            out,
        } => {
            if from > to {
                return Err(Failure::Usage(format!("empty range {from}..={to}")));
            }
            let family = matchup.strategy.family(ck_free);
            let algorithm = matchup.algorithm.spec(matchup.seed);
            let rows = harness::sweep(family, algorithm, from..=to, matchup.allow_large)?;
            let (text, ext) = match format {
                TableFormat::Csv => (harness::sweep_csv(&rows), "csv"),
                TableFormat::Json => (harness::sweep_json(&rows) + "\n", "json"),
            };
            let name = format!(
                "sweep_{}_{}_{from}-{to}.{ext}",
                family.spec(from).name(),
                algorithm.label()
            );
            emit(default_path(out, name), &text)
        }
        Command::Chromatic {
            file,
            limit,
            budget,
        } => {
            let text = read(&file)?;
            let trace = MatchupTrace::parse(&text).map_err(|e| Failure::Check(e.to_string()))?;
            let graph = trace.graph().map_err(|e| Failure::Check(e.to_string()))?;
            match chromatic_number_with_budget(&graph, limit, budget) {
                Chromatic::Exact(k) => println!("{k}"),
                Chromatic::ExceedsLimit => println!("> {limit}"),
                Chromatic::Indeterminate => println!("indeterminate"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
