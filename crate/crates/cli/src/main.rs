mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dessin_core::CharCache;
use serde_json::{json, Value};

/// Exact Hurwitz-type correlators, cut-and-join checks and polynomiality fits.
///
/// Output is one JSON document. Rationals are strings "a/b", polynomials use
/// graded-lex text in v1, v2, ...
#[derive(Parser, Debug)]
#[command(name = "dessin", version)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Directory for character-table files.
    #[arg(long, global = true, env = "DESSIN_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Omit the "meta" block (version and timestamp), for byte-stable output.
    #[arg(long, global = true)]
    no_meta: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One correlator N•/N° or its generating polynomial in v.
    Correlator(CorrelatorArgs),
    /// The truncated partition function Z_(r).
    PartitionFunction(PartitionFunctionArgs),
    /// Run an identity check suite.
    Verify(VerifyArgs),
    /// Fit a polynomial to sampled correlators.
    #[command(subcommand)]
    Fit(FitCommand),
    /// Brute-force tuple counts for a ramification profile.
    Oracle(OracleArgs),
    /// Build or inspect cached data.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Args, Debug)]
pub struct CorrelatorArgs {
    /// Number of free branch points.
    #[arg(long)]
    pub r: usize,
    /// Ramification over infinity, e.g. "2,1".
    #[arg(long)]
    pub mu: String,
    /// Cycle counts k_1..k_r, e.g. "1,2".
    #[arg(long)]
    pub k: Option<String>,
    /// Connected correlator N° instead of N•.
    #[arg(long)]
    pub connected: bool,
    /// Emit Σ_k N_k(μ) v^k instead of one coefficient.
    #[arg(long)]
    pub generating: bool,
    /// Engine; defaults to zhou for connected, burnside otherwise.
    #[arg(long, value_enum)]
    pub route: Option<Route>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Zhou,
    Log,
    Burnside,
    All,
}

#[derive(Args, Debug)]
pub struct PartitionFunctionArgs {
    #[arg(long)]
    pub r: usize,
    /// Truncation degree D.
    #[arg(long)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = BasisArg::Powersum)]
    pub basis: BasisArg,
    /// schur: flow or direct; powersum: burnside or flow.
    #[arg(long, value_enum)]
    pub route: Option<SeriesRoute>,
    /// Take the logarithm (power-sum basis only).
    #[arg(long)]
    pub connected: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Schur,
    Powersum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesRoute {
    Flow,
    Direct,
    Burnside,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Arity; unset runs r = 1..3 (akcoeffs: 1..8).
    #[arg(long)]
    pub r: Option<usize>,
    /// Truncation for cutjoin (default 5) and appendix (default 8).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Largest |μ| for zhou (default 5).
    #[arg(long)]
    pub max_weight: Option<usize>,
    /// Largest degree for burnside (default 4).
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cutjoin,
    Zhou,
    Burnside,
    Appendix,
    Akcoeffs,
    All,
}

#[derive(Subcommand, Debug)]
enum FitCommand {
    /// n ↦ n!·N•_{n-λ_1,…,n,…}((μ,1^{n-|μ|})).
    Stanley(StanleyArgs),
    /// μ ↦ z_μ·N°_{|μ|-k_1,…,|μ|-k_{r-1},k_r}(μ) for one- or two-part μ.
    Conjecture(ConjectureArgs),
}

#[derive(Args, Debug)]
pub struct StanleyArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value = "[]")]
    pub lambda: String,
    #[arg(long, default_value = "[]")]
    pub mu: String,
    /// Fitting samples; defaults to the minimum |μ|+2|λ|+2.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub holdout: usize,
}

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    #[arg(long)]
    pub r: usize,
    /// Offsets k_1..k_r, e.g. "1,2".
    #[arg(long)]
    pub k: String,
    /// Number of parts of μ (1 or 2).
    #[arg(long, default_value_t = 1)]
    pub length: usize,
    /// Largest |μ| any sample may use.
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub holdout: usize,
    /// Highest degree tried before giving up.
    #[arg(long, default_value_t = 12)]
    pub max_degree: usize,
    #[arg(long, value_enum, default_value_t = FitRoute::Zhou)]
    pub route: FitRoute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FitRoute {
    Zhou,
    Log,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Profiles separated by "|", e.g. "2|2" or "2,1|3|1,1,1".
    #[arg(long)]
    pub profiles: String,
    /// Report the transitive (connected) count as the value.
    #[arg(long)]
    pub connected: bool,
    #[arg(long, default_value_t = dessin_core::oracle::DEFAULT_MAX_DEGREE)]
    pub max_degree: usize,
}

#[derive(Subcommand, Debug)]
enum CacheCommand {
    /// Compute (or load) the S_d character table and store it.
    Chars {
        #[arg(long)]
        d: usize,
    },
}

/// A command's result plus whether every requested check passed.
pub struct Outcome {
    pub result: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(result: Value) -> Self {
        Outcome { result, ok: true }
    }
}

pub type CmdResult = Result<Outcome, CliError>;

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            message: message.into(),
        }
    }
}

impl From<dessin_core::Error> for CliError {
    fn from(e: dessin_core::Error) -> Self {
        CliError::new(e.kind(), e.to_string())
    }
}

fn run(cli: &Cli) -> CmdResult {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::new("usage", "--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::new("usage", e.to_string()))?;
    }
    let cache = match &cli.cache_dir {
        Some(dir) => CharCache::with_dir(dir),
        None => CharCache::in_memory(),
    };
    match &cli.command {
        Command::Correlator(a) => commands::correlator(a, &cache),
        Command::PartitionFunction(a) => commands::partition_function(a, &cache),
        Command::Verify(a) => commands::verify(a, &cache),
        Command::Fit(FitCommand::Stanley(a)) => commands::fit_stanley(a, &cache),
        Command::Fit(FitCommand::Conjecture(a)) => commands::fit_conjecture(a, &cache),
        Command::Oracle(a) => commands::oracle(a),
        Command::Cache(CacheCommand::Chars { d }) => commands::cache_chars(*d, &cache),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Correlator(_) => "correlator",
        Command::PartitionFunction(_) => "partition-function",
        Command::Verify(_) => "verify",
        Command::Fit(FitCommand::Stanley(_)) => "fit stanley",
        Command::Fit(FitCommand::Conjecture(_)) => "fit conjecture",
        Command::Oracle(_) => "oracle",
        Command::Cache(_) => "cache chars",
    }
}

fn emit(doc: &Value, output: Option<&PathBuf>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let doc = json!({"error": {"kind": "usage", "message": e.to_string().trim_end()}});
            let _ = emit(&doc, None);
            return ExitCode::from(2);
        }
    };
    let outcome = run(&cli);
    let (mut doc, code) = match outcome {
        Ok(out) => {
            let code = if out.ok { 0 } else { 1 };
            (json!({"command": command_name(&cli.command), "result": out.result}), code)
        }
        Err(e) => (json!({"error": {"kind": e.kind, "message": e.message}}), 2),
    };
    if !cli.no_meta {
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        doc["meta"] = json!({"version": env!("CARGO_PKG_VERSION"), "timestamp": ts});
    }
    if let Err(e) = emit(&doc, cli.output.as_ref()) {
        eprintln!("failed to write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
