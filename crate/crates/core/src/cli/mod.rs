//! Command-line front end.

mod config;
mod error;
mod grid;
mod sample;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use error::{CliError, CliResult};
use grid::{BondArgs, CommutationArgs, SweepArgs};
use sample::{BsArgs, IqpArgs};

#[derive(Debug, Parser)]
#[command(name = "mns", version, about = "Tensor-network sampling of lossy boson and noisy IQP circuits")]
pub struct Cli {
    /// Flat key = value file supplying defaults for any flag.
    #[arg(long, global = true, env = "MNS_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, env = "MNS_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (all cores when unset).
    #[arg(long, global = true, env = "MNS_THREADS")]
    threads: Option<usize>,
    /// Output file; standard output when unset.
    #[arg(long, global = true, env = "MNS_OUTPUT")]
    output: Option<PathBuf>,
    /// Where grid commands log failed points; `<output>.errors` by default.
    #[arg(long, global = true, env = "MNS_ERROR_LOG")]
    error_log: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lossy boson sampling trajectories as JSONL.
    BsSample(BsArgs),
    /// Noisy IQP sampling trajectories as JSONL.
    IqpSample(IqpArgs),
    /// Entanglement Rényi entropies over a parameter grid as CSV.
    EreSweep(SweepArgs),
    /// Required bond dimension and memory over a parameter grid as CSV.
    BondDim(BondArgs),
    /// Haar commutator statistics per mode count as CSV.
    CommutationCheck(CommutationArgs),
    /// Sampled distribution against the exact oracle, as a TVD row.
    OracleCompare {
        #[command(subcommand)]
        target: CompareTarget,
    },
}

#[derive(Debug, Subcommand)]
enum CompareTarget {
    Bs(BsArgs),
    Iqp(IqpArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for mns::photonic::Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => mns::photonic::Parity::Even,
            ParityArg::Odd => mns::photonic::Parity::Odd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    Dephasing,
    Depolarizing,
}

impl From<NoiseArg> for mns::iqp::NoiseModel {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::Dephasing => mns::iqp::NoiseModel::Dephasing,
            NoiseArg::Depolarizing => mns::iqp::NoiseModel::Depolarizing,
        }
    }
}

fn parse(argv: Vec<OsString>) -> CliResult<std::result::Result<Cli, clap::Error>> {
    let mut cmd = Cli::command();
    cmd.build();
    let matches = match cmd.clone().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => return Ok(Err(e)),
    };
    let matches = match matches.get_one::<PathBuf>("config") {
        Some(path) => {
            let mut argv = argv;
            argv.extend(config::config_overrides(&cmd, &matches, path)?);
            match cmd.try_get_matches_from(&argv) {
                Ok(m) => m,
                Err(e) => return Ok(Err(e)),
            }
        }
        None => matches,
    };
    Ok(Cli::from_arg_matches(&matches))
}

/// Output sink: the whole payload is assembled before anything is written.
pub struct Emit {
    pub body: Vec<u8>,
    pub failures: Vec<String>,
}

impl Emit {
    pub fn new() -> Self {
        Self { body: Vec::new(), failures: Vec::new() }
    }
}

fn write_out(cli: &Cli, emit: Emit) -> CliResult<()> {
    let fail = |what: &str, e: std::io::Error| CliError::Output(format!("{what}: {e}"));
    match &cli.output {
        Some(path) => std::fs::write(path, &emit.body).map_err(|e| fail(&path.display().to_string(), e))?,
        None => std::io::stdout().lock().write_all(&emit.body).map_err(|e| fail("stdout", e))?,
    }
    if emit.failures.is_empty() {
        return Ok(());
    }
    let log = cli
        .error_log
        .clone()
        .or_else(|| cli.output.as_ref().map(|p| PathBuf::from(format!("{}.errors", p.display()))));
    let text: String = emit.failures.iter().map(|l| format!("{l}\n")).collect();
    match log {
        Some(path) => std::fs::write(&path, text).map_err(|e| fail(&path.display().to_string(), e)),
        None => std::io::stderr().lock().write_all(text.as_bytes()).map_err(|e| fail("stderr", e)),
    }
}

fn dispatch(cli: &Cli) -> CliResult<Emit> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Invalid("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::BsSample(a) => sample::bs_sample(a, cli.seed),
        Command::IqpSample(a) => sample::iqp_sample(a, cli.seed),
        Command::EreSweep(a) => grid::ere_sweep(a, cli.seed),
        Command::BondDim(a) => grid::bond_dim(a, cli.seed),
        Command::CommutationCheck(a) => grid::commutation_check(a, cli.seed),
        Command::OracleCompare { target } => match target {
            CompareTarget::Bs(a) => sample::bs_compare(a, cli.seed),
            CompareTarget::Iqp(a) => sample::iqp_compare(a, cli.seed),
        },
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run(argv: Vec<OsString>) -> i32 {
    let result = parse(argv).and_then(|parsed| match parsed {
        Ok(cli) => dispatch(&cli).and_then(|emit| write_out(&cli, emit)),
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            Ok(())
        }
        Err(e) => Err(CliError::Usage(e.render().to_string().trim_end().to_string())),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
