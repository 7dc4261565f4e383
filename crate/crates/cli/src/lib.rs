//! Command-line driver for `indminor`: argument parsing, the command
//! implementations and run manifests. The binary only forwards to [`run`].

mod commands;
mod manifest;
mod specs;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use commands::*;
pub use manifest::{digest_file, digest_value, sha256_hex, Constants, RunManifest};
pub use specs::{load_graph, parse_graph_spec};

#[derive(Parser, Debug, Clone)]
#[command(name = "indminor", version, about = "Separators, induced minors and hardness instances")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct GlobalOpts {
    /// Seed of the run's random generator.
    #[arg(long, global = true, env = "INDMINOR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Fixed flow congestion target, replacing the computed gamma.
    #[arg(long, global = true, env = "INDMINOR_GAMMA")]
    pub gamma: Option<f64>,
    /// Denominator constant of the computed gamma.
    #[arg(long, global = true, env = "INDMINOR_GAMMA_CONSTANT", default_value_t = 120.0)]
    pub gamma_constant: f64,
    #[arg(long, global = true, env = "INDMINOR_EPS", default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, global = true, env = "INDMINOR_RESAMPLE_CAP")]
    pub resample_cap: Option<u64>,
    /// Largest component left undivided by the separator decomposition.
    #[arg(long, global = true, env = "INDMINOR_LEAF_SIZE", default_value_t = 8)]
    pub leaf_size: usize,
    #[arg(long, global = true, env = "INDMINOR_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the run manifest to this file.
    #[arg(long = "manifest-out", global = true, env = "INDMINOR_MANIFEST_OUT")]
    pub manifest_out: Option<PathBuf>,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            seed: 0,
            gamma: None,
            gamma_constant: 120.0,
            eps: 0.25,
            resample_cap: None,
            leaf_size: 8,
            format: Format::Json,
            manifest_out: None,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Generate a graph.
    Gen(GenArgs),
    /// Balanced separator or induced minor model.
    Separate(SeparateArgs),
    /// Maximum independent set in a pattern-free graph.
    #[command(alias = "solve-mis")]
    Mis(MisArgs),
    /// Induced-minor test by degeneracy branching.
    Imtest(ImtestArgs),
    /// Reduce a binary CSP on a binary shift graph.
    Reduce(ReduceArgs),
    /// Check a certificate.
    Verify(VerifyArgs),
    /// Binary shift graph, edge partition and canonical flow.
    Bs(BsArgs),
    /// Exhaustive ground truth on small graphs.
    Oracle(OracleArgs),
    /// Rerun a manifest and compare outputs.
    Replay(ReplayArgs),
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files; exit code 2.
    Invalid(String),
    /// Unexpected library failure; exit code 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<indminor::Error> for CliError {
    fn from(e: indminor::Error) -> Self {
        match e {
            indminor::Error::InvalidInput(m) => CliError::Invalid(m),
            indminor::Error::Json(e) => CliError::Invalid(e.to_string()),
            e => CliError::Failed(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// What a command produced before it is wrapped into a manifest.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub result: Value,
    pub parameters: Value,
    pub measured: Value,
    pub verdicts: BTreeMap<String, bool>,
    pub inputs: Vec<PathBuf>,
    pub dot: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Run {
    pub result: Value,
    pub manifest: RunManifest,
    pub dot: Option<String>,
}

impl Run {
    /// 0 when every verdict holds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.manifest.all_verified() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "result": self.result, "manifest": self.manifest })
    }
}

impl GlobalOpts {
    pub fn constants(&self) -> Constants {
        Constants {
            embed: 15.0,
            extract: 40.0,
            separator: self.gamma_constant,
            gamma_override: self.gamma,
            eps: self.eps,
            resample_cap: self.resample_cap,
            leaf_size: self.leaf_size,
            embed_retries: indminor::embed::SeparatorConfig::default().embed_retries,
        }
    }

    pub fn separator_config(&self) -> indminor::embed::SeparatorConfig {
        let mut cfg = indminor::embed::SeparatorConfig {
            gamma_constant: self.gamma_constant,
            gamma_override: self.gamma,
            seed: self.seed,
            resample_cap: self.resample_cap,
            ..Default::default()
        };
        cfg.flow.eps = self.eps;
        cfg
    }

    fn check(&self) -> CliResult<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(CliError::Invalid(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if !(self.gamma_constant > 0.0) || self.gamma.is_some_and(|g| !(g > 0.0)) {
            return Err(CliError::Invalid("gamma and its constant must be positive".into()));
        }
        if self.leaf_size == 0 {
            return Err(CliError::Invalid("leaf size must be positive".into()));
        }
        Ok(())
    }
}

/// Wraps a command's output into a run with its manifest.
pub fn finish(command: &str, argv: &[String], global: &GlobalOpts, out: Output) -> CliResult<Run> {
    let mut inputs = BTreeMap::new();
    for path in &out.inputs {
        let digest = digest_file(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        inputs.insert(path.display().to_string(), digest);
    }
    let manifest = RunManifest {
        command: command.to_string(),
        argv: argv.to_vec(),
        parameters: out.parameters,
        seed: global.seed,
        constants: global.constants(),
        inputs,
        measured: out.measured,
        verdicts: out.verdicts,
        output_sha256: digest_value(&out.result),
    };
    Ok(Run { result: out.result, manifest, dot: out.dot })
}

/// Parses `argv` (without the program name) and runs the command.
pub fn execute(argv: &[String]) -> CliResult<Run> {
    let cli = Cli::try_parse_from(std::iter::once("indminor".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    execute_cli(&cli, argv)
}

pub fn execute_cli(cli: &Cli, argv: &[String]) -> CliResult<Run> {
    let g = &cli.global;
    g.check()?;
    let (name, out) = match &cli.command {
        Command::Gen(a) => ("gen", cmd_gen(a, g)?),
        Command::Separate(a) => ("separate", separate_files(a, g)?),
        Command::Mis(a) => ("mis", mis_files(a, g)?),
        Command::Imtest(a) => ("imtest", imtest_files(a, g)?),
        Command::Reduce(a) => ("reduce", cmd_reduce(a, g)?),
        Command::Verify(a) => ("verify", cmd_verify(a, g)?),
        Command::Bs(a) => ("bs", cmd_bs(a, g)?),
        Command::Oracle(a) => ("oracle", cmd_oracle(a, g)?),
        Command::Replay(a) => ("replay", cmd_replay(a, g)?),
    };
    finish(name, argv, g, out)
}

/// Full entry point: prints the result, writes the manifest if asked and
/// returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("indminor".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let run = match execute_cli(&cli, &argv) {
        Ok(run) => run,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe downstream is not an error of the run
    match cli.global.format {
        Format::Json => {
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&run.to_json()).expect("json output"));
        }
        Format::Dot => match &run.dot {
            Some(dot) => {
                let _ = write!(stdout, "{dot}");
            }
            None => {
                eprintln!("error: invalid input: no DOT rendering for this command");
                return 2;
            }
        },
    }
    if let Some(path) = &cli.global.manifest_out {
        let text = serde_json::to_string_pretty(&run.manifest).expect("manifest json");
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: {}: {e}", path.display());
            return 2;
        }
    }
    if run.exit_code() != 0 {
        let failed: Vec<&String> = run.manifest.verdicts.iter().filter(|(_, &v)| !v).map(|(k, _)| k).collect();
        eprintln!("verification failed: {failed:?}");
    }
    run.exit_code()
}
