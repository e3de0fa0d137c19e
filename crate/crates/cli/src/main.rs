//! `gorge` — run one problem × optimizer experiment and write the
//! convergence trace as CSV.

mod config;

use clap::{Args, Parser, Subcommand};
use config::ConfigFile;
use gorge_core::ansatz::{AnsatzSpec, Entanglement};
use gorge_core::error::Error;
use gorge_core::optimizer::{Algorithm, OptimizerConfig};
use gorge_core::problems::InitPolicy;
use gorge_core::runner::{run_and_write, summarize, ProblemSpec, RunConfig, RunStatus};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gorge",
    version,
    about = "Normalized-gradient optimizer benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its trace to CSV.
    Run(RunArgs),
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct RunArgs {
    /// Config file with `[problem]`, `[optimizer]` and `[run]` sections;
    /// command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// narrow-gorge | h2 | tfim | file | quadratic
    #[arg(long)]
    problem: Option<String>,
    /// gd | momentum | nag | adam | ngd | nnag | ngdm
    #[arg(long)]
    optimizer: Option<String>,
    /// Learning rate η (also ε/κ for the NGD family). Default 0.05.
    #[arg(long)]
    lr: Option<f64>,
    /// Iteration budget; defaults to the problem's budget.
    #[arg(long)]
    iters: Option<usize>,
    /// History length m for ngdm. Default 2.
    #[arg(long)]
    m: Option<usize>,
    /// Negative lower bound k of the ngdm learning-rate QP. Default -1000.
    #[arg(long)]
    k: Option<f64>,
    /// Qubit count (narrow-gorge, tfim, file).
    #[arg(long)]
    qubits: Option<usize>,
    /// Ry-ansatz depth (tfim, file). Default 2.
    #[arg(long)]
    depth: Option<usize>,
    /// linear | full. Defaults: tfim -> full, file -> linear.
    #[arg(long)]
    entanglement: Option<String>,
    /// Hamiltonian text file (`file` problem).
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// zeros | pi/2 | random | comma-separated angles.
    #[arg(long)]
    init: Option<String>,
    /// Dimension of the quadratic problem.
    #[arg(long)]
    dim: Option<usize>,
    /// Optimum of the quadratic problem as a comma-separated list.
    #[arg(long, value_name = "CSV")]
    x_star: Option<String>,
    /// Momentum coefficient β. Default 0.9.
    #[arg(long)]
    momentum: Option<f64>,
    #[arg(long)]
    beta1: Option<f64>,
    #[arg(long)]
    beta2: Option<f64>,
    #[arg(long = "adam-epsilon")]
    adam_epsilon: Option<f64>,
    /// Vanishing-gradient tolerance. Default 1e-12.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Seed for randomized init policies. Default 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Energy thresholds reported by the summary (repeatable).
    #[arg(long = "threshold")]
    thresholds: Vec<f64>,
    /// Record wall-clock milliseconds in the ms column (makes reruns
    /// non-identical).
    #[arg(long = "record-timing")]
    record_timing: bool,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", error_kind(&e));
            ExitCode::FAILURE
        }
    }
}

fn execute(args: &RunArgs) -> Result<(), Error> {
    let file = match &args.config {
        Some(path) => ConfigFile::parse(&std::fs::read_to_string(path)?)?,
        None => ConfigFile::default(),
    };
    let run_config = build_run_config(args, &file)?;
    let output = run_and_write(&run_config)?;

    match output.status {
        RunStatus::Completed => println!("status: completed"),
        RunStatus::GradientVanished { iteration } => {
            println!("status: gradient vanished at iteration {iteration}")
        }
    }
    if let Some(path) = &run_config.output {
        println!("wrote {} ({} rows)", path.display(), output.trace.len());
    }
    let label = format!(
        "{}/{}",
        problem_label(&run_config.problem),
        run_config.optimizer.algorithm
    );
    let mut thresholds = args.thresholds.clone();
    if thresholds.is_empty() {
        if let Some(list) = file.get("run", "thresholds") {
            thresholds = parse_csv_list(list, "run.thresholds")?;
        }
    }
    print!("{}", summarize(&[(label, &output.trace)], &thresholds));
    Ok(())
}

fn problem_label(problem: &ProblemSpec<f64>) -> String {
    match problem {
        ProblemSpec::NarrowGorge { n_qubits } => format!("narrow-gorge-{n_qubits}"),
        ProblemSpec::H2Toy => "h2".into(),
        ProblemSpec::Tfim { n_qubits, .. } => format!("tfim-{n_qubits}"),
        ProblemSpec::FromFile { path, .. } => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "file".into()),
        ProblemSpec::Quadratic { x_star } => format!("quadratic-{}", x_star.len()),
    }
}

/// Flag value, else config value, else none.
fn setting<'a>(
    flag: Option<&'a str>,
    file: &'a ConfigFile,
    section: &str,
    key: &str,
) -> Option<&'a str> {
    flag.or_else(|| file.get(section, key))
}

fn parse_from<T: std::str::FromStr>(value: &str, what: &str) -> Result<T, Error> {
    value
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("malformed {what}: `{value}`")))
}

fn numeric<T: std::str::FromStr>(
    flag: Option<T>,
    file: &ConfigFile,
    section: &str,
    key: &str,
) -> Result<Option<T>, Error> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => match file.get(section, key) {
            Some(text) => Ok(Some(parse_from(text, &format!("{section}.{key}"))?)),
            None => Ok(None),
        },
    }
}

fn parse_csv_list(text: &str, what: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|tok| parse_from(tok.trim(), what))
        .collect()
}

fn parse_init(text: &str) -> Result<InitPolicy<f64>, Error> {
    match text {
        "zeros" => Ok(InitPolicy::Zeros),
        "pi/2" => Ok(InitPolicy::PiOverTwo),
        "random" => Ok(InitPolicy::Random),
        other => Ok(InitPolicy::Explicit(parse_csv_list(other, "init list")?)),
    }
}

fn build_run_config(args: &RunArgs, file: &ConfigFile) -> Result<RunConfig<f64>, Error> {
    let problem_name = setting(args.problem.as_deref(), file, "problem", "name")
        .ok_or_else(|| Error::InvalidConfig("no problem selected (--problem)".into()))?
        .to_string();

    let qubits = numeric(args.qubits, file, "problem", "qubits")?;
    let depth = numeric(args.depth, file, "problem", "depth")?.unwrap_or(2);
    let entanglement = match setting(
        args.entanglement.as_deref(),
        file,
        "problem",
        "entanglement",
    ) {
        Some(text) => Some(text.parse::<Entanglement>()?),
        None => None,
    };
    let init = match setting(args.init.as_deref(), file, "problem", "init") {
        Some(text) => Some(parse_init(text)?),
        None => None,
    };
    let hamiltonian = match &args.hamiltonian {
        Some(p) => Some(p.clone()),
        None => file.get("problem", "hamiltonian").map(PathBuf::from),
    };

    let need_qubits =
        || qubits.ok_or_else(|| Error::InvalidConfig(format!("{problem_name} needs --qubits")));
    let problem = match problem_name.as_str() {
        "narrow-gorge" | "narrow_gorge" => ProblemSpec::NarrowGorge {
            n_qubits: need_qubits()?,
        },
        "h2" => ProblemSpec::H2Toy,
        "tfim" => ProblemSpec::Tfim {
            n_qubits: need_qubits()?,
            depth,
            entanglement: entanglement.unwrap_or(Entanglement::Full),
        },
        "file" => {
            let path = hamiltonian
                .ok_or_else(|| Error::InvalidConfig("file problem needs --hamiltonian".into()))?;
            ProblemSpec::FromFile {
                path,
                ansatz: AnsatzSpec::ry(
                    need_qubits()?,
                    depth,
                    entanglement.unwrap_or(Entanglement::Linear),
                ),
                init: init.clone().unwrap_or(InitPolicy::Zeros),
            }
        }
        "quadratic" => {
            let x_star = match setting(args.x_star.as_deref(), file, "problem", "x_star") {
                Some(list) => parse_csv_list(list, "x_star")?,
                None => {
                    let dim = numeric(args.dim, file, "problem", "dim")?.ok_or_else(|| {
                        Error::InvalidConfig("quadratic needs --dim or --x-star".into())
                    })?;
                    vec![0.0; dim]
                }
            };
            ProblemSpec::Quadratic { x_star }
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown problem `{other}` (narrow-gorge | h2 | tfim | file | quadratic)"
            )))
        }
    };

    let algorithm: Algorithm = setting(args.optimizer.as_deref(), file, "optimizer", "name")
        .ok_or_else(|| Error::InvalidConfig("no optimizer selected (--optimizer)".into()))?
        .parse()?;
    let mut optimizer = OptimizerConfig::new(algorithm);
    if let Some(v) = numeric(args.lr, file, "optimizer", "lr")? {
        optimizer = optimizer.with_learning_rate(v);
    }
    if let Some(v) = numeric(args.momentum, file, "optimizer", "momentum")? {
        optimizer = optimizer.with_momentum(v);
    }
    let beta1 = numeric(args.beta1, file, "optimizer", "beta1")?.unwrap_or(optimizer.beta1);
    let beta2 = numeric(args.beta2, file, "optimizer", "beta2")?.unwrap_or(optimizer.beta2);
    optimizer = optimizer.with_adam_betas(beta1, beta2);
    if let Some(v) = numeric(args.adam_epsilon, file, "optimizer", "adam-epsilon")? {
        optimizer = optimizer.with_adam_epsilon(v);
    }
    if let Some(v) = numeric(args.m, file, "optimizer", "m")? {
        optimizer = optimizer.with_history_length(v);
    }
    if let Some(v) = numeric(args.k, file, "optimizer", "k")? {
        optimizer = optimizer.with_qp_lower_bound(v);
    }
    if let Some(v) = numeric(args.tolerance, file, "optimizer", "tolerance")? {
        optimizer = optimizer.with_norm_tolerance(v);
    }
    optimizer.validate()?;

    let mut config = RunConfig::new(problem, optimizer);
    config.max_iterations = numeric(args.iters, file, "run", "iters")?;
    config.seed = numeric(args.seed, file, "run", "seed")?.unwrap_or(0);
    config.record_timing =
        args.record_timing || matches!(file.get("run", "record-timing"), Some("true") | Some("1"));
    // For non-file problems --init overrides the built-in start point.
    if !matches!(config.problem, ProblemSpec::FromFile { .. }) {
        config.init_override = init;
    }
    config.output = match &args.out {
        Some(p) => Some(p.clone()),
        None => file.get("run", "out").map(PathBuf::from),
    };
    if config.output.is_none() {
        return Err(Error::InvalidConfig("no output path (--out)".into()));
    }
    Ok(config)
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::EmptyHamiltonian => "empty_hamiltonian",
        Error::QubitCount { .. } => "qubit_count",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::ParameterCount { .. } => "parameter_count",
        Error::NotNormalized { .. } => "not_normalized",
        Error::InvalidCircuit(_) => "invalid_circuit",
        Error::InvalidAnsatz(_) => "invalid_ansatz",
        Error::InvalidConfig(_) => "invalid_config",
        Error::VanishingGradient => "vanishing_gradient",
        Error::ParameterShiftUnsupported => "parameter_shift_unsupported",
        Error::QubitCountMismatch { .. } => "qubit_count_mismatch",
        Error::Csv { .. } => "csv",
        Error::Io(_) => "io",
    }
}
