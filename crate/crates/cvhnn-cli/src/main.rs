use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvhnn::harness::{self, ExperimentConfig, VerdictReport, DEFAULT_RECTANGLE};
use cvhnn::state::ComplexPair;
use cvhnn::{
    dynamics, random_hermitian, ActivationKind, ActivationSpec, ComplexValue, NetworkModel, OrderPolicy, StateVector,
    UpdateMode, WeightGenConfig,
};
use serde_json::json;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  input error (unreadable or malformed file, dimension mismatch, I/O failure)
  2  usage error (invalid flags)
  3  validation failed (weights are not Hermitian with a real non-negative diagonal)";

/// Complex-valued Hopfield networks with phase and magnitude quantization.
#[derive(Parser)]
#[command(name = "cvhnn", version, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a model with random Hermitian weights and zero thresholds.
    GenWeights(GenWeightsArgs),
    /// Run a model from one initial state and print the verdict as JSON.
    Run(RunArgs),
    /// Run the multi-trial energy experiment and write report, trace and chart.
    Experiment(ExperimentArgs),
    /// Check the Hermitian weight conditions of a model file.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Csign,
    SplitSign,
    Coceil,
    Cosign,
}

impl From<Kind> for ActivationKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Csign => ActivationKind::CSign,
            Kind::SplitSign => ActivationKind::SplitSign,
            Kind::Coceil => ActivationKind::CoCeil,
            Kind::Cosign => ActivationKind::CoSign,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Serial,
    Parallel,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Cyclic,
    Shuffled,
}

#[derive(Args)]
struct ActivationArgs {
    /// Activation family [default: coceil]
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Resolution factor K [default: 4]
    #[arg(long = "k", value_parser = clap::value_parser!(u32).range(1..))]
    k: Option<u32>,
    /// Magnitude levels Q [default: 3]
    #[arg(long = "q", value_parser = clap::value_parser!(u32).range(1..))]
    q: Option<u32>,
    /// Magnitude quantum R [default: 2]
    #[arg(long = "r")]
    r: Option<f64>,
    /// Half-width of the undefined band around csign decision rays [default: 0]
    #[arg(long)]
    boundary_epsilon: Option<f64>,
}

impl ActivationArgs {
    fn is_empty(&self) -> bool {
        self.kind.is_none()
            && self.k.is_none()
            && self.q.is_none()
            && self.r.is_none()
            && self.boundary_epsilon.is_none()
    }

    /// Flags layered over `base`.
    fn over(&self, base: ActivationSpec) -> Result<ActivationSpec, Failure> {
        ActivationSpec::new(
            self.kind.map_or(base.kind(), Into::into),
            self.k.unwrap_or(base.k()),
            self.q.unwrap_or(base.q()),
            self.r.unwrap_or(base.r()),
            self.boundary_epsilon.unwrap_or(base.boundary_epsilon()),
        )
        .map_err(|e| Failure::Usage(e.to_string()))
    }

    fn resolve(&self) -> Result<ActivationSpec, Failure> {
        self.over(ExperimentConfig::default().activation)
    }
}

#[derive(Args)]
struct GenWeightsArgs {
    /// Number of neurons
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Seed of the normal draws
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output model file
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    activation: ActivationArgs,
}

#[derive(Args)]
struct RunArgs {
    /// Model file
    #[arg(long)]
    model: PathBuf,
    /// Overrides of the model's activation
    #[command(flatten)]
    activation: ActivationArgs,
    #[arg(long, value_enum, default_value_t = Mode::Serial)]
    mode: Mode,
    /// Serial visiting order
    #[arg(long, value_enum, default_value_t = Order::Cyclic)]
    order: Order,
    /// Seed of the shuffled order
    #[arg(long, default_value_t = 0)]
    order_seed: u64,
    /// Serial sweeps, or parallel steps, before giving up
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    sweeps: u64,
    /// Seed of the sampled initial state [default: 1]
    #[arg(long)]
    init_seed: Option<u64>,
    /// Initial state file: a JSON array of [re, im] pairs from the image set
    #[arg(long, conflicts_with = "init_seed")]
    init: Option<PathBuf>,
    /// Write the energy trace CSV here
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    activation: ActivationArgs,
    /// Number of neurons
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Number of initial states
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Serial sweeps, or parallel steps, per trial
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    sweeps: u64,
    #[arg(long, value_enum, default_value_t = Mode::Serial)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    weight_seed: u64,
    #[arg(long, default_value_t = 1)]
    state_seed: u64,
    /// Lower corner of the coceil sampling square
    #[arg(long, default_value_t = DEFAULT_RECTANGLE.0, allow_hyphen_values = true)]
    rect_min: f64,
    /// Upper corner of the coceil sampling square
    #[arg(long, default_value_t = DEFAULT_RECTANGLE.1, allow_hyphen_values = true)]
    rect_max: f64,
    /// Radius of the cosign sampling disk [default: Q·R]
    #[arg(long)]
    disk_radius: Option<f64>,
    /// Directory for report.json, energy_trace.csv and energy.svg
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Model file
    #[arg(long)]
    model: PathBuf,
}

enum Failure {
    Input(String),
    Usage(String),
    Validation,
}

impl From<cvhnn::Error> for Failure {
    fn from(e: cvhnn::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load_model(path: &PathBuf) -> Result<NetworkModel, Failure> {
    NetworkModel::load(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_json(value: &serde_json::Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn update_mode(mode: Mode, order: Order, seed: u64) -> UpdateMode {
    match (mode, order) {
        (Mode::Parallel, _) => UpdateMode::Parallel,
        (Mode::Serial, Order::Cyclic) => UpdateMode::SERIAL,
        (Mode::Serial, Order::Shuffled) => UpdateMode::Serial {
            order: OrderPolicy::Shuffled { seed },
        },
    }
}

fn gen_weights(args: GenWeightsArgs) -> Result<(), Failure> {
    let spec = args.activation.resolve()?;
    let weights = random_hermitian(&WeightGenConfig {
        n: args.n as usize,
        seed: args.seed,
    });
    NetworkModel::with_zero_thresholds(weights, spec)?.save(&args.out)?;
    Ok(())
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut model = load_model(&args.model)?;
    if !args.activation.is_empty() {
        let spec = args.activation.over(*model.activation())?;
        model = model.with_activation(spec);
    }
    let spec = *model.activation();

    let initial = match &args.init {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let pairs: Vec<ComplexPair> =
                serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let values: Vec<ComplexValue> = pairs.into_iter().map(Into::into).collect();
            StateVector::from_values(&spec, &values)?
        }
        None => {
            let cfg = ExperimentConfig {
                n: model.n(),
                activation: spec,
                state_seed: args.init_seed.unwrap_or(1),
                ..Default::default()
            };
            harness::sample_initial(&cfg, &mut cfg.trial_rng(0))?
        }
    };

    let mode = update_mode(args.mode, args.order, args.order_seed);
    let record = dynamics::run(&model, &initial, mode, args.sweeps as usize)?;
    if let Some(path) = &args.trace {
        let mut out = BufWriter::new(File::create(path)?);
        harness::write_trace_csv(std::slice::from_ref(&record), &mut out)?;
        out.flush()?;
    }
    print_json(&json!({
        "verdict": VerdictReport::from(&record.verdict),
        "updates": record.steps.len(),
        "initial_state": record.initial.to_pairs(&spec),
        "final_state": record.final_state().to_pairs(&spec),
        "initial_energy": record.initial_energy,
        "final_energy": record.final_energy(),
    }))
}

fn experiment(args: ExperimentArgs) -> Result<(), Failure> {
    let config = ExperimentConfig {
        n: args.n as usize,
        activation: args.activation.resolve()?,
        trials: args.trials as usize,
        sweeps: args.sweeps as usize,
        mode: update_mode(args.mode, Order::Cyclic, 0),
        weight_seed: args.weight_seed,
        state_seed: args.state_seed,
        rectangle: (args.rect_min, args.rect_max),
        disk_radius: args.disk_radius,
    };
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let report = harness::run_experiment(&config)?;
    harness::write_artifacts(&report, &args.out_dir)?;
    let s = &report.summary;
    println!(
        "{} trials: {} converged, {} cycling, {} unresolved; max energy rise {}; wrote {}",
        report.trials.len(),
        s.converged,
        s.cycles.values().sum::<usize>(),
        s.unresolved,
        s.max_energy_increase,
        args.out_dir.display()
    );
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let report = model.validate_hermitian();
    print_json(&serde_json::to_value(report).expect("plain struct"))?;
    if report.passes() {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenWeights(args) => gen_weights(args),
        Command::Run(args) => run(args),
        Command::Experiment(args) => experiment(args),
        Command::Validate(args) => validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Validation) => {
            eprintln!("error: weights do not satisfy W_ij = conj(W_ji) with a real non-negative diagonal");
            ExitCode::from(3)
        }
    }
}
