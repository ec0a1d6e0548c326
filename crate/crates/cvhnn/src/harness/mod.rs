//! Experiment harness: initial-state samplers, multi-trial runs with energy
//! traces, and the convergence evidence suite.
//!
//! Every random draw is made from a [`seeded_rng`] stream, and each trial
//! reads its own stream, so a report is a pure function of its config.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, RngExt};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::activation::{ActivationKind, ActivationSpec};
use crate::complex::ComplexValue;
use crate::dynamics::{self, TrajectoryRecord, UpdateMode, Verdict};
use crate::error::{Error, Result};
use crate::model::NetworkModel;
use crate::state::{ComplexPair, StateVector};
use crate::weights::{random_hermitian, seeded_rng, WeightGenConfig};

mod output;
mod suite;

pub use output::{energy_chart_svg, write_artifacts, write_trace_csv, CHART_FILE, REPORT_FILE, TRACE_FILE};
pub use suite::{conjecture_suite, SuiteConfig, SuiteRow};

/// Rectangle `[min, max]²` from which CoCeil inputs are drawn.
pub const DEFAULT_RECTANGLE: (f64, f64) = (-3.0, 7.0);

/// Parameters of one experiment. [`ExperimentConfig::default`] is the
/// reference setup: ten neurons, `Q = 3`, `R = 2`, `K = 4`, five trials of
/// five cyclic serial sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub activation: ActivationSpec,
    pub trials: usize,
    pub sweeps: usize,
    pub mode: UpdateMode,
    pub weight_seed: u64,
    pub state_seed: u64,
    /// CoCeil sampling square `[min, max]²`.
    pub rectangle: (f64, f64),
    /// CoSign sampling disk radius; `None` means `Q·R`.
    pub disk_radius: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 10,
            activation: ActivationSpec::new(ActivationKind::CoCeil, 4, 3, 2.0, 0.0).expect("valid"),
            trials: 5,
            sweeps: 5,
            mode: UpdateMode::SERIAL,
            weight_seed: 0,
            state_seed: 1,
            rectangle: DEFAULT_RECTANGLE,
            disk_radius: None,
        }
    }
}

impl ExperimentConfig {
    /// Reference setup for the given activation kind.
    pub fn reference(kind: ActivationKind) -> Self {
        let base = Self::default();
        let a = base.activation;
        let activation = ActivationSpec::new(kind, a.k(), a.q(), a.r(), a.boundary_epsilon()).expect("valid");
        ExperimentConfig { activation, ..base }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.sweeps == 0 {
            return Err(Error::InvalidConfig("sweeps must be at least 1".into()));
        }
        let (lo, hi) = self.rectangle;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidConfig(format!("empty sampling rectangle [{lo}, {hi}]")));
        }
        if let Some(r) = self.disk_radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidConfig(format!("disk radius must be positive, got {r}")));
            }
        }
        Ok(())
    }

    pub fn disk_radius(&self) -> f64 {
        self.disk_radius
            .unwrap_or(f64::from(self.activation.q()) * self.activation.r())
    }

    /// Random stream of trial `trial`.
    pub fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = seeded_rng(self.state_seed);
        rng.set_stream(trial as u64);
        rng
    }
}

/// CoCeil initial state: each neuron is `coceil(a + b·i)` with `a`, `b`
/// uniform on `[min, max)`.
pub fn sample_initial_coceil<R: Rng>(
    spec: &ActivationSpec,
    n: usize,
    rectangle: (f64, f64),
    rng: &mut R,
) -> Result<StateVector> {
    if spec.kind() != ActivationKind::CoCeil {
        return Err(Error::InvalidConfig(format!(
            "rectangle sampler needs coceil, got {}",
            spec.kind()
        )));
    }
    let (lo, hi) = rectangle;
    let symbols = (0..n)
        .map(|_| {
            let z = ComplexValue::new(rng.random_range(lo..hi), rng.random_range(lo..hi));
            spec.quantize(z).expect("coceil is total")
        })
        .collect();
    StateVector::new(spec, symbols)
}

/// CoSign initial state: each neuron is `cosign(r·e^{iθ})` with `r` uniform
/// on `[0, radius)` and `θ` uniform on `[0, 2π)`, drawn independently (so
/// the points are not area-uniform). Draws landing on a decision ray are
/// redrawn.
pub fn sample_initial_cosign<R: Rng>(spec: &ActivationSpec, n: usize, radius: f64, rng: &mut R) -> Result<StateVector> {
    if spec.kind() != ActivationKind::CoSign {
        return Err(Error::InvalidConfig(format!(
            "disk sampler needs cosign, got {}",
            spec.kind()
        )));
    }
    let symbols = (0..n)
        .map(|_| loop {
            let r = rng.random_range(0.0..radius);
            let theta = rng.random_range(0.0..TAU);
            if let Some(s) = spec.quantize(ComplexValue::from_polar(r, theta)) {
                break s;
            }
        })
        .collect();
    StateVector::new(spec, symbols)
}

/// Each neuron drawn uniformly from the image set.
pub fn sample_uniform<R: Rng>(spec: &ActivationSpec, n: usize, rng: &mut R) -> StateVector {
    let symbols = spec.symbols();
    let picked = (0..n).map(|_| symbols[rng.random_range(0..symbols.len())]).collect();
    StateVector::new(spec, picked).expect("drawn from the image set")
}

/// Initial state for a trial: the rectangle sampler for CoCeil, the disk
/// sampler for CoSign, uniform symbols otherwise.
pub fn sample_initial<R: Rng>(config: &ExperimentConfig, rng: &mut R) -> Result<StateVector> {
    let spec = &config.activation;
    match spec.kind() {
        ActivationKind::CoCeil => sample_initial_coceil(spec, config.n, config.rectangle, rng),
        ActivationKind::CoSign => sample_initial_cosign(spec, config.n, config.disk_radius(), rng),
        ActivationKind::CSign | ActivationKind::SplitSign => Ok(sample_uniform(spec, config.n, rng)),
    }
}

/// Serializable form of a [`Verdict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VerdictReport {
    Converged { t0: usize },
    Cycle { length: usize, t0: usize },
    Unresolved,
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        match *v {
            Verdict::Converged { t0, .. } => VerdictReport::Converged { t0 },
            Verdict::Cycle { length, t0 } => VerdictReport::Cycle { length, t0 },
            Verdict::Unresolved => VerdictReport::Unresolved,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub verdict: VerdictReport,
    pub updates: usize,
    pub initial_state: Vec<ComplexPair>,
    pub final_state: Vec<ComplexPair>,
    pub initial_energy: f64,
    pub final_energy: f64,
    /// Largest single-update rise of the energy; 0 for a monotone trace.
    pub max_energy_increase: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub converged: usize,
    /// Cycle length → count.
    pub cycles: BTreeMap<usize, usize>,
    pub unresolved: usize,
    pub max_energy_increase: f64,
}

impl Summary {
    pub fn record(&mut self, verdict: &Verdict, energy_increase: f64) {
        match verdict {
            Verdict::Converged { .. } => self.converged += 1,
            Verdict::Cycle { length, .. } => *self.cycles.entry(*length).or_default() += 1,
            Verdict::Unresolved => self.unresolved += 1,
        }
        self.max_energy_increase = self.max_energy_increase.max(energy_increase);
    }
}

/// Outcome of [`run_experiment`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialReport>,
    pub summary: Summary,
    /// Full trajectories, one per trial; written to the trace CSV.
    #[serde(skip)]
    pub records: Vec<TrajectoryRecord>,
}

/// Builds one random Hermitian network and runs it from `trials` sampled
/// initial states, recording the energy after every update.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let weights = random_hermitian(&WeightGenConfig {
        n: config.n,
        seed: config.weight_seed,
    });
    let model = NetworkModel::with_zero_thresholds(weights, config.activation)?;

    let mut report = ExperimentReport {
        config: *config,
        trials: Vec::with_capacity(config.trials),
        summary: Summary::default(),
        records: Vec::with_capacity(config.trials),
    };
    for trial in 0..config.trials {
        let initial = sample_initial(config, &mut config.trial_rng(trial))?;
        let record = dynamics::run(&model, &initial, config.mode, config.sweeps)?;
        let energy = |e: Option<f64>| e.expect("generated weights are Hermitian");
        let increase = energy(record.max_energy_increase());
        report.summary.record(&record.verdict, increase);
        report.trials.push(TrialReport {
            trial,
            verdict: (&record.verdict).into(),
            updates: record.steps.len(),
            initial_state: record.initial.to_pairs(&config.activation),
            final_state: record.final_state().to_pairs(&config.activation),
            initial_energy: energy(record.initial_energy),
            final_energy: energy(record.final_energy()),
            max_energy_increase: increase,
        });
        report.records.push(record);
    }
    Ok(report)
}
