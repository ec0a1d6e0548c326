use std::fmt;

use rand::RngExt;
use serde::Serialize;

use super::{sample_initial, ExperimentConfig, Summary};
use crate::activation::ActivationSpec;
use crate::dynamics::{self, UpdateMode};
use crate::error::{Error, Result};
use crate::model::NetworkModel;
use crate::weights::{random_hermitian, seeded_rng, WeightGenConfig};

/// Largest network the evidence suite accepts.
pub const MAX_SUITE_SIZE: usize = 16;

/// Parameters of [`conjecture_suite`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub activations: Vec<ActivationSpec>,
    /// Serial sweeps, or parallel steps, before a run is unresolved.
    pub max_sweeps: usize,
    pub seed: u64,
}

/// Tally for one (activation, size, mode) cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteRow {
    pub activation: ActivationSpec,
    pub n: usize,
    pub mode: &'static str,
    pub trials: usize,
    #[serde(flatten)]
    pub summary: Summary,
}

impl SuiteRow {
    pub fn cycles_longer_than(&self, length: usize) -> usize {
        self.summary.cycles.range(length + 1..).map(|(_, c)| c).sum()
    }
}

impl fmt::Display for SuiteRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = if self.summary.cycles.is_empty() {
            "-".to_string()
        } else {
            self.summary
                .cycles
                .iter()
                .map(|(l, c)| format!("L{l}:{c}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "{:<10} K={:<2} Q={:<2} R={:<4} N={:<3} {:<8} converged {:>4}/{:<4} cycles {:<12} unresolved {:>3}  max dE {:.3e}",
            self.activation.kind(),
            self.activation.k(),
            self.activation.q(),
            self.activation.r(),
            self.n,
            self.mode,
            self.summary.converged,
            self.trials,
            cycles,
            self.summary.unresolved,
            self.summary.max_energy_increase
        )
    }
}

/// Runs `trials` random (Hermitian weights, initial state) pairs for every
/// activation and size, in serial (cyclic order) and in parallel mode, and
/// tallies verdicts and the largest single-update energy rise.
///
/// Both modes see the same weights and initial states.
pub fn conjecture_suite(config: &SuiteConfig) -> Result<Vec<SuiteRow>> {
    if let Some(&n) = config.sizes.iter().find(|&&n| n == 0 || n > MAX_SUITE_SIZE) {
        return Err(Error::InvalidConfig(format!(
            "suite sizes must lie in 1..={MAX_SUITE_SIZE}, got {n}"
        )));
    }
    if config.trials == 0 || config.max_sweeps == 0 {
        return Err(Error::InvalidConfig("trials and max_sweeps must be positive".into()));
    }

    let mut rows = Vec::new();
    for (a, &activation) in config.activations.iter().enumerate() {
        for &n in &config.sizes {
            let mut seeds = seeded_rng(config.seed);
            seeds.set_stream(((a as u64) << 32) | n as u64);
            let mut serial = Summary::default();
            let mut parallel = Summary::default();
            for _ in 0..config.trials {
                let (weight_seed, state_seed): (u64, u64) = (seeds.random(), seeds.random());
                let experiment = ExperimentConfig {
                    n,
                    activation,
                    state_seed,
                    ..ExperimentConfig::default()
                };
                let weights = random_hermitian(&WeightGenConfig { n, seed: weight_seed });
                let model = NetworkModel::with_zero_thresholds(weights, activation)?;
                let initial = sample_initial(&experiment, &mut experiment.trial_rng(0))?;
                for (mode, summary) in [(UpdateMode::SERIAL, &mut serial), (UpdateMode::Parallel, &mut parallel)] {
                    let record = dynamics::run(&model, &initial, mode, config.max_sweeps)?;
                    let rise = record.max_energy_increase().expect("Hermitian weights");
                    summary.record(&record.verdict, rise);
                }
            }
            for (mode, summary) in [("serial", serial), ("parallel", parallel)] {
                rows.push(SuiteRow {
                    activation,
                    n,
                    mode,
                    trials: config.trials,
                    summary,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_large_sizes() {
        let cfg = SuiteConfig {
            trials: 1,
            sizes: vec![17],
            activations: vec![ActivationSpec::split_sign()],
            max_sweeps: 10,
            seed: 0,
        };
        assert!(conjecture_suite(&cfg).is_err());
    }

    #[test]
    fn split_sign_rows() {
        let cfg = SuiteConfig {
            trials: 20,
            sizes: vec![3, 6],
            activations: vec![ActivationSpec::split_sign()],
            max_sweeps: 200,
            seed: 5,
        };
        let rows = conjecture_suite(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert_eq!(
                row.summary.converged + row.summary.cycles.values().sum::<usize>() + row.summary.unresolved,
                20
            );
            assert_eq!(row.cycles_longer_than(2), 0, "{row}");
            assert_eq!(row.summary.unresolved, 0);
            if row.mode == "serial" {
                assert_eq!(row.summary.converged, 20);
                assert!(row.summary.max_energy_increase <= 1e-9);
            }
        }
    }
}
