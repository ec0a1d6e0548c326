//! Recurrent update engine.
//!
//! Neuron `i` is updated by
//!
//! ```text
//! S_i ← ψ( Σ_j W_ij S_j − T_i )
//! ```
//!
//! where `ψ` is the model's activation. When `ψ` is undefined at the net
//! contribution, `S_i` keeps its value. In serial mode one neuron is updated
//! at a time and sees every earlier update; in parallel mode all neurons read
//! the same state and are replaced together.
//!
//! Indices are zero-based throughout.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::model::NetworkModel;
use crate::state::StateVector;
use crate::weights::seeded_rng;

/// `Σ_j W_ij S_j − T_i`.
pub fn net_contribution(model: &NetworkModel, state: &StateVector, i: usize) -> ComplexValue {
    let spec = model.activation();
    let row = model.weights().row(i);
    let field: ComplexValue = row.iter().zip(state.symbols()).map(|(&w, &s)| w * spec.value(s)).sum();
    field - model.thresholds()[i]
}

fn update_in_place(model: &NetworkModel, state: &mut StateVector, i: usize) -> bool {
    let h = net_contribution(model, state, i);
    match model.activation().quantize(h) {
        Some(next) if next != state.get(i) => {
            state.set(i, next);
            true
        }
        _ => false,
    }
}

/// Updates neuron `i`, returning the new state and whether `S_i` changed.
pub fn update_neuron(model: &NetworkModel, state: &StateVector, i: usize) -> (StateVector, bool) {
    let mut next = state.clone();
    let changed = update_in_place(model, &mut next, i);
    (next, changed)
}

/// Updates the neurons one after another in `order`.
pub fn serial_sweep(model: &NetworkModel, state: &StateVector, order: &[usize]) -> Result<(StateVector, bool)> {
    check_permutation(order, model.n())?;
    let mut next = state.clone();
    let mut any_changed = false;
    for &i in order {
        any_changed |= update_in_place(model, &mut next, i);
    }
    Ok((next, any_changed))
}

/// Updates every neuron from the same input state.
pub fn parallel_step(model: &NetworkModel, state: &StateVector) -> StateVector {
    let spec = model.activation();
    let symbols = (0..model.n())
        .map(|i| spec.quantize(net_contribution(model, state, i)).unwrap_or(state.get(i)))
        .collect();
    StateVector::new(spec, symbols).expect("quantizer output lies in the image set")
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidConfig(format!(
                "update order {order:?} is not a permutation of 0..{n}"
            )));
        }
    }
    if order.len() != n {
        return Err(Error::InvalidConfig(format!(
            "update order {order:?} is not a permutation of 0..{n}"
        )));
    }
    Ok(())
}

/// Relative tolerance on the imaginary part of the quadratic form.
pub const ENERGY_IMAG_TOLERANCE: f64 = 1e-9;

/// `E(S) = −½ Σ_i Σ_j conj(S_i) W_ij S_j`.
///
/// The form is real only for Hermitian `W`, so non-Hermitian weights are
/// refused. Thresholds do not enter.
pub fn energy(model: &NetworkModel, state: &StateVector) -> Result<f64> {
    let report = model.validate_hermitian();
    if !report.is_hermitian {
        return Err(Error::NotHermitian {
            max_violation: report.max_violation,
        });
    }
    quadratic_energy(model, state)
}

fn quadratic_energy(model: &NetworkModel, state: &StateVector) -> Result<f64> {
    let s = state.values(model.activation());
    let w = model.weights();
    let mut form = ComplexValue::new(0.0, 0.0);
    for (i, si) in s.iter().enumerate() {
        let field: ComplexValue = w.row(i).iter().zip(&s).map(|(&wij, &sj)| wij * sj).sum();
        form += si.conj() * field;
    }
    let e = -0.5 * form;
    if e.im.abs() > ENERGY_IMAG_TOLERANCE * (1.0 + e.re.abs()) {
        return Err(Error::ComplexEnergy { real: e.re, imag: e.im });
    }
    Ok(e.re)
}

/// Order in which a serial sweep visits the neurons.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum OrderPolicy {
    /// `0, 1, …, N−1` every sweep.
    #[default]
    Cyclic,
    /// A fresh random permutation per sweep, drawn from `seed`.
    Shuffled { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum UpdateMode {
    Serial { order: OrderPolicy },
    Parallel,
}

impl UpdateMode {
    pub const SERIAL: UpdateMode = UpdateMode::Serial {
        order: OrderPolicy::Cyclic,
    };
}

/// How a run ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `state` is a fixed point, reached at update/step `t0`.
    Converged { state: StateVector, t0: usize },
    /// `S(t + length) = S(t)` for all `t ≥ t0`, with `length ≥ 2` minimal.
    /// Serial cycles are measured in single-neuron updates.
    Cycle { length: usize, t0: usize },
    /// The sweep budget ran out first.
    Unresolved,
}

impl Verdict {
    pub fn is_converged(&self) -> bool {
        matches!(self, Verdict::Converged { .. })
    }

    pub fn cycle_length(&self) -> Option<usize> {
        match self {
            Verdict::Cycle { length, .. } => Some(*length),
            _ => None,
        }
    }
}

/// One update of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryStep {
    /// 1-based count of updates (serial) or steps (parallel).
    pub update: usize,
    /// Neuron touched by a serial update; `None` for a parallel step.
    pub neuron: Option<usize>,
    pub state: StateVector,
    /// `None` when the weights are not Hermitian.
    pub energy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub initial: StateVector,
    pub initial_energy: Option<f64>,
    pub steps: Vec<TrajectoryStep>,
    pub verdict: Verdict,
}

impl TrajectoryRecord {
    pub fn final_state(&self) -> &StateVector {
        self.steps.last().map_or(&self.initial, |s| &s.state)
    }

    pub fn final_energy(&self) -> Option<f64> {
        self.steps.last().map_or(self.initial_energy, |s| s.energy)
    }

    /// Energies starting with the initial state.
    pub fn energies(&self) -> Option<Vec<f64>> {
        std::iter::once(self.initial_energy)
            .chain(self.steps.iter().map(|s| s.energy))
            .collect()
    }

    /// Largest `E(t+1) − E(t)` along the trajectory, or 0 when the energy
    /// never rose.
    pub fn max_energy_increase(&self) -> Option<f64> {
        let e = self.energies()?;
        Some(e.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max))
    }

    fn state_at(&self, t: usize) -> &StateVector {
        if t == 0 {
            &self.initial
        } else {
            &self.steps[t - 1].state
        }
    }
}

/// Iterates the network from `initial` until it settles, cycles, or runs out
/// of budget.
///
/// `max_sweeps` bounds the number of full serial sweeps, or of parallel
/// steps. A serial sweep in which no neuron changes means every neuron's
/// activation reproduces its current value, so the state is a fixed point
/// whatever the visiting order. Cycle detection hashes visited states; for
/// serial runs it is done at sweep boundaries and only under the cyclic
/// order, where the sweep map is deterministic.
pub fn run(
    model: &NetworkModel,
    initial: &StateVector,
    mode: UpdateMode,
    max_sweeps: usize,
) -> Result<TrajectoryRecord> {
    if max_sweeps == 0 {
        return Err(Error::InvalidConfig("max_sweeps must be at least 1".into()));
    }
    if initial.len() != model.n() {
        return Err(Error::Dimension {
            expected: model.n(),
            found: initial.len(),
        });
    }
    StateVector::new(model.activation(), initial.symbols().to_vec())?;

    let hermitian = model.validate_hermitian().is_hermitian;
    let energy_of = |s: &StateVector| -> Result<Option<f64>> {
        if hermitian {
            quadratic_energy(model, s).map(Some)
        } else {
            Ok(None)
        }
    };

    let mut record = TrajectoryRecord {
        initial: initial.clone(),
        initial_energy: energy_of(initial)?,
        steps: Vec::new(),
        verdict: Verdict::Unresolved,
    };
    match mode {
        UpdateMode::Serial { order } => run_serial(model, &mut record, order, max_sweeps, &energy_of)?,
        UpdateMode::Parallel => run_parallel(model, &mut record, max_sweeps, &energy_of)?,
    }
    Ok(record)
}

fn run_serial(
    model: &NetworkModel,
    record: &mut TrajectoryRecord,
    policy: OrderPolicy,
    max_sweeps: usize,
    energy_of: &dyn Fn(&StateVector) -> Result<Option<f64>>,
) -> Result<()> {
    let n = model.n();
    let mut state = record.initial.clone();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = match policy {
        OrderPolicy::Shuffled { seed } => Some(seeded_rng(seed)),
        OrderPolicy::Cyclic => None,
    };
    // sweep-boundary states, cyclic order only
    let mut seen: HashMap<StateVector, usize> = HashMap::new();
    seen.insert(state.clone(), 0);
    let mut last_change = 0;

    for sweep in 1..=max_sweeps {
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        let mut any_changed = false;
        for &i in &order {
            let changed = update_in_place(model, &mut state, i);
            let update = record.steps.len() + 1;
            if changed {
                any_changed = true;
                last_change = update;
            }
            record.steps.push(TrajectoryStep {
                update,
                neuron: Some(i),
                state: state.clone(),
                energy: energy_of(&state)?,
            });
        }
        if !any_changed {
            record.verdict = Verdict::Converged { state, t0: last_change };
            return Ok(());
        }
        if rng.is_none() {
            if let Some(&earlier) = seen.get(&state) {
                record.verdict = serial_cycle(record, earlier * n, sweep * n);
                return Ok(());
            }
            seen.insert(state.clone(), sweep);
        }
    }
    Ok(())
}

/// Exact period of the per-update state sequence, given that the states at
/// updates `start` and `end` coincide under a deterministic sweep map.
fn serial_cycle(record: &TrajectoryRecord, start: usize, end: usize) -> Verdict {
    let span = end - start;
    let at = |t: usize| record.state_at(t);
    let length = (1..=span)
        .filter(|&d| span.is_multiple_of(d))
        .find(|&d| (start..end).all(|t| at(t) == at(start + (t - start + d) % span)))
        .unwrap_or(span);
    let mut t0 = start;
    while t0 > 0 && at(t0 - 1) == at(t0 - 1 + length) {
        t0 -= 1;
    }
    Verdict::Cycle { length, t0 }
}

fn run_parallel(
    model: &NetworkModel,
    record: &mut TrajectoryRecord,
    max_steps: usize,
    energy_of: &dyn Fn(&StateVector) -> Result<Option<f64>>,
) -> Result<()> {
    let mut state = record.initial.clone();
    let mut seen: HashMap<StateVector, usize> = HashMap::new();
    seen.insert(state.clone(), 0);

    for step in 1..=max_steps {
        let next = parallel_step(model, &state);
        record.steps.push(TrajectoryStep {
            update: step,
            neuron: None,
            state: next.clone(),
            energy: energy_of(&next)?,
        });
        if let Some(&earlier) = seen.get(&next) {
            record.verdict = if step - earlier == 1 {
                Verdict::Converged {
                    state: next,
                    t0: earlier,
                }
            } else {
                Verdict::Cycle {
                    length: step - earlier,
                    t0: earlier,
                }
            };
            return Ok(());
        }
        seen.insert(next.clone(), step);
        state = next;
    }
    Ok(())
}
