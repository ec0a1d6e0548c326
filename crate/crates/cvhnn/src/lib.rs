//! Complex-valued Hopfield networks with phase and magnitude quantization.
//!
//! The crate provides four quantizing activations (complex signum,
//! split-sign, component-wise ceiling and polar ceiling-signum), serial and
//! parallel network dynamics with fixed-point and cycle detection, the
//! quadratic energy, random Hermitian weights, and an experiment harness
//! that records energy traces.
//!
//! ```
//! use cvhnn::{ActivationSpec, NetworkModel, StateVector, UpdateMode, WeightGenConfig};
//! use cvhnn::{random_hermitian, run};
//!
//! let spec = ActivationSpec::cosign(3, 2.0, 4)?;
//! let weights = random_hermitian(&WeightGenConfig { n: 10, seed: 7 });
//! let model = NetworkModel::with_zero_thresholds(weights, spec)?;
//! let start = StateVector::uniform(&spec, 10, spec.symbols()[0])?;
//! let record = run(&model, &start, UpdateMode::SERIAL, 50)?;
//! println!("{:?} after {} updates", record.verdict, record.steps.len());
//! # Ok::<(), cvhnn::Error>(())
//! ```

pub mod activation;
pub mod complex;
pub mod dynamics;
mod error;
pub mod harness;
pub mod model;
pub mod state;
pub mod weights;

pub use activation::{image_set, ActivationKind, ActivationResult, ActivationSpec, Symbol};
pub use complex::ComplexValue;
pub use dynamics::{energy, run, OrderPolicy, TrajectoryRecord, UpdateMode, Verdict};
pub use error::{Error, Result};
pub use model::NetworkModel;
pub use state::StateVector;
pub use weights::{random_hermitian, validate, WeightGenConfig, WeightMatrix};
