use serde::{Deserialize, Serialize};

use crate::activation::{ActivationSpec, Symbol};
use crate::complex::ComplexValue;
use crate::error::{Error, Result};

/// Network state: one image set element per neuron, held as exact labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateVector {
    symbols: Vec<Symbol>,
}

impl StateVector {
    /// Builds a state after checking every symbol against the image set.
    pub fn new(spec: &ActivationSpec, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| !spec.contains(s)) {
            return Err(Error::InvalidConfig(format!("{bad:?} is not a {} state", spec.kind())));
        }
        Ok(StateVector { symbols })
    }

    /// Builds a state from complex values that must match image set
    /// elements exactly.
    pub fn from_values(spec: &ActivationSpec, values: &[ComplexValue]) -> Result<Self> {
        let symbols = values.iter().map(|&z| spec.symbol_of(z)).collect::<Result<Vec<_>>>()?;
        Ok(StateVector { symbols })
    }

    /// Every neuron set to the same symbol.
    pub fn uniform(spec: &ActivationSpec, n: usize, symbol: Symbol) -> Result<Self> {
        Self::new(spec, vec![symbol; n])
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, i: usize) -> Symbol {
        self.symbols[i]
    }

    pub(crate) fn set(&mut self, i: usize, symbol: Symbol) {
        self.symbols[i] = symbol;
    }

    pub fn values(&self, spec: &ActivationSpec) -> Vec<ComplexValue> {
        self.symbols.iter().map(|&s| spec.value(s)).collect()
    }

    /// `[re, im]` pairs, the layout used in JSON outputs.
    pub fn to_pairs(&self, spec: &ActivationSpec) -> Vec<ComplexPair> {
        self.values(spec).into_iter().map(ComplexPair::from).collect()
    }
}

/// A complex number serialized as a two-element array `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPair(pub [f64; 2]);

impl From<ComplexValue> for ComplexPair {
    fn from(z: ComplexValue) -> Self {
        ComplexPair([z.re, z.im])
    }
}

impl From<ComplexPair> for ComplexValue {
    fn from(p: ComplexPair) -> Self {
        ComplexValue::new(p.0[0], p.0[1])
    }
}
