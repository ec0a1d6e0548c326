//! Brute-force reference dynamics for tiny networks.
//!
//! Works on plain complex values with the value-level activation functions
//! and explicit sums, sharing nothing with the symbol-based engine except
//! those functions. Verdicts are read off the enumerated transition map.

#![allow(dead_code)]

use cvhnn::activation::{coceil, cosign, csign, split_sign};
use cvhnn::{ActivationKind, ActivationSpec, ComplexValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Converged { t0: usize },
    Cycle { length: usize, t0: usize },
}

pub struct TinyNet {
    pub weights: Vec<Vec<ComplexValue>>,
    pub thresholds: Vec<ComplexValue>,
    pub spec: ActivationSpec,
}

impl TinyNet {
    fn activate(&self, h: ComplexValue) -> Option<ComplexValue> {
        let s = &self.spec;
        match s.kind() {
            ActivationKind::CSign => csign(h, s.k(), s.boundary_epsilon()).value(),
            ActivationKind::SplitSign => Some(split_sign(h)),
            ActivationKind::CoCeil => Some(coceil(h, s.q(), s.r())),
            ActivationKind::CoSign => cosign(h, s.q(), s.r(), s.k(), s.boundary_epsilon()).value(),
        }
    }

    fn field(&self, state: &[ComplexValue], i: usize) -> ComplexValue {
        let mut h = ComplexValue::new(0.0, 0.0);
        for (w, s) in self.weights[i].iter().zip(state) {
            h += w * s;
        }
        h - self.thresholds[i]
    }

    pub fn update(&self, state: &[ComplexValue], i: usize) -> Vec<ComplexValue> {
        let mut next = state.to_vec();
        if let Some(v) = self.activate(self.field(state, i)) {
            next[i] = v;
        }
        next
    }

    pub fn parallel(&self, state: &[ComplexValue]) -> Vec<ComplexValue> {
        (0..state.len())
            .map(|i| self.activate(self.field(state, i)).unwrap_or(state[i]))
            .collect()
    }

    /// Every state of the network, as value vectors.
    pub fn all_states(&self, image: &[ComplexValue], n: usize) -> Vec<Vec<ComplexValue>> {
        (0..image.len().pow(n as u32))
            .map(|mut code| {
                (0..n)
                    .map(|_| {
                        let v = image[code % image.len()];
                        code /= image.len();
                        v
                    })
                    .collect()
            })
            .collect()
    }

    /// Verdict from the per-update state sequence, serial cyclic order.
    pub fn serial_verdict(&self, initial: &[ComplexValue], horizon: usize) -> OracleVerdict {
        let n = initial.len();
        let mut seq = vec![initial.to_vec()];
        for t in 0..horizon {
            let next = self.update(seq.last().unwrap(), t % n);
            seq.push(next);
        }
        classify(&seq)
    }

    pub fn parallel_verdict(&self, initial: &[ComplexValue], horizon: usize) -> OracleVerdict {
        let mut seq = vec![initial.to_vec()];
        for _ in 0..horizon {
            let next = self.parallel(seq.last().unwrap());
            seq.push(next);
        }
        classify(&seq)
    }
}

/// Minimal eventual period and its earliest onset, assuming the second half
/// of `seq` is already periodic.
fn classify(seq: &[Vec<ComplexValue>]) -> OracleVerdict {
    let end = seq.len();
    let tail = end / 2;
    let length = (1..end - tail)
        .find(|&l| (tail..end - l).all(|t| seq[t] == seq[t + l]))
        .expect("horizon too short");
    let mut t0 = tail;
    while t0 > 0 && seq[t0 - 1] == seq[t0 - 1 + length] {
        t0 -= 1;
    }
    if length == 1 {
        OracleVerdict::Converged { t0 }
    } else {
        OracleVerdict::Cycle { length, t0 }
    }
}
