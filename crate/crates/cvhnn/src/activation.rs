//! Quantizing activation functions.
//!
//! Four families are provided, each mapping a complex net contribution onto
//! a finite image set:
//!
//! | kind         | quantizes            | image set size |
//! |--------------|----------------------|----------------|
//! | [`csign`]    | phase                | `K`            |
//! | [`split_sign`] | sign of each part  | `4`            |
//! | [`coceil`]   | each Cartesian part  | `(Q+1)²`       |
//! | [`cosign`]   | magnitude and phase  | `Q·K`          |
//!
//! The phase quantizers are undefined on the rays `θ = (2ℓ−1)π/K` and at the
//! origin. They report that through [`ActivationResult::Undefined`] instead
//! of picking a sector, and the network keeps the neuron's previous state.
//!
//! Besides the value-level functions, every image set element has an exact
//! discrete label, a [`Symbol`]. Network states are stored as symbols so that
//! state comparison never relies on floating-point equality.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{magnitude, phase, ComplexValue};
use crate::error::{Error, Result};

/// Real sign with `sign(0) = +1`.
pub fn sign_real(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Heaviside step with `step(0) = 1`.
pub fn step(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Staircase quantizer onto `{0, 1, …, Q}`.
///
/// Returns 0 for negative input, `q` on `[(q−1)R, qR)` for `q < Q`, and `Q`
/// from `(Q−1)R` upwards. Intervals are closed on the left.
pub fn ceil_qr(x: f64, q: u32, r: f64) -> u32 {
    if x < 0.0 {
        return 0;
    }
    let mut level = 1;
    while level < q && x >= f64::from(level) * r {
        level += 1;
    }
    level
}

/// The same staircase written as `Σ_{q=1..Q} step(x − (q−1)R)`.
pub fn ceil_qr_superposed(x: f64, q: u32, r: f64) -> u32 {
    (1..=q).map(|level| step(x - f64::from(level - 1) * r)).sum::<f64>() as u32
}

/// Output of a quantizer that may be undefined on part of the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ActivationResult {
    Value(ComplexValue),
    /// The argument lies outside the activation's domain; the neuron keeps
    /// its current state.
    Undefined,
}

impl ActivationResult {
    pub fn value(self) -> Option<ComplexValue> {
        match self {
            ActivationResult::Value(z) => Some(z),
            ActivationResult::Undefined => None,
        }
    }

    pub fn is_undefined(self) -> bool {
        matches!(self, ActivationResult::Undefined)
    }
}

impl From<Option<ComplexValue>> for ActivationResult {
    fn from(value: Option<ComplexValue>) -> Self {
        value.map_or(ActivationResult::Undefined, ActivationResult::Value)
    }
}

/// Index of the phase sector containing `z`, or `None` on a decision ray
/// (within `boundary_epsilon`) or at the origin.
///
/// Sector `ℓ` is the open arc `((2ℓ−1)π/K, (2ℓ+1)π/K)`, taken modulo 2π.
pub fn csign_sector(z: ComplexValue, k: u32, boundary_epsilon: f64) -> Option<u32> {
    let theta = phase(z)?;
    let quantum = PI / f64::from(k);
    let ray = |m: u32| f64::from(m) * quantum;

    // nearest odd multiple of the quantum
    let u = theta / quantum;
    let odd = (2.0 * (u / 2.0).floor() + 1.0).min(f64::from(2 * k - 1)) as u32;
    if (theta - ray(odd)).abs() <= boundary_epsilon {
        return None;
    }

    let mut sector = ((u + 1.0) / 2.0).floor() as u32;
    if sector > 0 && theta < ray(2 * sector - 1) {
        sector -= 1;
    } else if theta > ray(2 * sector + 1) {
        sector += 1;
    }
    Some(sector % k)
}

/// `ε_ℓ = e^{2πiℓ/K}`, exact on the axes.
pub fn root_of_unity(sector: u32, k: u32) -> ComplexValue {
    let l = u64::from(sector % k);
    let k = u64::from(k);
    if (4 * l).is_multiple_of(k) {
        match 4 * l / k {
            0 => ComplexValue::new(1.0, 0.0),
            1 => ComplexValue::new(0.0, 1.0),
            2 => ComplexValue::new(-1.0, 0.0),
            _ => ComplexValue::new(0.0, -1.0),
        }
    } else {
        ComplexValue::from_polar(1.0, TAU * l as f64 / k as f64)
    }
}

/// Complex signum: phase quantization onto the `K`th roots of unity.
pub fn csign(z: ComplexValue, k: u32, boundary_epsilon: f64) -> ActivationResult {
    csign_sector(z, k, boundary_epsilon).map(|s| root_of_unity(s, k)).into()
}

/// Sign applied separately to the real and imaginary parts.
pub fn split_sign(z: ComplexValue) -> ComplexValue {
    ComplexValue::new(sign_real(z.re), sign_real(z.im))
}

/// [`ceil_qr`] applied to the real and imaginary parts.
pub fn coceil(z: ComplexValue, q: u32, r: f64) -> ComplexValue {
    ComplexValue::new(f64::from(ceil_qr(z.re, q, r)), f64::from(ceil_qr(z.im, q, r)))
}

/// Magnitude staircase times complex signum.
pub fn cosign(z: ComplexValue, q: u32, r: f64, k: u32, boundary_epsilon: f64) -> ActivationResult {
    csign_sector(z, k, boundary_epsilon)
        .map(|s| f64::from(ceil_qr(magnitude(z), q, r)) * root_of_unity(s, k))
        .into()
}

/// Activation family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActivationKind {
    #[serde(rename = "csign")]
    CSign,
    #[serde(rename = "split-sign")]
    SplitSign,
    #[serde(rename = "coceil")]
    CoCeil,
    #[serde(rename = "cosign")]
    CoSign,
}

impl ActivationKind {
    pub const ALL: [ActivationKind; 4] = [
        ActivationKind::CSign,
        ActivationKind::SplitSign,
        ActivationKind::CoCeil,
        ActivationKind::CoSign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActivationKind::CSign => "csign",
            ActivationKind::SplitSign => "split-sign",
            ActivationKind::CoCeil => "coceil",
            ActivationKind::CoSign => "cosign",
        }
    }
}

impl fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ActivationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ActivationKind::ALL
            .into_iter()
            .find(|kind| kind.name() == s)
            .ok_or_else(|| Error::InvalidActivation(format!("unknown activation kind `{s}`")))
    }
}

/// Exact label of an image set element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// `ε_sector` for the complex signum.
    Phase { sector: u32 },
    /// `±1 ± i`, `true` meaning `+1`.
    Quadrant { re_pos: bool, im_pos: bool },
    /// `re + im·i` on the integer lattice `{0..Q}²`.
    Lattice { re: u32, im: u32 },
    /// `ring · ε_sector` with `ring ∈ {1..Q}`.
    Polar { ring: u32, sector: u32 },
}

/// Activation family together with its parameters.
///
/// `k` is the resolution factor (csign, cosign), `q` the number of magnitude
/// levels and `r` the magnitude quantum (coceil, cosign). Parameters a kind
/// does not use are carried along but ignored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecFields", into = "SpecFields")]
pub struct ActivationSpec {
    kind: ActivationKind,
    k: u32,
    q: u32,
    r: f64,
    boundary_epsilon: f64,
}

#[derive(Serialize, Deserialize)]
struct SpecFields {
    kind: ActivationKind,
    #[serde(rename = "K")]
    k: u32,
    #[serde(rename = "Q")]
    q: u32,
    #[serde(rename = "R")]
    r: f64,
    #[serde(default)]
    boundary_epsilon: f64,
}

impl TryFrom<SpecFields> for ActivationSpec {
    type Error = Error;

    fn try_from(f: SpecFields) -> Result<Self> {
        ActivationSpec::new(f.kind, f.k, f.q, f.r, f.boundary_epsilon)
    }
}

impl From<ActivationSpec> for SpecFields {
    fn from(s: ActivationSpec) -> Self {
        SpecFields {
            kind: s.kind,
            k: s.k,
            q: s.q,
            r: s.r,
            boundary_epsilon: s.boundary_epsilon,
        }
    }
}

impl ActivationSpec {
    /// Validates `K ≥ 1`, `Q ≥ 1`, `R > 0` and a finite, non-negative
    /// boundary tolerance.
    pub fn new(kind: ActivationKind, k: u32, q: u32, r: f64, boundary_epsilon: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidActivation("K must be at least 1".into()));
        }
        if q == 0 {
            return Err(Error::InvalidActivation("Q must be at least 1".into()));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidActivation(format!("R must be positive, got {r}")));
        }
        if !(boundary_epsilon.is_finite() && boundary_epsilon >= 0.0) {
            return Err(Error::InvalidActivation(format!(
                "boundary_epsilon must be non-negative, got {boundary_epsilon}"
            )));
        }
        Ok(ActivationSpec {
            kind,
            k,
            q,
            r,
            boundary_epsilon,
        })
    }

    pub fn csign(k: u32) -> Result<Self> {
        Self::new(ActivationKind::CSign, k, 1, 1.0, 0.0)
    }

    pub fn split_sign() -> Self {
        ActivationSpec {
            kind: ActivationKind::SplitSign,
            k: 1,
            q: 1,
            r: 1.0,
            boundary_epsilon: 0.0,
        }
    }

    pub fn coceil(q: u32, r: f64) -> Result<Self> {
        Self::new(ActivationKind::CoCeil, 1, q, r, 0.0)
    }

    pub fn cosign(q: u32, r: f64, k: u32) -> Result<Self> {
        Self::new(ActivationKind::CoSign, k, q, r, 0.0)
    }

    pub fn with_boundary_epsilon(self, boundary_epsilon: f64) -> Result<Self> {
        Self::new(self.kind, self.k, self.q, self.r, boundary_epsilon)
    }

    pub fn kind(&self) -> ActivationKind {
        self.kind
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn boundary_epsilon(&self) -> f64 {
        self.boundary_epsilon
    }

    /// Evaluates the activation at `z`.
    pub fn apply(&self, z: ComplexValue) -> ActivationResult {
        self.quantize(z).map(|s| self.value(s)).into()
    }

    /// Evaluates the activation at `z`, returning the exact label of the
    /// result.
    pub fn quantize(&self, z: ComplexValue) -> Option<Symbol> {
        match self.kind {
            ActivationKind::CSign => {
                csign_sector(z, self.k, self.boundary_epsilon).map(|sector| Symbol::Phase { sector })
            }
            ActivationKind::SplitSign => Some(Symbol::Quadrant {
                re_pos: z.re >= 0.0,
                im_pos: z.im >= 0.0,
            }),
            ActivationKind::CoCeil => Some(Symbol::Lattice {
                re: ceil_qr(z.re, self.q, self.r),
                im: ceil_qr(z.im, self.q, self.r),
            }),
            ActivationKind::CoSign => csign_sector(z, self.k, self.boundary_epsilon).map(|sector| Symbol::Polar {
                ring: ceil_qr(magnitude(z), self.q, self.r),
                sector,
            }),
        }
    }

    /// The complex number a symbol stands for.
    ///
    /// # Panics
    ///
    /// If the symbol belongs to a different activation kind.
    pub fn value(&self, symbol: Symbol) -> ComplexValue {
        match (self.kind, symbol) {
            (ActivationKind::CSign, Symbol::Phase { sector }) => root_of_unity(sector, self.k),
            (ActivationKind::SplitSign, Symbol::Quadrant { re_pos, im_pos }) => {
                let unit = |pos: bool| if pos { 1.0 } else { -1.0 };
                ComplexValue::new(unit(re_pos), unit(im_pos))
            }
            (ActivationKind::CoCeil, Symbol::Lattice { re, im }) => ComplexValue::new(f64::from(re), f64::from(im)),
            (ActivationKind::CoSign, Symbol::Polar { ring, sector }) => f64::from(ring) * root_of_unity(sector, self.k),
            (kind, symbol) => panic!("{symbol:?} is not a {kind} symbol"),
        }
    }

    /// Whether `symbol` labels an element of this image set.
    pub fn contains(&self, symbol: Symbol) -> bool {
        match (self.kind, symbol) {
            (ActivationKind::CSign, Symbol::Phase { sector }) => sector < self.k,
            (ActivationKind::SplitSign, Symbol::Quadrant { .. }) => true,
            (ActivationKind::CoCeil, Symbol::Lattice { re, im }) => re <= self.q && im <= self.q,
            (ActivationKind::CoSign, Symbol::Polar { ring, sector }) => (1..=self.q).contains(&ring) && sector < self.k,
            _ => false,
        }
    }

    /// All labels of the image set, in a fixed order.
    pub fn symbols(&self) -> Vec<Symbol> {
        match self.kind {
            ActivationKind::CSign => (0..self.k).map(|sector| Symbol::Phase { sector }).collect(),
            ActivationKind::SplitSign => [(true, true), (true, false), (false, true), (false, false)]
                .into_iter()
                .map(|(re_pos, im_pos)| Symbol::Quadrant { re_pos, im_pos })
                .collect(),
            ActivationKind::CoCeil => (0..=self.q)
                .flat_map(|re| (0..=self.q).map(move |im| Symbol::Lattice { re, im }))
                .collect(),
            ActivationKind::CoSign => (1..=self.q)
                .flat_map(|ring| (0..self.k).map(move |sector| Symbol::Polar { ring, sector }))
                .collect(),
        }
    }

    /// Number of elements of the image set.
    pub fn image_size(&self) -> usize {
        match self.kind {
            ActivationKind::CSign => self.k as usize,
            ActivationKind::SplitSign => 4,
            ActivationKind::CoCeil => (self.q as usize + 1).pow(2),
            ActivationKind::CoSign => self.q as usize * self.k as usize,
        }
    }

    /// Finds the symbol whose value is exactly `z`.
    pub fn symbol_of(&self, z: ComplexValue) -> Result<Symbol> {
        self.symbols()
            .into_iter()
            .find(|&s| self.value(s) == z)
            .ok_or(Error::NotInImageSet(z))
    }
}

/// Enumerates the codomain of the activation.
pub fn image_set(spec: &ActivationSpec) -> Vec<ComplexValue> {
    spec.symbols().into_iter().map(|s| spec.value(s)).collect()
}
