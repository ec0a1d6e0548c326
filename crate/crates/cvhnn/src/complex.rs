//! Complex scalars and their polar view.

use std::f64::consts::TAU;

/// A complex number `re + im·i`.
pub type ComplexValue = num_complex::Complex64;

/// Modulus `sqrt(re² + im²)`.
pub fn magnitude(z: ComplexValue) -> f64 {
    z.norm()
}

/// Argument of `z` normalized to `[0, 2π)`.
///
/// Returns `None` for `z = 0`, where the phase is undefined.
pub fn phase(z: ComplexValue) -> Option<f64> {
    if z.re == 0.0 && z.im == 0.0 {
        return None;
    }
    let mut theta = z.im.atan2(z.re);
    if theta < 0.0 {
        theta += TAU;
    }
    // tiny negative angles round up to exactly 2π, and atan2 may hand back -0.0
    if theta >= TAU || theta == 0.0 {
        theta = 0.0;
    }
    Some(theta)
}
