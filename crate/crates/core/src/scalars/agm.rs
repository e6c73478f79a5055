//! Arithmetic-geometric mean.

use crate::error::{Error, Result};

/// Arithmetic-geometric mean of two positive numbers, converged to 1e-14
/// relative. Symmetric in its arguments; `agm(x, x) = x`.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::Invalid(format!("agm needs positive inputs, got {a}, {b}")));
    }
    let (mut x, mut y) = (a, b);
    for _ in 0..64 {
        if (x - y).abs() <= 1e-14 * x.abs().max(y.abs()) {
            break;
        }
        let (nx, ny) = ((x + y) / 2.0, (x * y).sqrt());
        x = nx;
        y = ny;
    }
    Ok((x + y) / 2.0)
}
