use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Sharp constant of the whole-space embedding `H^s dot(R^3) -> L^q`,
/// `1/q = 1/2 - s/3`:
///
/// `C_s = 2^{-s/3} pi^{-4s/3} (Gamma(3/2 - s) / Gamma(3/2 + s))^{1/2}`.
///
/// This is the R^3 constant. It is reported for reference only; the torus
/// embedding constant differs.
pub fn sharp_sobolev_constant(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.5) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            constraint: "0 < s < 3/2",
        });
    }
    let ratio = gamma(1.5 - s) / gamma(1.5 + s);
    Ok(2f64.powf(-s / 3.0) * PI.powf(-4.0 * s / 3.0) * ratio.sqrt())
}
