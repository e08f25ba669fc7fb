use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{norm_sq, ModalWeights, SpectralVectorField};

/// Deficit in the interpolation inequality
/// `||u||^2_{alpha-1} <= ||u||_{alpha-2} ||u||_alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeficitReport {
    pub alpha: f64,
    /// `||u||^4_{alpha-1} / (||u||^2_{alpha-2} ||u||^2_alpha)`, clamped to `[0, 1]`.
    pub ratio: f64,
    /// Unclamped ratio as computed.
    pub raw_ratio: f64,
    /// `1 - ratio`, evaluated without cancellation.
    pub deficit: f64,
    pub hs_alpha: f64,
}

/// Interpolation-deficit factor at order `alpha` in `[2, 5/2]`.
pub fn deficit_factor(u: &SpectralVectorField, alpha: f64) -> Result<DeficitReport> {
    if !(2.0..=2.5).contains(&alpha) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            constraint: "2 <= alpha <= 5/2",
        });
    }
    deficit_from_weights(&ModalWeights::of(u), alpha)
}

/// With `A = ||u||^2_{alpha-2}`, `B = ||u||^2_{alpha-1}`, `C = ||u||^2_alpha`
/// and `lambda* = B / A`, the numerator `AC - B^2` equals
/// `A sum_m mu^{alpha-2} (mu - lambda*)^2 w_m`, so the deficit is
/// `sum_m mu^{alpha-2} (mu - lambda*)^2 w_m / C`.
pub(crate) fn deficit_from_weights(weights: &ModalWeights, alpha: f64) -> Result<DeficitReport> {
    if weights.is_zero() {
        return Err(Error::ZeroField);
    }
    let a = weights.hs_norm_sq(alpha - 2.0);
    let b = weights.hs_norm_sq(alpha - 1.0);
    let c = weights.hs_norm_sq(alpha);
    let raw_ratio = b * b / (a * c);
    let lambda_star = b / a;
    let deficit = (weights.shifted_sq(alpha - 2.0, lambda_star) / c).clamp(0.0, 1.0);
    if !raw_ratio.is_finite() || !deficit.is_finite() {
        return Err(Error::NonFinite("deficit"));
    }
    Ok(DeficitReport {
        alpha,
        ratio: raw_ratio.clamp(0.0, 1.0),
        raw_ratio,
        deficit,
        hs_alpha: c.sqrt(),
    })
}

/// Radii of the thresholded Fourier support.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandReport {
    /// Smallest occupied `|k| / L`.
    pub r1: f64,
    /// Largest occupied `|k| / L`.
    pub r2: f64,
    pub threshold: f64,
    /// `1 - (r1 / r2)^4`.
    pub band_deficit_bound: f64,
}

pub const DEFAULT_BAND_THRESHOLD: f64 = 1e-13;

/// Support radii over modes with `|u_k| > threshold * max |u_k|`.
pub fn band_radii(u: &SpectralVectorField, threshold: f64) -> Result<BandReport> {
    if !threshold.is_finite() || threshold < 0.0 {
        return Err(Error::OutOfRange {
            name: "threshold",
            value: threshold,
            constraint: "threshold >= 0",
        });
    }
    let peak = u.max_mode_magnitude();
    if peak == 0.0 {
        return Err(Error::ZeroField);
    }
    let grid = u.grid();
    let cut = threshold * peak;
    let mut m_lo = i64::MAX;
    let mut m_hi = 0;
    for (idx, k) in grid.wavevectors().enumerate().skip(1) {
        let v = u.coefficient(idx);
        let mag = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
        if mag > cut {
            let m = norm_sq(k);
            m_lo = m_lo.min(m);
            m_hi = m_hi.max(m);
        }
    }
    let l = grid.box_length();
    let r1 = (m_lo as f64).sqrt() / l;
    let r2 = (m_hi as f64).sqrt() / l;
    let q = m_lo as f64 / m_hi as f64;
    Ok(BandReport {
        r1,
        r2,
        threshold,
        band_deficit_bound: (1.0 - q * q).clamp(0.0, 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use num_complex::Complex64;

    fn shell_pair(grid: Grid, a1: f64, a2: f64) -> SpectralVectorField {
        // e2 polarized modes at k = (1,0,0) and k = (2,0,0)
        SpectralVectorField::from_fn(grid, |k| {
            let z = Complex64::new(0.0, 0.0);
            match k {
                [1, 0, 0] | [-1, 0, 0] => [z, Complex64::new(a1, 0.0), z],
                [2, 0, 0] | [-2, 0, 0] => [z, Complex64::new(a2, 0.0), z],
                _ => [z; 3],
            }
        })
        .unwrap()
    }

    #[test]
    fn single_shell_has_no_deficit() {
        let u = shell_pair(Grid::unit(8).unwrap(), 0.0, 1.0);
        for alpha in [2.0, 2.25, 2.5] {
            let d = deficit_factor(&u, alpha).unwrap();
            assert!(d.deficit <= 1e-12);
            assert!((d.ratio - 1.0).abs() <= 1e-12);
        }
        let b = band_radii(&u, DEFAULT_BAND_THRESHOLD).unwrap();
        assert_eq!((b.r1, b.r2, b.band_deficit_bound), (2.0, 2.0, 0.0));
    }

    #[test]
    fn two_shell_hand_formula() {
        // Shell weights w1, w2 at mu1 = 4 pi^2, mu2 = 16 pi^2, chosen so the
        // H^{alpha-2} masses agree: w1 mu1^{alpha-2} = w2 mu2^{alpha-2}.
        let grid = Grid::unit(8).unwrap();
        for alpha in [2.0, 2.25, 2.5] {
            let mu1 = 4.0 * std::f64::consts::PI.powi(2);
            let mu2 = 4.0 * mu1;
            // amplitude a on +-k gives weight 2 a^2 per shell (L = 1)
            let a2 = 1.0;
            let w2 = 2.0 * a2 * a2;
            let w1 = w2 * (mu2 / mu1).powf(alpha - 2.0);
            let a1 = (w1 / 2.0).sqrt();
            let u = shell_pair(grid, a1, a2);
            // equal masses m: A = 2m, B = m (mu1 + mu2), C = m (mu1^2 + mu2^2)
            let expected = 1.0 - (mu1 + mu2).powi(2) / (2.0 * (mu1 * mu1 + mu2 * mu2));
            let d = deficit_factor(&u, alpha).unwrap();
            assert!((d.deficit - expected).abs() <= 1e-12, "{alpha}: {} vs {expected}", d.deficit);
            assert!((d.deficit - (1.0 - d.raw_ratio)).abs() <= 1e-14);
        }
    }

    #[test]
    fn errors() {
        let g = Grid::unit(8).unwrap();
        let z = SpectralVectorField::zeros(g);
        assert!(matches!(deficit_factor(&z, 2.0), Err(Error::ZeroField)));
        assert!(matches!(band_radii(&z, 1e-13), Err(Error::ZeroField)));
        let u = shell_pair(g, 1.0, 1.0);
        assert!(deficit_factor(&u, 1.5).is_err());
        assert!(deficit_factor(&u, 2.75).is_err());
    }
}
