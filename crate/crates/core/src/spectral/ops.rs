use super::field::SpectralVectorField;
use super::grid::{norm_sq, Grid};
use crate::error::{Error, Result};

/// Leray projection onto divergence-free fields,
/// `u_k -> u_k - (k . u_k) k / |k|^2`.
pub fn leray_project(u: &SpectralVectorField) -> SpectralVectorField {
    u.map_modes(|k, v| {
        let k2 = norm_sq(k) as f64;
        let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
        let dot = (v[0] * kf[0] + v[1] * kf[1] + v[2] * kf[2]) / k2;
        [v[0] - dot * kf[0], v[1] - dot * kf[1], v[2] - dot * kf[2]]
    })
}

/// `-Laplacian u - lambda u`, the multiplier `(2 pi |k| / L)^2 - lambda`.
pub fn shifted_laplacian(u: &SpectralVectorField, lambda: f64) -> SpectralVectorField {
    let grid = *u.grid();
    u.multiply(|k| grid.laplacian_eigenvalue(k) - lambda)
}

/// `-Laplacian u`.
pub fn neg_laplacian(u: &SpectralVectorField) -> SpectralVectorField {
    shifted_laplacian(u, 0.0)
}

/// Integer rescaling `u^m(x) = m u(m x)` onto an `m n` grid of the same box:
/// the coefficient at `m k` is `m u_k`.
pub fn dilate(u: &SpectralVectorField, factor: usize) -> Result<SpectralVectorField> {
    if factor == 0 {
        return Err(Error::OutOfRange {
            name: "factor",
            value: 0.0,
            constraint: "factor >= 1",
        });
    }
    let grid = *u.grid();
    let target = Grid::new(grid.n() * factor, grid.box_length())?;
    let m = factor as i64;
    let s = factor as f64;
    let half = grid.n() as i64 / 2;
    SpectralVectorField::from_fn(target, |k| {
        if k.iter().any(|kj| kj % m != 0) {
            return [num_complex::Complex64::new(0.0, 0.0); 3];
        }
        let src = k.map(|kj| kj / m);
        // The source Nyquist plane has no partner in the larger grid.
        if src.iter().any(|&kj| kj == -half) {
            return [num_complex::Complex64::new(0.0, 0.0); 3];
        }
        u.at(src).map(|v| v * s)
    })
}

/// Homogeneous Sobolev norm `||u||_{H^alpha dot}`.
pub fn hs_norm(u: &SpectralVectorField, alpha: f64) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite("Sobolev order"));
    }
    if alpha < 0.0 {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            constraint: "alpha >= 0",
        });
    }
    Ok(ModalWeights::of(u).hs_norm_sq(alpha).sqrt())
}

/// `L^q` norm of the velocity magnitude by equal-weight quadrature on the
/// collocation grid.
pub fn lq_norm(u: &SpectralVectorField, q: f64) -> Result<f64> {
    u.to_physical().lq_norm(q)
}

/// Spectral energy of a field binned by exact lattice shell `|k|^2`:
/// `weight[m] = L^3 sum_{|k|^2 = m} |u_k|^2`. Every Sobolev quantity of the
/// field is a weighted sum over these bins.
#[derive(Clone, Debug)]
pub struct ModalWeights {
    grid: Grid,
    weights: Vec<f64>,
}

impl ModalWeights {
    pub fn of(u: &SpectralVectorField) -> Self {
        let grid = *u.grid();
        let n = grid.n() as i64;
        let max_m = 3 * (n / 2) * (n / 2);
        let mut weights = vec![0.0; max_m as usize + 1];
        for (idx, k) in grid.wavevectors().enumerate().skip(1) {
            let m = norm_sq(k) as usize;
            let v = u.coefficient(idx);
            weights[m] += v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr();
        }
        let vol = grid.volume();
        weights.iter_mut().for_each(|w| *w *= vol);
        Self { grid, weights }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Occupied shells as `(|k|^2, weight)`.
    pub fn shells(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(m, w)| *m > 0 && **w > 0.0)
            .map(|(m, &w)| (m, w))
    }

    /// Eigenvalue of `-Laplacian` on shell `m = |k|^2`.
    #[inline]
    pub fn eigenvalue(&self, m: usize) -> f64 {
        let b = self.grid.base_frequency();
        b * b * m as f64
    }

    pub fn is_zero(&self) -> bool {
        self.shells().next().is_none()
    }

    /// `||u||^2_{H^alpha dot} = sum_m mu_m^alpha w_m`.
    pub fn hs_norm_sq(&self, alpha: f64) -> f64 {
        self.shells()
            .map(|(m, w)| self.eigenvalue(m).powf(alpha) * w)
            .sum()
    }

    /// `sum_m mu_m^order (mu_m - lambda)^2 w_m`, i.e.
    /// `||-Laplacian u - lambda u||^2_{H^order dot}` evaluated term by term,
    /// which stays accurate when `lambda` sits on an occupied eigenvalue.
    pub fn shifted_sq(&self, order: f64, lambda: f64) -> f64 {
        self.shells()
            .map(|(m, w)| {
                let mu = self.eigenvalue(m);
                let d = mu - lambda;
                mu.powf(order) * d * d * w
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gradient_field_is_annihilated() {
        let g = Grid::unit(8).unwrap();
        // Nyquist modes are their own negatives and cannot carry c(k) k.
        let u = SpectralVectorField::from_fn(g, |k| {
            if k.iter().any(|&kj| kj == -4) {
                return [c(0.0, 0.0); 3];
            }
            let s = c(0.2 * k[0] as f64 - 0.1, 0.05 * k[2] as f64);
            [s * k[0] as f64, s * k[1] as f64, s * k[2] as f64]
        })
        .unwrap();
        let p = leray_project(&u);
        assert!(p.max_mode_magnitude() <= 1e-14 * u.max_mode_magnitude());
    }

    #[test]
    fn zero_field_norms() {
        let g = Grid::unit(8).unwrap();
        let u = SpectralVectorField::zeros(g);
        for a in [0.0, 0.5, 1.0, 2.5] {
            assert_eq!(hs_norm(&u, a).unwrap(), 0.0);
        }
        assert_eq!(lq_norm(&u, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn hs_norm_rejects_bad_order() {
        let g = Grid::unit(8).unwrap();
        let u = SpectralVectorField::zeros(g);
        assert!(hs_norm(&u, f64::NAN).is_err());
        assert!(hs_norm(&u, -1.0).is_err());
    }

    #[test]
    fn shifted_laplacian_at_zero_is_neg_laplacian() {
        let g = Grid::unit(8).unwrap();
        let u = SpectralVectorField::from_fn(g, |k| {
            [c(k[1] as f64, 0.0), c(0.0, k[2] as f64), c(1.0, k[0] as f64)]
        })
        .unwrap();
        let a = shifted_laplacian(&u, 0.0);
        let l2 = hs_norm(&a, 0.0).unwrap();
        let h2 = hs_norm(&u, 2.0).unwrap();
        assert!((l2 - h2).abs() <= 1e-13 * h2);
    }
}
