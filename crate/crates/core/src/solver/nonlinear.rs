use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::fft::plan;
use crate::spectral::{norm_sq, Grid, SpectralVectorField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dealiased advection `D[(u . grad) u]` before projection, with the peak
/// velocity magnitude seen on the grid.
#[derive(Clone, Debug)]
pub struct Advection {
    pub term: SpectralVectorField,
    pub max_speed: f64,
}

/// 2/3-rule mask: 1 where every `3 |k_j| <= n`, else 0.
pub fn dealias_mask(grid: &Grid) -> Vec<f64> {
    grid.wavevectors()
        .map(|k| {
            if grid.in_dealiased_band(k) {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

/// Per-mode tables for the pseudo-spectral product.
#[derive(Clone, Debug)]
pub(crate) struct Kernel {
    grid: Grid,
    /// `2 pi k_j / L` per axis, zero on the Nyquist wavenumber.
    deriv: [Vec<f64>; 3],
    /// `k / |k|` (zero at `k = 0`).
    unit: Vec<[f64; 3]>,
    mask: Vec<f64>,
    negated: Vec<usize>,
}

impl Kernel {
    pub fn new(grid: Grid) -> Self {
        let n = grid.n() as i64;
        let base = grid.base_frequency();
        let mut deriv = [
            Vec::with_capacity(grid.len()),
            Vec::with_capacity(grid.len()),
            Vec::with_capacity(grid.len()),
        ];
        let mut unit = Vec::with_capacity(grid.len());
        let mut negated = Vec::with_capacity(grid.len());
        for (idx, k) in grid.wavevectors().enumerate() {
            for (d, kj) in deriv.iter_mut().zip(k) {
                d.push(if kj == -n / 2 { 0.0 } else { base * kj as f64 });
            }
            let norm = (norm_sq(k) as f64).sqrt();
            unit.push(if norm == 0.0 {
                [0.0; 3]
            } else {
                k.map(|kj| kj as f64 / norm)
            });
            negated.push(grid.negated_index(idx));
        }
        Self {
            grid,
            deriv,
            unit,
            mask: dealias_mask(&grid),
            negated,
        }
    }

    /// Spectrum of velocity component `i` (`axis = None`) or of
    /// `d u_i / d x_axis`, the latter written into `buf`.
    fn signal<'a>(
        &self,
        u: &'a [Vec<Complex64>; 3],
        (i, axis): (usize, Option<usize>),
        buf: &'a mut [Complex64],
    ) -> &'a [Complex64] {
        match axis {
            None => &u[i],
            Some(j) => {
                for ((o, v), &d) in buf.iter_mut().zip(&u[i]).zip(&self.deriv[j]) {
                    *o = Complex64::new(-v.im * d, v.re * d);
                }
                buf
            }
        }
    }

    /// `D[(u . grad) u]` and `max |u|`.
    pub fn advection(&self, u: &SpectralVectorField) -> Result<Advection> {
        assert_eq!(*u.grid(), self.grid, "grid mismatch");
        let len = self.grid.len();
        let fft = plan(self.grid.n());
        let c = u.components();

        // Twelve real signals (u_i, d_j u_i) in six packed transforms.
        let signals: [(usize, Option<usize>); 12] = [
            (0, None),
            (1, None),
            (2, None),
            (0, Some(0)),
            (0, Some(1)),
            (0, Some(2)),
            (1, Some(0)),
            (1, Some(1)),
            (1, Some(2)),
            (2, Some(0)),
            (2, Some(1)),
            (2, Some(2)),
        ];
        let mut phys: Vec<Vec<f64>> = Vec::with_capacity(12);
        let mut z = vec![ZERO; len];
        let mut buf_a = vec![ZERO; len];
        let mut buf_b = vec![ZERO; len];
        for pair in signals.chunks(2) {
            let a = self.signal(c, pair[0], &mut buf_a);
            let b = self.signal(c, pair[1], &mut buf_b);
            for ((zi, a), b) in z.iter_mut().zip(a).zip(b) {
                *zi = Complex64::new(a.re - b.im, a.im + b.re);
            }
            fft.inverse(&mut z);
            phys.push(z.iter().map(|v| v.re).collect());
            phys.push(z.iter().map(|v| v.im).collect());
        }

        let mut max_sq: f64 = 0.0;
        let p: Vec<&[f64]> = phys.iter().map(|v| &v[..len]).collect();
        let mut prod = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
        for x in 0..len {
            let (u0, u1, u2) = (p[0][x], p[1][x], p[2][x]);
            max_sq = max_sq.max(u0 * u0 + u1 * u1 + u2 * u2);
            prod[0][x] = u0 * p[3][x] + u1 * p[4][x] + u2 * p[5][x];
            prod[1][x] = u0 * p[6][x] + u1 * p[7][x] + u2 * p[8][x];
            prod[2][x] = u0 * p[9][x] + u1 * p[10][x] + u2 * p[11][x];
        }
        if !max_sq.is_finite() {
            return Err(Error::IntegrationBlowup { t: f64::NAN });
        }

        let scale = 1.0 / len as f64;
        let mut out = [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]];
        // products 0 and 1 packed, product 2 alone
        for (x, zi) in z.iter_mut().enumerate() {
            *zi = Complex64::new(prod[0][x], prod[1][x]);
        }
        fft.forward(&mut z);
        for idx in 1..len {
            if self.mask[idx] == 0.0 {
                continue;
            }
            let zk = z[idx];
            let zm = z[self.negated[idx]].conj();
            out[0][idx] = (zk + zm) * (0.5 * scale);
            out[1][idx] = (zk - zm) * Complex64::new(0.0, -0.5 * scale);
        }
        for (x, zi) in z.iter_mut().enumerate() {
            *zi = Complex64::new(prod[2][x], 0.0);
        }
        fft.forward(&mut z);
        for idx in 1..len {
            if self.mask[idx] != 0.0 {
                let zk = z[idx];
                let zm = z[self.negated[idx]].conj();
                out[2][idx] = (zk + zm) * (0.5 * scale);
            }
        }
        Ok(Advection {
            term: SpectralVectorField::from_trusted(self.grid, out),
            max_speed: max_sq.sqrt(),
        })
    }

    /// Leray projection using the tabulated unit wavevectors.
    pub fn project(&self, v: &SpectralVectorField) -> SpectralVectorField {
        let c = v.components();
        let len = self.grid.len();
        let mut out = [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]];
        for idx in 1..len {
            let e = self.unit[idx];
            let dot = c[0][idx] * e[0] + c[1][idx] * e[1] + c[2][idx] * e[2];
            for j in 0..3 {
                out[j][idx] = c[j][idx] - dot * e[j];
            }
        }
        SpectralVectorField::from_trusted(self.grid, out)
    }
}

/// `(u . grad) u` evaluated pseudo-spectrally and truncated by the 2/3 rule.
pub fn advection(u: &SpectralVectorField) -> Result<Advection> {
    Kernel::new(*u.grid()).advection(u)
}

/// Projected nonlinearity `P D[(u . grad) u]`; divergence-free.
pub fn nonlinear_term(u: &SpectralVectorField) -> Result<SpectralVectorField> {
    let kernel = Kernel::new(*u.grid());
    Ok(kernel.project(&kernel.advection(u)?.term))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::{random_band, taylor_green};
    use crate::spectral::leray_project;

    #[test]
    fn zero_field_gives_zero() {
        let u = SpectralVectorField::zeros(Grid::unit(8).unwrap());
        assert!(nonlinear_term(&u).unwrap().is_zero());
    }

    #[test]
    fn skew_symmetry_before_projection() {
        let grid = Grid::unit(16).unwrap();
        for seed in 0..5 {
            let u = random_band(grid, 1.0, 5.0, -5.0 / 3.0, 3.0, seed).unwrap();
            let adv = advection(&u).unwrap().term;
            let pairing = adv.inner(&u);
            let scale = adv.inner(&adv).sqrt() * u.inner(&u).sqrt();
            assert!(pairing.abs() <= 1e-12 * scale, "{pairing} vs {scale}");
        }
    }

    #[test]
    fn projected_term_is_divergence_free_and_real() {
        let grid = Grid::new(16, 2.0).unwrap();
        let u = taylor_green(grid, 2.0).unwrap();
        let n = nonlinear_term(&u).unwrap();
        assert!(n.divergence_defect() <= 1e-12);
        assert!(n.hermitian_defect() <= 1e-12);
    }

    #[test]
    fn tabulated_projection_matches_generic() {
        let grid = Grid::unit(8).unwrap();
        let u = random_band(grid, 1.0, 2.5, 0.0, 1.0, 4).unwrap();
        let v = advection(&u).unwrap().term;
        let a = Kernel::new(grid).project(&v);
        let b = leray_project(&v);
        assert!(a.sub(&b).max_mode_magnitude() <= 1e-14 * b.max_mode_magnitude());
    }
}
