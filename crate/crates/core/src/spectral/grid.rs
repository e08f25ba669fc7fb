use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic lattice on `[0, L)^3` with `n` collocation points per
/// axis. Spectral arrays are stored row-major (`i0` slowest) in standard FFT
/// order, so axis index `i` carries wavenumber `i` for `i < n/2` and `i - n`
/// otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    box_length: f64,
}

impl Grid {
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "n must be even and at least 8, got {n}"
            )));
        }
        if !box_length.is_finite() || box_length <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "box length must be positive and finite, got {box_length}"
            )));
        }
        Ok(Self { n, box_length })
    }

    /// Unit box.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(n, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Number of lattice points, `n^3`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Collocation spacing `h = L / n`.
    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Box volume `L^3`.
    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    /// Wavenumber carried by axis index `i`.
    #[inline]
    pub fn axis_wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Integer wavevector at flat index `idx`.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let n = self.n;
        [
            self.axis_wavenumber(idx / (n * n)),
            self.axis_wavenumber((idx / n) % n),
            self.axis_wavenumber(idx % n),
        ]
    }

    /// Every wavevector in flat-index order, without per-index division.
    pub fn wavevectors(&self) -> Wavevectors {
        Wavevectors {
            n: self.n,
            axis: [0; 3],
            done: false,
        }
    }

    /// Flat index of wavevector `k`, or `None` if `k` is not representable
    /// (components must lie in `[-n/2, n/2 - 1]`).
    pub fn index_of(&self, k: [i64; 3]) -> Option<usize> {
        let n = self.n as i64;
        let mut idx = 0usize;
        for kj in k {
            if kj < -n / 2 || kj >= n / 2 {
                return None;
            }
            idx = idx * self.n + kj.rem_euclid(n) as usize;
        }
        Some(idx)
    }

    /// Flat index of `-k` modulo the lattice.
    #[inline]
    pub fn negated_index(&self, idx: usize) -> usize {
        let n = self.n;
        let neg = |i: usize| (n - i) % n;
        let (i0, i1, i2) = (idx / (n * n), (idx / n) % n, idx % n);
        (neg(i0) * n + neg(i1)) * n + neg(i2)
    }

    /// `2 pi / L`, the physical frequency of the unit wavenumber.
    #[inline]
    pub fn base_frequency(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Eigenvalue of `-Laplacian` on the mode `k`: `(2 pi |k| / L)^2`.
    #[inline]
    pub fn laplacian_eigenvalue(&self, k: [i64; 3]) -> f64 {
        let base = self.base_frequency();
        base * base * norm_sq(k) as f64
    }

    /// True when `k` survives the 2/3-rule mask (every `|k_j| <= n/3`).
    #[inline]
    pub fn in_dealiased_band(&self, k: [i64; 3]) -> bool {
        let n = self.n as i64;
        k.iter().all(|kj| 3 * kj.abs() <= n)
    }

    /// Largest `|k|` (lattice units) inside the dealiased cube's inscribed
    /// sphere, `n / 3`.
    pub fn dealiased_radius(&self) -> f64 {
        self.n as f64 / 3.0
    }
}

/// Iterator over lattice wavevectors in row-major FFT order.
#[derive(Clone, Debug)]
pub struct Wavevectors {
    n: usize,
    axis: [usize; 3],
    done: bool,
}

impl Iterator for Wavevectors {
    type Item = [i64; 3];

    #[inline]
    fn next(&mut self) -> Option<[i64; 3]> {
        if self.done {
            return None;
        }
        let n = self.n;
        let half = n / 2;
        let wave = |i: usize| if i < half { i as i64 } else { i as i64 - n as i64 };
        let k = self.axis.map(wave);
        // increment the fastest axis with carries
        let mut j = 2;
        loop {
            self.axis[j] += 1;
            if self.axis[j] < n {
                break;
            }
            self.axis[j] = 0;
            if j == 0 {
                self.done = true;
                break;
            }
            j -= 1;
        }
        Some(k)
    }
}

#[inline]
pub fn norm_sq(k: [i64; 3]) -> i64 {
    k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterator_matches_indexing() {
        let g = Grid::unit(10).unwrap();
        let all: Vec<[i64; 3]> = g.wavevectors().collect();
        assert_eq!(all.len(), g.len());
        for (idx, k) in all.into_iter().enumerate() {
            assert_eq!(k, g.wavevector(idx));
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(6, 1.0).is_err());
        assert!(Grid::new(9, 1.0).is_err());
        assert!(Grid::new(8, 0.0).is_err());
        assert!(Grid::new(8, f64::NAN).is_err());
        assert!(Grid::new(8, 1.0).is_ok());
    }

    #[test]
    fn fft_ordering_roundtrips() {
        let g = Grid::unit(8).unwrap();
        let axis: Vec<i64> = (0..8).map(|i| g.axis_wavenumber(i)).collect();
        assert_eq!(axis, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for idx in 0..g.len() {
            let k = g.wavevector(idx);
            assert_eq!(g.index_of(k), Some(idx));
            let neg = g.negated_index(idx);
            let kn = g.wavevector(neg);
            for j in 0..3 {
                assert_eq!((k[j] + kn[j]).rem_euclid(8), 0);
            }
        }
        assert_eq!(g.index_of([4, 0, 0]), None);
    }

    #[test]
    fn dealias_mask_for_32() {
        let g = Grid::unit(32).unwrap();
        assert!(g.in_dealiased_band([10, -10, 0]));
        assert!(!g.in_dealiased_band([11, 0, 0]));
        assert!(!g.in_dealiased_band([0, -11, 0]));
    }
}
