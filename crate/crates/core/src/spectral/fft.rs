//! Cubic 3-D complex FFTs built from `rustfft` line transforms.
//!
//! Physical samples relate to coefficients by `u(x_j) = sum_k c_k e^{2 pi i k.j / n}`,
//! so the synthesis direction is the unnormalized inverse transform and the
//! analysis direction is the forward transform scaled by `1/n^3`.
//!
//! Real fields are moved in pairs: two Hermitian spectra `a`, `b` are packed
//! as `a + i b`, one inverse transform yields both real signals in the real
//! and imaginary parts. The forward direction unpacks with
//! `A(k) = (Z(k) + conj Z(-k)) / 2`, `B(k) = (Z(k) - conj Z(-k)) / 2i`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::Grid;

pub(crate) struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

thread_local! {
    static PLANS: RefCell<HashMap<usize, Rc<Fft3>>> = RefCell::new(HashMap::new());
}

/// Per-thread plan cache.
pub(crate) fn plan(n: usize) -> Rc<Fft3> {
    PLANS.with(|plans| {
        plans
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                Rc::new(Fft3 {
                    n,
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    })
}

impl Fft3 {
    /// Unnormalized forward transform in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, self.forward.as_ref());
    }

    /// Unnormalized inverse transform in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, self.inverse.as_ref());
    }

    fn transform(&self, data: &mut [Complex64], fft: &dyn Fft<f64>) {
        let n = self.n;
        let n2 = n * n;
        assert_eq!(data.len(), n2 * n);
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        // n lines of length n; small enough to stay in cache
        let mut block = vec![Complex64::default(); n2];

        // axis 2: contiguous lines
        fft.process_with_scratch(data, &mut scratch);

        // axis 1: transpose each (i1, i2) slab
        for slab in data.chunks_exact_mut(n2) {
            for (i1, row) in slab.chunks_exact(n).enumerate() {
                for (i2, &v) in row.iter().enumerate() {
                    block[i2 * n + i1] = v;
                }
            }
            fft.process_with_scratch(&mut block, &mut scratch);
            for (i1, row) in slab.chunks_exact_mut(n).enumerate() {
                for (i2, v) in row.iter_mut().enumerate() {
                    *v = block[i2 * n + i1];
                }
            }
        }

        // axis 0: gather n lines at a time from a run of n contiguous columns
        for r0 in (0..n2).step_by(n) {
            for i0 in 0..n {
                let row = &data[i0 * n2 + r0..i0 * n2 + r0 + n];
                for (b, &v) in row.iter().enumerate() {
                    block[b * n + i0] = v;
                }
            }
            fft.process_with_scratch(&mut block, &mut scratch);
            for i0 in 0..n {
                let row = &mut data[i0 * n2 + r0..i0 * n2 + r0 + n];
                for (b, v) in row.iter_mut().enumerate() {
                    *v = block[b * n + i0];
                }
            }
        }
    }
}

/// Physical samples of a single complex spectrum (no real-part projection).
pub fn synthesize_complex(grid: &Grid, coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut z = coeffs.to_vec();
    plan(grid.n()).inverse(&mut z);
    z
}

/// Normalized spectrum of complex samples.
pub fn analyze_complex(grid: &Grid, samples: &[Complex64]) -> Vec<Complex64> {
    let mut z = samples.to_vec();
    plan(grid.n()).forward(&mut z);
    let scale = 1.0 / grid.len() as f64;
    z.iter_mut().for_each(|c| *c *= scale);
    z
}

/// Synthesize one or two real signals from Hermitian spectra.
pub(crate) fn synthesize_pair(
    grid: &Grid,
    a: &[Complex64],
    b: Option<&[Complex64]>,
) -> (Vec<f64>, Option<Vec<f64>>) {
    let mut z: Vec<Complex64> = match b {
        Some(b) => a
            .iter()
            .zip(b)
            .map(|(&x, &y)| x + Complex64::i() * y)
            .collect(),
        None => a.to_vec(),
    };
    plan(grid.n()).inverse(&mut z);
    let re = z.iter().map(|c| c.re).collect();
    let im = b.map(|_| z.iter().map(|c| c.im).collect());
    (re, im)
}

/// Analyze one or two real signals into normalized spectra.
pub(crate) fn analyze_pair(
    grid: &Grid,
    a: &[f64],
    b: Option<&[f64]>,
) -> (Vec<Complex64>, Option<Vec<Complex64>>) {
    let mut z: Vec<Complex64> = match b {
        Some(b) => a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect(),
        None => a.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    };
    plan(grid.n()).forward(&mut z);
    let scale = 1.0 / grid.len() as f64;
    match b {
        None => (z.into_iter().map(|c| c * scale).collect(), None),
        Some(_) => {
            let mut sa = Vec::with_capacity(z.len());
            let mut sb = Vec::with_capacity(z.len());
            for idx in 0..z.len() {
                let zk = z[idx];
                let zm = z[grid.negated_index(idx)].conj();
                sa.push((zk + zm) * (0.5 * scale));
                sb.push((zk - zm) * Complex64::new(0.0, -0.5 * scale));
            }
            (sa, Some(sb))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matches_direct_dft() {
        let grid = Grid::unit(8).unwrap();
        let n = grid.n();
        let data: Vec<Complex64> = (0..grid.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut fast = data.clone();
        plan(n).forward(&mut fast);
        for out in [0usize, 1, 77, 300, 511] {
            let k = [out / 64, (out / 8) % 8, out % 8];
            let mut acc = Complex64::default();
            for (j, &v) in data.iter().enumerate() {
                let x = [j / 64, (j / 8) % 8, j % 8];
                let phase: usize = (0..3).map(|d| k[d] * x[d]).sum();
                acc += v * Complex64::from_polar(1.0, -2.0 * PI * phase as f64 / n as f64);
            }
            assert!((acc - fast[out]).norm() < 1e-11, "{out}");
        }
    }

    #[test]
    fn pair_roundtrip() {
        let grid = Grid::unit(8).unwrap();
        let a: Vec<f64> = (0..grid.len()).map(|i| (i as f64 * 0.3).sin()).collect();
        let b: Vec<f64> = (0..grid.len()).map(|i| (i as f64 * 0.7).cos()).collect();
        let (sa, sb) = analyze_pair(&grid, &a, Some(&b));
        let (ra, rb) = synthesize_pair(&grid, &sa, sb.as_deref());
        let rb = rb.unwrap();
        for i in 0..grid.len() {
            assert!((ra[i] - a[i]).abs() < 1e-13);
            assert!((rb[i] - b[i]).abs() < 1e-13);
        }
    }
}
