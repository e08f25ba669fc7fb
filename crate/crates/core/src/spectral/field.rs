use num_complex::Complex64;

use super::fft::{analyze_pair, synthesize_pair};
use super::grid::{norm_sq, Grid};
use crate::error::{Error, Result};

pub type Triple = [Complex64; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Three-component Fourier coefficient array of a real, mean-free vector
/// field: `u(x) = sum_k u_k e^{2 pi i k.x / L}`.
///
/// Every constructor enforces Hermitian symmetry `u_{-k} = conj u_k` and a
/// zero mean mode. Fields are immutable values; operations return new fields.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVectorField {
    grid: Grid,
    coeffs: [Vec<Complex64>; 3],
}

impl SpectralVectorField {
    pub fn zeros(grid: Grid) -> Self {
        let z = vec![ZERO; grid.len()];
        Self {
            grid,
            coeffs: [z.clone(), z.clone(), z],
        }
    }

    /// Build a field from a coefficient map `k -> (u_0, u_1, u_2)`.
    ///
    /// The result is symmetrized by averaging `m(k)` with `conj m(-k)`, so a
    /// map that only sets `k0` yields half the amplitude on `k0` and the
    /// conjugate half on `-k0`. The zero mode is dropped.
    pub fn from_fn<F>(grid: Grid, mut map: F) -> Result<Self>
    where
        F: FnMut([i64; 3]) -> Triple,
    {
        let mut coeffs = [
            Vec::with_capacity(grid.len()),
            Vec::with_capacity(grid.len()),
            Vec::with_capacity(grid.len()),
        ];
        for k in grid.wavevectors() {
            let value = map(k);
            for (c, v) in coeffs.iter_mut().zip(value) {
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonFinite("coefficient map"));
                }
                c.push(v);
            }
        }
        Ok(Self::symmetrized(grid, coeffs))
    }

    /// Take ownership of raw coefficients, symmetrizing and zeroing the mean.
    pub fn from_coefficients(grid: Grid, coeffs: [Vec<Complex64>; 3]) -> Result<Self> {
        for c in &coeffs {
            if c.len() != grid.len() {
                return Err(Error::InvalidGrid(format!(
                    "expected {} coefficients per component, got {}",
                    grid.len(),
                    c.len()
                )));
            }
            if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::NonFinite("coefficients"));
            }
        }
        Ok(Self::symmetrized(grid, coeffs))
    }

    /// Wrap coefficients that already satisfy the invariants (checked by the
    /// caller). Used for bit-exact checkpoint reads.
    pub(crate) fn from_trusted(grid: Grid, coeffs: [Vec<Complex64>; 3]) -> Self {
        Self { grid, coeffs }
    }

    fn symmetrized(grid: Grid, mut coeffs: [Vec<Complex64>; 3]) -> Self {
        for c in coeffs.iter_mut() {
            for idx in 0..grid.len() {
                let neg = grid.negated_index(idx);
                if neg < idx {
                    continue;
                }
                let avg = (c[idx] + c[neg].conj()) * 0.5;
                c[idx] = avg;
                c[neg] = avg.conj();
            }
            c[0] = ZERO;
        }
        Self { grid, coeffs }
    }

    /// Analyze real physical samples (component-major, `n^3` each).
    pub fn from_physical(grid: Grid, samples: [&[f64]; 3]) -> Result<Self> {
        if samples.iter().any(|s| s.iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFinite("physical samples"));
        }
        let (c0, c1) = analyze_pair(&grid, samples[0], Some(samples[1]));
        let (c2, _) = analyze_pair(&grid, samples[2], None);
        Ok(Self::symmetrized(grid, [c0, c1.unwrap(), c2]))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, j: usize) -> &[Complex64] {
        &self.coeffs[j]
    }

    pub fn components(&self) -> &[Vec<Complex64>; 3] {
        &self.coeffs
    }

    #[inline]
    pub fn coefficient(&self, idx: usize) -> Triple {
        [self.coeffs[0][idx], self.coeffs[1][idx], self.coeffs[2][idx]]
    }

    /// Coefficient at wavevector `k`, zero if not representable.
    pub fn at(&self, k: [i64; 3]) -> Triple {
        self.grid
            .index_of(k)
            .map(|idx| self.coefficient(idx))
            .unwrap_or([ZERO; 3])
    }

    /// Apply a per-mode linear map. The map must commute with `k -> -k`
    /// conjugation for the result to stay real; callers in this crate only
    /// pass even real multipliers or odd imaginary ones.
    pub(crate) fn map_modes<F>(&self, mut f: F) -> Self
    where
        F: FnMut([i64; 3], Triple) -> Triple,
    {
        let mut out = Self::zeros(self.grid);
        for (idx, k) in self.grid.wavevectors().enumerate().skip(1) {
            let v = f(k, self.coefficient(idx));
            for j in 0..3 {
                out.coeffs[j][idx] = v[j];
            }
        }
        out
    }

    /// Scalar multiplier `m(k)` applied to every component.
    pub(crate) fn multiply<F>(&self, mut m: F) -> Self
    where
        F: FnMut([i64; 3]) -> f64,
    {
        self.map_modes(|k, v| {
            let s = m(k);
            [v[0] * s, v[1] * s, v[2] * s]
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            c.iter_mut().for_each(|v| *v *= s);
        }
        out
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let mut out = self.clone();
        for j in 0..3 {
            for (o, &b) in out.coeffs[j].iter_mut().zip(&other.coeffs[j]) {
                *o += b * s;
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    /// `L^2(box)` inner product, `L^3 sum_k Re(u_k . conj v_k)`.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let mut acc = 0.0;
        for j in 0..3 {
            for (a, b) in self.coeffs[j].iter().zip(&other.coeffs[j]) {
                acc += a.re * b.re + a.im * b.im;
            }
        }
        acc * self.grid.volume()
    }

    /// Largest coefficient magnitude `max_k |u_k|` (Euclidean over components).
    pub fn max_mode_magnitude(&self) -> f64 {
        (0..self.grid.len())
            .map(|idx| mode_magnitude(&self.coefficient(idx)))
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|v| *v == ZERO))
    }

    /// `max_k |u_{-k} - conj u_k| / max_k |u_k|` (0 for the zero field).
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_mode_magnitude();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for idx in 0..self.grid.len() {
            let neg = self.grid.negated_index(idx);
            for j in 0..3 {
                worst = worst.max((self.coeffs[j][neg] - self.coeffs[j][idx].conj()).norm());
            }
        }
        worst / scale
    }

    /// `max_k |k . u_k| / max_k |k| |u_k|` (0 for the zero field).
    pub fn divergence_defect(&self) -> f64 {
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for (idx, k) in self.grid.wavevectors().enumerate().skip(1) {
            let v = self.coefficient(idx);
            let div = v[0] * k[0] as f64 + v[1] * k[1] as f64 + v[2] * k[2] as f64;
            num = num.max(div.norm());
            den = den.max((norm_sq(k) as f64).sqrt() * mode_magnitude(&v));
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// Velocity samples on the collocation grid.
    pub fn to_physical(&self) -> PhysicalField {
        let (a, b) = synthesize_pair(&self.grid, &self.coeffs[0], Some(&self.coeffs[1]));
        let (c, _) = synthesize_pair(&self.grid, &self.coeffs[2], None);
        PhysicalField {
            grid: self.grid,
            comps: vec![a, b.unwrap(), c],
        }
    }

    /// Spectral derivative `d/dx_axis` of component `comp`; the Nyquist
    /// wavenumber carries no derivative.
    pub(crate) fn derivative_coefficients(&self, comp: usize, axis: usize) -> Vec<Complex64> {
        let n = self.grid.n();
        let base = self.grid.base_frequency();
        let factor: Vec<f64> = (0..n)
            .map(|i| {
                let k = self.grid.axis_wavenumber(i);
                if k == -(n as i64) / 2 {
                    0.0
                } else {
                    base * k as f64
                }
            })
            .collect();
        // Row-major layout: the axis index is constant over runs of `stride`.
        let stride = n.pow(2 - axis as u32);
        let mut out = Vec::with_capacity(self.grid.len());
        for block in self.coeffs[comp].chunks_exact(n * stride) {
            for (&f, run) in factor.iter().zip(block.chunks_exact(stride)) {
                out.extend(run.iter().map(|v| Complex64::new(-v.im * f, v.re * f)));
            }
        }
        out
    }

    /// Velocity gradient samples; component `3 * i + j` holds `d u_i / d x_j`.
    pub fn gradient_physical(&self) -> PhysicalField {
        let mut comps = Vec::with_capacity(9);
        let spectra: Vec<Vec<Complex64>> = (0..9)
            .map(|c| self.derivative_coefficients(c / 3, c % 3))
            .collect();
        for pair in spectra.chunks(2) {
            let (a, b) = synthesize_pair(&self.grid, &pair[0], pair.get(1).map(|v| v.as_slice()));
            comps.push(a);
            if let Some(b) = b {
                comps.push(b);
            }
        }
        PhysicalField {
            grid: self.grid,
            comps,
        }
    }

    /// Largest occupied `|k|` in lattice units (0 for the zero field).
    pub fn support_radius(&self) -> f64 {
        self.grid
            .wavevectors()
            .enumerate()
            .skip(1)
            .filter(|&(idx, _)| mode_magnitude(&self.coefficient(idx)) > 0.0)
            .map(|(_, k)| (norm_sq(k) as f64).sqrt())
            .fold(0.0, f64::max)
    }
}

#[inline]
pub(crate) fn mode_magnitude(v: &Triple) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

/// Real samples of a multi-component field on the collocation grid,
/// component-major.
#[derive(Clone, Debug)]
pub struct PhysicalField {
    grid: Grid,
    comps: Vec<Vec<f64>>,
}

impl PhysicalField {
    pub fn new(grid: Grid, comps: Vec<Vec<f64>>) -> Result<Self> {
        if comps.is_empty() || comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::InvalidGrid("component length mismatch".into()));
        }
        Ok(Self { grid, comps })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.comps
    }

    /// Euclidean magnitude at each collocation point.
    pub fn magnitudes(&self) -> Vec<f64> {
        (0..self.grid.len())
            .map(|i| self.comps.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
            .collect()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.magnitudes().into_iter().fold(0.0, f64::max)
    }

    /// Equal-weight quadrature of `|u|^q`, then the `q`-th root.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        lq_norm_of_magnitudes(&self.grid, &self.magnitudes(), q)
    }
}

/// `(h^3 sum_x m(x)^q)^{1/q}`, evaluated relative to `max m` so large
/// exponents cannot overflow.
/// `s -> s^{q/2}` for `s >= 0`, exact-power fast paths for integer `q`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct HalfPower {
    q: f64,
    /// `(floor(q/2), q odd)` when `q` is a small integer.
    integer: Option<(i32, bool)>,
}

impl HalfPower {
    pub fn new(q: f64) -> Self {
        let integer = (q.fract() == 0.0 && q > 0.0 && q <= 64.0).then(|| {
            let qi = q as i32;
            (qi / 2, qi % 2 == 1)
        });
        Self { q, integer }
    }

    #[inline]
    pub fn of(&self, s: f64) -> f64 {
        match self.integer {
            Some((whole, odd)) => {
                let p = s.powi(whole);
                if odd {
                    p * s.sqrt()
                } else {
                    p
                }
            }
            None => s.powf(0.5 * self.q),
        }
    }
}

pub(crate) fn lq_norm_of_magnitudes(grid: &Grid, mags: &[f64], q: f64) -> Result<f64> {
    if !q.is_finite() || q <= 1.0 {
        return Err(Error::OutOfRange {
            name: "q",
            value: q,
            constraint: "1 < q < inf",
        });
    }
    let peak = mags.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    if !peak.is_finite() {
        return Err(Error::NonFinite("field samples"));
    }
    let pow = HalfPower::new(q);
    let inv = 1.0 / peak;
    let sum: f64 = mags
        .iter()
        .map(|&m| {
            let r = m * inv;
            pow.of(r * r)
        })
        .sum();
    let h3 = grid.spacing().powi(3);
    Ok(peak * (sum * h3).powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_power_matches_powf() {
        for q in [1.5, 2.0, 3.0, 6.0, 9.0, 18.0 / 7.0] {
            let hp = HalfPower::new(q);
            for s in [0.0, 1e-3, 0.37, 1.0, 2.5] {
                let want = f64::powf(s, 0.5 * q);
                assert!((hp.of(s) - want).abs() <= 1e-15 * want.max(1e-300), "{q} {s}");
            }
        }
    }

    #[test]
    fn zero_map_gives_zero_field() {
        let g = Grid::unit(8).unwrap();
        let u = SpectralVectorField::from_fn(g, |_| [ZERO; 3]).unwrap();
        assert!(u.is_zero());
        assert_eq!(u.hermitian_defect(), 0.0);
        assert_eq!(u.divergence_defect(), 0.0);
    }

    #[test]
    fn single_mode_is_symmetrized() {
        let g = Grid::unit(8).unwrap();
        let v = Complex64::new(0.3, -1.2);
        let u = SpectralVectorField::from_fn(g, |k| {
            if k == [1, 2, 0] {
                [ZERO, v, ZERO]
            } else {
                [ZERO; 3]
            }
        })
        .unwrap();
        assert_eq!(u.at([1, 2, 0])[1], v * 0.5);
        assert_eq!(u.at([-1, -2, 0])[1], v.conj() * 0.5);
        assert_eq!(u.hermitian_defect(), 0.0);
        let phys = u.to_physical();
        assert!(phys.max_magnitude() > 0.0);
    }

    #[test]
    fn rejects_non_finite() {
        let g = Grid::unit(8).unwrap();
        let r = SpectralVectorField::from_fn(g, |_| [Complex64::new(f64::NAN, 0.0), ZERO, ZERO]);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn mean_mode_is_dropped() {
        let g = Grid::unit(8).unwrap();
        let u = SpectralVectorField::from_fn(g, |_| [Complex64::new(1.0, 0.0); 3]).unwrap();
        assert_eq!(u.coefficient(0), [ZERO; 3]);
    }

    #[test]
    fn lq_rejects_small_q() {
        let g = Grid::unit(8).unwrap();
        assert!(lq_norm_of_magnitudes(&g, &vec![1.0; g.len()], 1.0).is_err());
        assert!(lq_norm_of_magnitudes(&g, &vec![1.0; g.len()], f64::INFINITY).is_err());
    }
}
