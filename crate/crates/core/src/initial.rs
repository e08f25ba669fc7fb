//! Initial-data generators: exact Laplacian eigenfunctions, classical
//! benchmarks, and seeded random divergence-free fields on a Fourier annulus.

use std::path::PathBuf;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{checkpoint, hs_norm, leray_project, norm_sq, Grid, SpectralVectorField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialDataKind {
    TaylorGreen,
    Abc,
    RandomBand,
    SingleMode,
    FromFile,
}

impl std::str::FromStr for InitialDataKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "taylor_green" => Self::TaylorGreen,
            "abc" => Self::Abc,
            "random_band" => Self::RandomBand,
            "single_mode" => Self::SingleMode,
            "from_file" => Self::FromFile,
            other => return Err(format!("unknown initial data kind {other:?}")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialDataSpec {
    pub kind: InitialDataKind,
    pub amplitude: f64,
    /// `[r1, r2]` in frequency units `|k| / L` (random_band).
    pub band: [f64; 2],
    /// Shell-energy exponent (random_band).
    pub spectral_slope: f64,
    pub seed: u64,
    pub file: Option<PathBuf>,
    /// ABC coefficients `(A, B, C)`.
    pub abc: [f64; 3],
    pub k0: [i64; 3],
    pub polarization: [f64; 3],
}

impl Default for InitialDataSpec {
    fn default() -> Self {
        Self {
            kind: InitialDataKind::TaylorGreen,
            amplitude: 1.0,
            band: [1.0, 2.0],
            spectral_slope: -5.0 / 3.0,
            seed: 0,
            file: None,
            abc: [1.0, 1.0, 1.0],
            k0: [1, 0, 0],
            polarization: [0.0, 1.0, 0.0],
        }
    }
}

/// Build the field described by `spec` on `grid`.
pub fn generate(grid: Grid, spec: &InitialDataSpec) -> Result<SpectralVectorField> {
    match spec.kind {
        InitialDataKind::TaylorGreen => taylor_green(grid, spec.amplitude),
        InitialDataKind::Abc => {
            let [a, b, c] = spec.abc;
            abc_flow(grid, a, b, c)
        }
        InitialDataKind::SingleMode => single_mode(grid, spec.k0, spec.polarization),
        InitialDataKind::RandomBand => random_band(
            grid,
            spec.band[0],
            spec.band[1],
            spec.spectral_slope,
            spec.amplitude,
            spec.seed,
        ),
        InitialDataKind::FromFile => {
            let path = spec
                .file
                .as_ref()
                .ok_or_else(|| Error::Format("from_file requires a file path".into()))?;
            let u = checkpoint::load(path)?;
            if *u.grid() != grid {
                return Err(Error::Format(format!(
                    "checkpoint grid (n={}, L={}) does not match the configured grid (n={}, L={})",
                    u.grid().n(),
                    u.grid().box_length(),
                    grid.n(),
                    grid.box_length()
                )));
            }
            Ok(u)
        }
    }
}

fn check_amplitude(amplitude: f64) -> Result<()> {
    if amplitude.is_finite() && amplitude > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "amplitude",
            value: amplitude,
            constraint: "amplitude > 0",
        })
    }
}

/// `A (sin x cos y cos z, -cos x sin y cos z, 0)` in `x = 2 pi x / L`
/// coordinates; an eigenfunction of `-Laplacian` with eigenvalue `12 pi^2 / L^2`.
pub fn taylor_green(grid: Grid, amplitude: f64) -> Result<SpectralVectorField> {
    check_amplitude(amplitude)?;
    let c = amplitude / 8.0;
    SpectralVectorField::from_fn(grid, |k| {
        if k.iter().all(|kj| kj.abs() == 1) {
            [
                Complex64::new(0.0, -c * k[0] as f64),
                Complex64::new(0.0, c * k[1] as f64),
                ZERO,
            ]
        } else {
            [ZERO; 3]
        }
    })
}

/// Arnold-Beltrami-Childress flow
/// `(A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)`.
pub fn abc_flow(grid: Grid, a: f64, b: f64, c: f64) -> Result<SpectralVectorField> {
    if ![a, b, c].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("ABC coefficients"));
    }
    // sin t <-> (-i/2, +i/2) on (+k, -k); cos t <-> (1/2, 1/2)
    let sin = |s: i64, amp: f64| Complex64::new(0.0, -0.5 * amp * s as f64);
    let cos = |amp: f64| Complex64::new(0.5 * amp, 0.0);
    SpectralVectorField::from_fn(grid, |k| match k {
        [s, 0, 0] if s.abs() == 1 => [ZERO, sin(s, b), cos(b)],
        [0, s, 0] if s.abs() == 1 => [cos(c), ZERO, sin(s, c)],
        [0, 0, s] if s.abs() == 1 => [sin(s, a), cos(a), ZERO],
        _ => [ZERO; 3],
    })
}

/// `polarization * sin(2 pi k0 . x / L)`; requires `k0 . polarization = 0`.
pub fn single_mode(grid: Grid, k0: [i64; 3], polarization: [f64; 3]) -> Result<SpectralVectorField> {
    if k0 == [0, 0, 0] {
        return Err(Error::OutOfRange {
            name: "|k0|",
            value: 0.0,
            constraint: "k0 != 0",
        });
    }
    let half = grid.n() as i64 / 2;
    if k0.iter().any(|kj| kj.abs() >= half) {
        return Err(Error::OutOfRange {
            name: "max |k0_j|",
            value: k0.iter().map(|kj| kj.abs()).max().unwrap() as f64,
            constraint: "|k0_j| < n/2",
        });
    }
    if !polarization.iter().all(|p| p.is_finite()) {
        return Err(Error::NonFinite("polarization"));
    }
    let pnorm = polarization.iter().map(|p| p * p).sum::<f64>().sqrt();
    if pnorm == 0.0 {
        return Err(Error::OutOfRange {
            name: "|polarization|",
            value: 0.0,
            constraint: "polarization != 0",
        });
    }
    let dot: f64 = (0..3).map(|j| k0[j] as f64 * polarization[j]).sum();
    let knorm = (norm_sq(k0) as f64).sqrt();
    if dot.abs() > 1e-12 * knorm * pnorm {
        return Err(Error::NotTransverse { dot });
    }
    let neg = [-k0[0], -k0[1], -k0[2]];
    SpectralVectorField::from_fn(grid, |k| {
        let s = if k == k0 {
            -0.5
        } else if k == neg {
            0.5
        } else {
            return [ZERO; 3];
        };
        polarization.map(|p| Complex64::new(0.0, s * p))
    })
}

/// Seeded random divergence-free field supported on
/// `r1 <= |k| / L <= r2`, with shell energy proportional to `|k|^slope`
/// (integer shells `round(|k|)`), rescaled to `||u||_{L^2} = amplitude`.
pub fn random_band(
    grid: Grid,
    r1: f64,
    r2: f64,
    slope: f64,
    amplitude: f64,
    seed: u64,
) -> Result<SpectralVectorField> {
    check_amplitude(amplitude)?;
    let l = grid.box_length();
    let r_max = grid.n() as f64 / (3.0 * l);
    if !(r1 > 0.0 && r1 <= r2) {
        return Err(Error::OutOfRange {
            name: "r1",
            value: r1,
            constraint: "0 < r1 <= r2",
        });
    }
    if r2 > r_max * (1.0 + 1e-12) {
        return Err(Error::OutOfRange {
            name: "r2",
            value: r2,
            constraint: "r2 <= n / (3L)",
        });
    }
    if !slope.is_finite() {
        return Err(Error::NonFinite("spectral slope"));
    }

    // Lattice radii with a little slack so exact shells survive rounding.
    let lo = r1 * l * (1.0 - 1e-12);
    let hi = r2 * l * (1.0 + 1e-12);
    let in_band = |k: [i64; 3]| {
        let r = (norm_sq(k) as f64).sqrt();
        r >= lo && r <= hi
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut any = false;
    let raw = SpectralVectorField::from_fn(grid, |k| {
        if k == [0, 0, 0] || !in_band(k) {
            return [ZERO; 3];
        }
        any = true;
        [
            Complex64::new(draw(), draw()),
            Complex64::new(draw(), draw()),
            Complex64::new(draw(), draw()),
        ]
    })?;
    if !any {
        return Err(Error::EmptyBand { r1, r2 });
    }
    let projected = leray_project(&raw);

    // Shell normalization to the requested power law.
    let n = grid.n() as i64;
    let max_shell = ((3 * (n / 2) * (n / 2)) as f64).sqrt().round() as usize + 1;
    let mut shell_energy = vec![0.0; max_shell + 1];
    let shell_of = |k: [i64; 3]| (norm_sq(k) as f64).sqrt().round() as usize;
    for (idx, k) in grid.wavevectors().enumerate().skip(1) {
        let v = projected.coefficient(idx);
        shell_energy[shell_of(k)] +=
            v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr();
    }
    let shell_scale: Vec<f64> = shell_energy
        .iter()
        .enumerate()
        .map(|(s, &e)| {
            if e > 0.0 && s > 0 {
                ((s as f64).powf(slope) / e).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let shaped = projected.multiply(|k| shell_scale[shell_of(k)]);
    let norm = hs_norm(&shaped, 0.0)?;
    if norm == 0.0 {
        return Err(Error::EmptyBand { r1, r2 });
    }
    Ok(shaped.scaled(amplitude / norm))
}
