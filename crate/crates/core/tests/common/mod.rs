//! Brute-force reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nsprox::initial::random_band;
use nsprox::{Grid, SpectralVectorField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(mu_k, L^3 |u_k|^2)` for every lattice mode, by direct enumeration.
pub fn modes(u: &SpectralVectorField) -> Vec<([i64; 3], f64, f64)> {
    let grid = u.grid();
    let l = grid.box_length();
    (0..grid.len())
        .map(|idx| {
            let k = grid.wavevector(idx);
            let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
            let mu = 4.0 * PI * PI * k2 / (l * l);
            let w: f64 = u.coefficient(idx).iter().map(|z| z.norm_sqr()).sum::<f64>() * l.powi(3);
            (k, mu, w)
        })
        .collect()
}

pub fn hs_norm_direct(u: &SpectralVectorField, alpha: f64) -> f64 {
    modes(u)
        .into_iter()
        .filter(|&(_, mu, w)| mu > 0.0 && w > 0.0)
        .map(|(_, mu, w)| mu.powf(alpha) * w)
        .sum::<f64>()
        .sqrt()
}

/// Occupied shells `(mu, total weight)`, keyed exactly by `|k|^2`.
pub fn shells(u: &SpectralVectorField) -> Vec<(f64, f64)> {
    let mut map = BTreeMap::<u64, (f64, f64)>::new();
    for (k, mu, w) in modes(u) {
        if w > 0.0 && mu > 0.0 {
            let e = map.entry((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as u64).or_insert((mu, 0.0));
            e.1 += w;
        }
    }
    map.into_values().collect()
}

/// `sum mu^beta w (mu - lambda)^2` over shells.
pub fn hilbert_objective_sq(shells: &[(f64, f64)], beta: f64, lambda: f64) -> f64 {
    shells
        .iter()
        .map(|&(mu, w)| mu.powf(beta) * w * (mu - lambda).powi(2))
        .sum()
}

/// Minimum of the `H^beta` objective over `points` equally spaced shifts
/// spanning the occupied eigenvalues.
pub fn scan_minimum(shells: &[(f64, f64)], beta: f64, points: usize) -> (f64, f64) {
    let lo = shells.first().unwrap().0;
    let hi = shells.last().unwrap().0;
    let weighted: Vec<(f64, f64)> = shells.iter().map(|&(mu, w)| (mu, mu.powf(beta) * w)).collect();
    let mut best = (lo, f64::INFINITY);
    for i in 0..points {
        let lambda = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let v: f64 = weighted.iter().map(|&(mu, w)| w * (mu - lambda) * (mu - lambda)).sum();
        if v < best.1 {
            best = (lambda, v);
        }
    }
    (best.0, best.1.sqrt())
}

/// Velocity at every collocation point by direct summation of the Fourier
/// series; component-major, row-major points.
pub fn physical_direct(u: &SpectralVectorField) -> [Vec<f64>; 3] {
    let grid = u.grid();
    let n = grid.n();
    let ms = modes(u);
    let mut out = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for p in 0..grid.len() {
        let x = [p / (n * n), (p / n) % n, p % n];
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for (idx, (k, _, w)) in ms.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let phase = 2.0 * PI * (0..3).map(|j| (k[j] * x[j] as i64) as f64).sum::<f64>() / n as f64;
            let e = Complex64::from_polar(1.0, phase);
            for (a, c) in acc.iter_mut().zip(u.coefficient(idx)) {
                *a += c * e;
            }
        }
        for j in 0..3 {
            out[j][p] = acc[j].re;
        }
    }
    out
}

/// `(h^3 sum |u|^q)^{1/q}` from component samples.
pub fn lq_direct(samples: &[Vec<f64>], grid: &Grid, q: f64) -> f64 {
    let h3 = grid.spacing().powi(3);
    let sum: f64 = (0..grid.len())
        .map(|p| samples.iter().map(|c| c[p] * c[p]).sum::<f64>().sqrt().powf(q))
        .sum();
    (h3 * sum).powf(1.0 / q)
}

/// `(u . grad) u` as the Galerkin-truncated convolution
/// `sum_{p + q = k} (u_p . i 2 pi q / L) u_q` over every pair of lattice
/// modes, kept on the 2/3-rule band. The mean mode is not represented.
pub fn advection_convolution(u: &SpectralVectorField) -> Vec<[Complex64; 3]> {
    let grid = u.grid();
    let n = grid.n() as i64;
    let base = 2.0 * PI / grid.box_length();
    let mut out = vec![[Complex64::new(0.0, 0.0); 3]; grid.len()];
    let coeffs: Vec<([i64; 3], [Complex64; 3])> =
        (0..grid.len()).map(|i| (grid.wavevector(i), u.coefficient(i))).collect();
    for (p, up) in &coeffs {
        for (q, uq) in &coeffs {
            let k = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
            if k == [0, 0, 0] || k.iter().any(|&kj| 3 * kj.abs() > n) {
                continue;
            }
            let i_q = q.map(|qj| Complex64::new(0.0, base * qj as f64));
            let dot = up[0] * i_q[0] + up[1] * i_q[1] + up[2] * i_q[2];
            let idx = grid.index_of(k).unwrap();
            for j in 0..3 {
                out[idx][j] += dot * uq[j];
            }
        }
    }
    out
}

/// `u^2(x) = 2 u(2 x)` on the doubled grid, built from physical samples.
pub fn dilate_by_sampling(u: &SpectralVectorField) -> SpectralVectorField {
    let grid = u.grid();
    let n = grid.n();
    let m = 2 * n;
    let phys = u.to_physical();
    let src = phys.components();
    let mut out = [vec![0.0; m * m * m], vec![0.0; m * m * m], vec![0.0; m * m * m]];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let from = ((i % n) * n + j % n) * n + k % n;
                for c in 0..3 {
                    out[c][(i * m + j) * m + k] = 2.0 * src[c][from];
                }
            }
        }
    }
    let target = Grid::new(m, grid.box_length()).unwrap();
    SpectralVectorField::from_physical(target, [&out[0], &out[1], &out[2]]).unwrap()
}

/// Seeded divergence-free annulus fields on random boxes `L in [1/2, 2 pi]`
/// with random radii `r1 <= r2 <= n / (3L)`, slope and amplitude.
pub fn annulus_fields(n: usize, count: usize, seed: u64) -> Vec<SpectralVectorField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let l = rng.random_range(0.5..2.0 * PI);
        let top = n as f64 / 3.0;
        let m1 = rng.random_range(1.0..top);
        let m2 = rng.random_range(m1..=top);
        let slope = rng.random_range(-4.0..2.0);
        let amp = 10f64.powf(rng.random_range(-2.0..2.0));
        let grid = Grid::new(n, l).unwrap();
        if let Ok(u) = random_band(grid, m1 / l, m2 / l, slope, amp, rng.random()) {
            out.push(u);
        }
    }
    out
}

/// Closed-form `L^2` infimum `(lambda0, value)` from occupied shells.
pub fn l2_infimum_direct(u: &SpectralVectorField) -> (f64, f64) {
    let sh = shells(u);
    let total: f64 = sh.iter().map(|s| s.1).sum();
    let lambda0 = sh.iter().map(|s| s.0 * s.1).sum::<f64>() / total;
    (lambda0, hilbert_objective_sq(&sh, 0.0, lambda0).sqrt())
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
