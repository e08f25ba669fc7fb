mod common;

use std::f64::consts::{PI, TAU};

use common::{
    advection_convolution, dilate_by_sampling, hilbert_objective_sq, hs_norm_direct, lq_direct,
    physical_direct, rel, scan_minimum, shells,
};
use nsprox::criteria::{inf_lambda_hbeta, inf_lambda_l2, inf_lambda_lq};
use nsprox::initial::{abc_flow, random_band, single_mode, taylor_green};
use nsprox::io::{load_config, run};
use nsprox::solver::advection;
use nsprox::spectral::{dilate, hs_norm, lq_norm, neg_laplacian, shifted_laplacian, PhysicalField};
use nsprox::verify::{raw_field, sample_fields, shell_slope};
use nsprox::Grid;

#[test]
fn pseudo_spectral_advection_matches_direct_convolution() {
    for (l, seed) in [(1.0, 1), (TAU, 2), (3.0, 3)] {
        let grid = Grid::new(8, l).unwrap();
        for u in [raw_field(grid, seed).unwrap(), random_band(grid, 0.5 / l, 2.0 / l, 0.0, 1.0, seed).unwrap()] {
            let fast = advection(&u).unwrap().term;
            let slow = advection_convolution(&u);
            let scale = slow.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
            for (idx, expect) in slow.iter().enumerate() {
                let got = fast.coefficient(idx);
                for j in 0..3 {
                    assert!((got[j] - expect[j]).norm() <= 1e-12 * scale, "L={l} idx={idx} j={j}");
                }
            }
        }
    }
}

#[test]
fn sobolev_norms_match_direct_mode_sums() {
    for u in sample_fields(8, 10, 21).unwrap() {
        for alpha in [0.0, 0.5, 1.0, 2.25, 3.0] {
            assert!(rel(hs_norm(&u, alpha).unwrap(), hs_norm_direct(&u, alpha)) <= 1e-12);
        }
    }
    let u = taylor_green(Grid::new(16, TAU).unwrap(), 2.0).unwrap();
    assert!(rel(hs_norm(&u, 0.0).unwrap(), hs_norm_direct(&u, 0.0)) <= 1e-13);
}

#[test]
fn lq_norms_match_direct_fourier_sums() {
    for (l, seed) in [(1.0, 4), (TAU, 5)] {
        let grid = Grid::new(8, l).unwrap();
        let u = raw_field(grid, seed).unwrap();
        let samples = physical_direct(&u);
        for q in [1.5, 2.0, 3.0, 6.0] {
            let got = lq_norm(&u, q).unwrap();
            assert!(rel(got, lq_direct(&samples, &grid, q)) <= 1e-12, "q={q} L={l}");
        }
    }
}

#[test]
fn constant_field_lq_norm() {
    let l: f64 = 2.5;
    let grid = Grid::new(8, l).unwrap();
    let c = [0.3, -1.2, 0.4];
    let phys = PhysicalField::new(grid, c.iter().map(|&v| vec![v; grid.len()]).collect()).unwrap();
    let mag = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    for q in [1.5, 2.0, 3.0, 6.0] {
        assert!(rel(phys.lq_norm(q).unwrap(), mag * l.powf(3.0 / q)) <= 1e-13);
    }
}

#[test]
fn hilbert_infima_match_dense_scan() {
    for u in sample_fields(8, 10, 22).unwrap() {
        let sh = shells(&u);
        for beta in [0.0, 0.5, 1.0] {
            let fast = if beta == 0.0 {
                inf_lambda_l2(&u).unwrap()
            } else {
                inf_lambda_hbeta(&u, beta).unwrap()
            };
            let (_, scan) = scan_minimum(&sh, beta, 200_000);
            assert!(fast.value <= scan * (1.0 + 1e-9));
            assert!(rel(fast.value, scan) <= 1e-6, "beta={beta}");
            let at_min = hilbert_objective_sq(&sh, beta, fast.lambda0).sqrt();
            assert!(rel(fast.value, at_min) <= 1e-10);
        }
    }
}

#[test]
fn lq_infimum_beats_coarse_scan() {
    for u in sample_fields(8, 4, 23).unwrap() {
        let r = inf_lambda_lq(&u, 3.0).unwrap();
        let floor = 1e-12 * lq_norm(&neg_laplacian(&u), 3.0).unwrap();
        let lo = r.lambda0 - 200.0;
        let hi = r.lambda0 + 200.0;
        for i in 0..=40 {
            let lambda = lo + (hi - lo) * i as f64 / 40.0;
            let v = lq_norm(&shifted_laplacian(&u, lambda), 3.0).unwrap();
            assert!(r.value <= v * (1.0 + 1e-12) + floor, "{} > {v} at {lambda}", r.value);
        }
    }
}

#[test]
fn spectral_dilation_matches_physical_resampling() {
    for u in sample_fields(8, 5, 24).unwrap() {
        let a = dilate(&u, 2).unwrap();
        let b = dilate_by_sampling(&u);
        assert!(a.sub(&b).max_mode_magnitude() <= 1e-12 * a.max_mode_magnitude());
    }
}

#[test]
fn closed_form_eigenvalues_and_energies() {
    for l in [1.0, TAU, 3.0] {
        let grid = Grid::new(16, l).unwrap();
        let tg = inf_lambda_l2(&taylor_green(grid, 1.5).unwrap()).unwrap();
        assert!(rel(tg.lambda0, 12.0 * PI * PI / (l * l)) <= 1e-13);

        let (a, b, c) = (1.0, 0.5, 0.25);
        let abc = abc_flow(grid, a, b, c).unwrap();
        let energy = 0.5 * hs_norm(&abc, 0.0).unwrap().powi(2);
        assert!(rel(energy, (a * a + b * b + c * c) * l.powi(3) / 2.0) <= 1e-13);
        assert!(rel(inf_lambda_l2(&abc).unwrap().lambda0, 4.0 * PI * PI / (l * l)) <= 1e-13);

        let k = [2, -1, 1];
        let mode = single_mode(grid, k, [1.0, 1.0, -1.0]).unwrap();
        assert!(rel(inf_lambda_l2(&mode).unwrap().lambda0, grid.laplacian_eigenvalue(k)) <= 1e-13);
        assert!(rel(grid.laplacian_eigenvalue(k), 4.0 * PI * PI * 6.0 / (l * l)) <= 1e-13);
    }
}

#[test]
fn random_band_slope_regression() {
    let grid = Grid::unit(32).unwrap();
    for (slope, seed) in [(-5.0 / 3.0, 31), (-2.0, 32), (0.5, 33)] {
        let u = random_band(grid, 2.0, 10.0, slope, 1.0, seed).unwrap();
        assert!((shell_slope(&u, 2.0, 10.0) - slope).abs() <= 0.2, "slope {slope}");
    }
}

fn under_resolved_config(dir: &std::path::Path, output_every: usize) -> std::path::PathBuf {
    let path = dir.join(format!("ur{output_every}.cfg"));
    std::fs::write(
        &path,
        format!(
            "[grid]\nn = 8\n[time]\ndt = 2.5e-5\nt_end = 0.01\noutput_every = {output_every}\n\
             [initial_data]\nkind = random_band\nband = 1, 2.6\nspectral_slope = 0\namplitude = 1000\nseed = 3\n"
        ),
    )
    .unwrap();
    path
}

#[test]
fn sparse_records_on_coarse_grid_flag_under_resolution() {
    let tmp = tempfile::tempdir().unwrap();
    let sparse = run(&load_config(&under_resolved_config(tmp.path(), 20)).unwrap(), &tmp.path().join("a")).unwrap();
    assert!(sparse.summary.flags.under_resolved);
    assert!(sparse.summary.metrics.max_energy_residual > 1e-3);

    let dense = run(&load_config(&under_resolved_config(tmp.path(), 1)).unwrap(), &tmp.path().join("b")).unwrap();
    assert!(!dense.summary.flags.under_resolved);
    assert!(dense.summary.halted.is_none());
}
