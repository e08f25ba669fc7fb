//! Property suite behind the `verify` command.
//!
//! Every property reports a margin: the tolerance minus the worst measured
//! violation, in the property's own units. A property passes when its margin
//! is nonnegative.

use std::cell::OnceCell;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::criteria::{
    band_radii, deficit_factor, inf_lambda_l2, inf_lambda_lq, objective_at,
    sharp_sobolev_constant, CriterionParams,
};
use crate::error::{Error, Result};
use crate::initial::{abc_flow, random_band, single_mode, taylor_green};
use crate::io::{self, table, RunConfig};
use crate::solver::{
    advection, integrate, nonlinear_term, track_growth_bounds, ConstantChoice, IntegrationPlan,
    Stepper, Trajectory,
};
use crate::spectral::{
    checkpoint, dilate, hs_norm, leray_project, lq_norm, norm_sq, Grid, SpectralVectorField,
};

/// Outcome of one property.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub margin: f64,
    pub detail: String,
    pub seconds: f64,
}

/// Tolerance minus worst violation, with a one-line description.
#[derive(Clone, Debug, PartialEq)]
pub struct Measured {
    pub margin: f64,
    pub detail: String,
}

impl Measured {
    fn new(margin: f64, detail: String) -> Self {
        Self { margin, detail }
    }
}

type Runner = fn(&Context) -> Result<Measured>;

/// Shared, lazily computed inputs.
#[derive(Default)]
pub struct Context {
    taylor_green: OnceCell<Trajectory>,
    random_band: OnceCell<Trajectory>,
}

impl Context {
    fn taylor_green_run(&self) -> Result<&Trajectory> {
        if let Some(t) = self.taylor_green.get() {
            return Ok(t);
        }
        let grid = Grid::new(16, TAU)?;
        let u = taylor_green(grid, 1.0)?;
        let plan = IntegrationPlan {
            criteria: vec![CriterionParams::from_q(2.0)?, CriterionParams::from_q(3.0)?],
            keep_snapshots: true,
            ..IntegrationPlan::new(2e-3, 0.1)
        };
        let traj = integrate(&u, &plan, |_, _, _| Ok(()))?;
        Ok(self.taylor_green.get_or_init(|| traj))
    }

    fn random_band_run(&self) -> Result<&Trajectory> {
        if let Some(t) = self.random_band.get() {
            return Ok(t);
        }
        let grid = Grid::unit(16)?;
        let u = random_band(grid, 2.0, 5.0, -5.0 / 3.0, 50.0, 1)?;
        let plan = IntegrationPlan {
            criteria: vec![CriterionParams::from_q(2.0)?, CriterionParams::from_q(3.0)?],
            keep_snapshots: true,
            output_every: 5,
            ..IntegrationPlan::new(2e-5, 1e-3)
        };
        let traj = integrate(&u, &plan, |_, _, _| Ok(()))?;
        Ok(self.random_band.get_or_init(|| traj))
    }

    fn runs(&self) -> Result<[(&'static str, &Trajectory); 2]> {
        Ok([
            ("taylor_green", self.taylor_green_run()?),
            ("random_band", self.random_band_run()?),
        ])
    }
}

pub struct Property {
    pub name: &'static str,
    run: Runner,
}

/// Every property, in suite order.
pub fn properties() -> Vec<Property> {
    macro_rules! props {
        ($($name:literal => $f:ident),* $(,)?) => {
            vec![$(Property { name: $name, run: $f }),*]
        };
    }
    props![
        "spectral.plancherel" => plancherel,
        "spectral.interpolation" => interpolation,
        "spectral.leray" => leray,
        "spectral.transform_round_trip" => transform_round_trip,
        "spectral.rescaling" => rescaling,
        "criteria.search_agreement" => search_agreement,
        "criteria.minimizer_certificate" => minimizer_certificate,
        "criteria.deficit_scale_invariance" => deficit_scale_invariance,
        "criteria.infimum_scaling" => infimum_scaling,
        "criteria.band_bound" => band_bound,
        "criteria.sobolev_constant_shape" => sobolev_constant_shape,
        "solver.divergence_free" => divergence_free,
        "solver.energy_dissipation" => energy_dissipation,
        "solver.lambda_independence" => lambda_independence,
        "solver.gronwall" => gronwall,
        "solver.galerkin_energy" => galerkin_energy,
        "solver.temporal_convergence" => temporal_convergence,
        "initial.invariants" => generator_invariants,
        "initial.eigenfunctions" => eigenfunctions,
        "initial.spectral_slope" => spectral_slope,
        "io.csv_schema" => csv_schema,
        "io.run_artifacts" => run_artifacts,
    ]
}

/// Run every property whose name contains `filter`.
pub fn run_suite(filter: Option<&str>, mut report: impl FnMut(&Check)) -> Vec<Check> {
    let ctx = Context::default();
    let mut out = Vec::new();
    for p in properties() {
        if filter.is_some_and(|f| !p.name.contains(f)) {
            continue;
        }
        let start = Instant::now();
        let check = match (p.run)(&ctx) {
            Ok(m) => Check {
                name: p.name,
                pass: m.margin >= 0.0,
                margin: m.margin,
                detail: m.detail,
                seconds: 0.0,
            },
            Err(e) => Check {
                name: p.name,
                pass: false,
                margin: f64::NEG_INFINITY,
                detail: format!("error: {e}"),
                seconds: 0.0,
            },
        };
        let check = Check {
            seconds: start.elapsed().as_secs_f64(),
            ..check
        };
        report(&check);
        out.push(check);
    }
    out
}

/// Seeded divergence-free fields on random annuli.
pub fn sample_fields(n: usize, count: usize, seed: u64) -> Result<Vec<SpectralVectorField>> {
    let grid = Grid::unit(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_max = n as f64 / 3.0;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r1 = rng.random_range(1.0..r_max / 2.0);
        let r2 = rng.random_range(r1..r_max);
        let slope = rng.random_range(-3.0..1.0);
        let amp = rng.random_range(0.1..10.0);
        match random_band(grid, r1, r2, slope, amp, rng.random()) {
            Ok(u) => out.push(u),
            Err(Error::EmptyBand { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Seeded field with random (not divergence-free) coefficients on every
/// dealiased mode.
pub fn raw_field(grid: Grid, seed: u64) -> Result<SpectralVectorField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralVectorField::from_fn(grid, |k| {
        if !grid.in_dealiased_band(k) {
            return [Complex64::new(0.0, 0.0); 3];
        }
        let decay = 1.0 / (1.0 + norm_sq(k) as f64);
        [0; 3].map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im) * decay
        })
    })
}

fn worst<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn relative(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn plancherel(_: &Context) -> Result<Measured> {
    let mut err: f64 = 0.0;
    for (n, count, seed) in [(8, 40, 1), (16, 40, 2), (32, 20, 3)] {
        for u in sample_fields(n, count, seed)? {
            err = err.max(relative(lq_norm(&u, 2.0)?, hs_norm(&u, 0.0)?));
        }
    }
    Ok(Measured::new(1e-10 - err, format!("max rel |L2 - H0| = {err:.3e} over 100 fields")))
}

/// `1 - hs(a-1)^2 / (hs(a-2) hs(a) (1 + 1e-12))` minimized over fields and orders.
pub fn check_interpolation<F>(fields: &[SpectralVectorField], ratio: F) -> Result<Measured>
where
    F: Fn(&SpectralVectorField, f64) -> Result<f64>,
{
    let mut margin = f64::INFINITY;
    for u in fields {
        for alpha in [2.0, 2.25, 2.5] {
            margin = margin.min(1.0 + 1e-12 - ratio(u, alpha)?);
        }
    }
    Ok(Measured::new(
        margin,
        format!("min (1 + 1e-12) - ratio = {margin:.3e} over {} fields x 3 orders", fields.len()),
    ))
}

/// `hs(a-1)^2 / (hs(a-2) hs(a))`.
pub fn interpolation_ratio(u: &SpectralVectorField, alpha: f64) -> Result<f64> {
    let mid = hs_norm(u, alpha - 1.0)?;
    Ok(mid * mid / (hs_norm(u, alpha - 2.0)? * hs_norm(u, alpha)?))
}

fn interpolation(_: &Context) -> Result<Measured> {
    check_interpolation(&sample_fields(16, 100, 4)?, interpolation_ratio)
}

fn leray(_: &Context) -> Result<Measured> {
    let grid = Grid::unit(16)?;
    let mut err: f64 = 0.0;
    for seed in 0..20 {
        let u = raw_field(grid, 2 * seed)?;
        let v = raw_field(grid, 2 * seed + 1)?;
        let pu = leray_project(&u);
        let ppu = leray_project(&pu);
        err = err.max(ppu.sub(&pu).max_mode_magnitude() / pu.max_mode_magnitude());
        let scale = u.inner(&u).sqrt() * v.inner(&v).sqrt();
        err = err.max((pu.inner(&v) - u.inner(&leray_project(&v))).abs() / scale);
    }
    Ok(Measured::new(1e-12 - err, format!("max idempotence / adjointness defect = {err:.3e}")))
}

fn transform_round_trip(_: &Context) -> Result<Measured> {
    let mut err: f64 = 0.0;
    for (n, seed) in [(8, 5), (16, 6), (32, 7)] {
        let grid = Grid::unit(n)?;
        let u = raw_field(grid, seed)?;
        let phys = u.to_physical();
        let c = phys.components();
        let back = SpectralVectorField::from_physical(grid, [&c[0], &c[1], &c[2]])?;
        err = err.max(back.sub(&u).max_mode_magnitude() / u.max_mode_magnitude());
    }
    Ok(Measured::new(1e-12 - err, format!("max rel coefficient error = {err:.3e}")))
}

fn rescaling(_: &Context) -> Result<Measured> {
    let mut err: f64 = 0.0;
    for u in sample_fields(16, 20, 8)? {
        let v = dilate(&u, 2)?;
        for alpha in [0.0, 1.0, 2.0] {
            let expect = 2f64.powf(1.0 + alpha) * hs_norm(&u, alpha)?;
            err = err.max(relative(hs_norm(&v, alpha)?, expect));
        }
    }
    Ok(Measured::new(1e-10 - err, format!("max rel error of 2^(1+a) scaling = {err:.3e}")))
}

fn search_agreement(_: &Context) -> Result<Measured> {
    let mut margin = f64::INFINITY;
    for u in sample_fields(16, 100, 9)? {
        let closed = inf_lambda_l2(&u)?.value;
        let searched = inf_lambda_lq(&u, 2.0)?.value;
        margin = margin.min(1e-8 * (1.0 + closed) - (searched - closed).abs());
    }
    Ok(Measured::new(margin, format!("min 1e-8 (1 + v) - |search - closed| = {margin:.3e}")))
}

fn minimizer_certificate(_: &Context) -> Result<Measured> {
    let mut margin = f64::INFINITY;
    for u in sample_fields(16, 30, 10)? {
        let l2 = inf_lambda_l2(&u)?;
        let mut cases = vec![(l2, 0.0)];
        for q in [2.0, 3.0] {
            cases.push((inf_lambda_lq(&u, q)?, q));
        }
        for (r, order) in cases {
            let delta = 1e-3 * r.lambda0.abs().max(1.0);
            let at = objective_at(&u, r.method, order, r.lambda0)?;
            for l in [r.lambda0 - delta, r.lambda0 + delta] {
                margin = margin.min(objective_at(&u, r.method, order, l)? - at + 1e-9);
            }
        }
    }
    Ok(Measured::new(margin, format!("min f(l0 +- d) - f(l0) + 1e-9 = {margin:.3e}")))
}

fn deficit_scale_invariance(_: &Context) -> Result<Measured> {
    let mut err: f64 = 0.0;
    for u in sample_fields(16, 20, 11)? {
        let v = dilate(&u, 2)?;
        for alpha in [2.0, 2.25, 2.5] {
            let a = deficit_factor(&u, alpha)?.ratio;
            let b = deficit_factor(&v, alpha)?.ratio;
            err = err.max((a - b).abs());
        }
    }
    Ok(Measured::new(1e-10 - err, format!("max |ratio(u^2) - ratio(u)| = {err:.3e}")))
}

fn infimum_scaling(_: &Context) -> Result<Measured> {
    let mut err: f64 = 0.0;
    for u in sample_fields(16, 20, 12)? {
        let a = inf_lambda_l2(&u)?;
        let b = inf_lambda_l2(&dilate(&u, 2)?)?;
        err = err.max(relative(b.value, 8.0 * a.value));
        err = err.max(relative(b.lambda0, 4.0 * a.lambda0));
    }
    Ok(Measured::new(1e-9 - err, format!("max rel error of value x8 / lambda0 x4 = {err:.3e}")))
}

/// `ratio - ((r1/r2)^4 - 1e-12)` minimized over fields and orders.
pub fn check_band_bound(fields: &[SpectralVectorField]) -> Result<Measured> {
    let mut margin = f64::INFINITY;
    for u in fields {
        let band = band_radii(u, 0.0)?;
        let bound = (band.r1 / band.r2).powi(4);
        for alpha in [2.0, 2.25, 2.5] {
            margin = margin.min(deficit_factor(u, alpha)?.raw_ratio - bound + 1e-12);
        }
    }
    Ok(Measured::new(margin, format!("min ratio - (r1/r2)^4 + 1e-12 = {margin:.3e}")))
}

fn band_bound(_: &Context) -> Result<Measured> {
    check_band_bound(&sample_fields(16, 100, 13)?)
}

fn sobolev_constant_shape(_: &Context) -> Result<Measured> {
    let s: Vec<f64> = (0..100).map(|i| 0.01 + 1.48 * i as f64 / 99.0).collect();
    let v = s
        .iter()
        .map(|&s| sharp_sobolev_constant(s))
        .collect::<Result<Vec<f64>>>()?;
    let argmin = (0..v.len()).min_by(|&i, &j| v[i].total_cmp(&v[j])).unwrap_or(0);
    let down = v[..=argmin].windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    let up = v[argmin..].windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let half = 2f64.powf(-1.0 / 6.0) * PI.powf(-2.0 / 3.0);
    let one = 2f64.powf(-1.0 / 3.0) * PI.powf(-4.0 / 3.0) * 2.0 / 3f64.sqrt();
    let err = relative(sharp_sobolev_constant(0.5)?, half).max(relative(sharp_sobolev_constant(1.0)?, one));
    let margin = down.min(up).min(1e-12 - err);
    Ok(Measured::new(
        margin,
        format!(
            "strictly decreasing to s = {:.3}, increasing after; closed forms rel err {err:.1e}",
            s[argmin]
        ),
    ))
}

/// `1e-12 - max divergence defect` over `snapshots`.
pub fn check_divergence(snapshots: &[SpectralVectorField]) -> Measured {
    let err = worst(snapshots.iter().map(|u| u.divergence_defect()));
    Measured::new(1e-12 - err, format!("max divergence defect = {err:.3e} over {} snapshots", snapshots.len()))
}

fn divergence_free(ctx: &Context) -> Result<Measured> {
    let mut all = Vec::new();
    for (_, t) in ctx.runs()? {
        all.extend(t.snapshots.iter().cloned());
    }
    Ok(check_divergence(&all))
}

fn energy_dissipation(ctx: &Context) -> Result<Measured> {
    let mut margin = f64::INFINITY;
    for (_, t) in ctx.runs()? {
        for w in t.records.windows(2) {
            margin = margin.min((w[0].energy - w[1].energy) / w[0].energy);
        }
    }
    Ok(Measured::new(margin, format!("min relative energy drop per record = {margin:.3e}")))
}

fn lambda_independence(ctx: &Context) -> Result<Measured> {
    let mut err: f64 = 0.0;
    for (_, t) in ctx.runs()? {
        err = err.max(worst(t.records.iter().map(|r| r.lambda_independence)));
    }
    Ok(Measured::new(1e-10 - err, format!("max rel |rate(lambda0) - rate(0)| = {err:.3e}")))
}

fn gronwall(ctx: &Context) -> Result<Measured> {
    let mut margin = f64::INFINITY;
    let mut series = 0;
    for (_, t) in ctx.runs()? {
        for g in track_growth_bounds(&t.records, &[], ConstantChoice::Auto) {
            series += 1;
            for (r, rhs) in t.records.iter().zip(&g.rhs) {
                margin = margin.min((rhs * (1.0 + 1e-12) - 2.0 * r.enstrophy) / rhs);
            }
        }
    }
    Ok(Measured::new(margin, format!("min relative slack of {series} auto-constant bounds = {margin:.3e}")))
}

fn galerkin_energy(_: &Context) -> Result<Measured> {
    let mut margin = f64::INFINITY;
    for u in sample_fields(16, 100, 14)? {
        let n = nonlinear_term(&u)?;
        let scale = n.inner(&n).sqrt() * u.inner(&u).sqrt();
        margin = margin.min(1e-12 - n.inner(&u).abs() / scale);
        let a = advection(&u)?.term;
        let scale = a.inner(&a).sqrt() * u.inner(&u).sqrt();
        margin = margin.min(1e-12 - a.inner(&u).abs() / scale);
    }
    Ok(Measured::new(margin, format!("min 1e-12 - |<N(u), u>| / (|N| |u|) = {margin:.3e}")))
}

/// `(u_4h - u_2h) / (u_2h - u_h)` in the energy norm at `t_end`.
pub fn richardson_ratio(u0: &SpectralVectorField, dt: f64, t_end: f64) -> Result<f64> {
    let solve = |h: f64| -> Result<SpectralVectorField> {
        let stepper = Stepper::new(*u0.grid(), h, 1.0)?;
        let steps = (t_end / h).round() as usize;
        let mut u = u0.clone();
        for s in 0..steps {
            u = stepper.step(&u, s as f64 * h)?.field;
        }
        Ok(u)
    };
    let coarse = solve(4.0 * dt)?;
    let mid = solve(2.0 * dt)?;
    let fine = solve(dt)?;
    Ok(hs_norm(&coarse.sub(&mid), 0.0)? / hs_norm(&mid.sub(&fine), 0.0)?)
}

fn temporal_convergence(_: &Context) -> Result<Measured> {
    let u0 = taylor_green(Grid::new(16, TAU)?, 10.0)?;
    let ratio = richardson_ratio(&u0, 1e-3, 0.2)?;
    let margin = (ratio - 12.0).min(20.0 - ratio);
    Ok(Measured::new(margin, format!("Richardson ratio = {ratio:.3} (dt = 4e-3, 2e-3, 1e-3)")))
}

fn generator_fields() -> Result<Vec<(String, SpectralVectorField)>> {
    let grid = Grid::unit(16)?;
    let mut out = vec![
        ("taylor_green".to_string(), taylor_green(grid, 2.0)?),
        ("abc".to_string(), abc_flow(grid, 1.0, 0.7, 0.3)?),
        ("single_mode".to_string(), single_mode(grid, [1, 2, 3], [1.0, 1.0, -1.0])?),
    ];
    for (i, u) in sample_fields(16, 5, 15)?.into_iter().enumerate() {
        out.push((format!("random_band#{i}"), u));
    }
    Ok(out)
}

fn generator_invariants(_: &Context) -> Result<Measured> {
    let mut err: f64 = 0.0;
    let fields = generator_fields()?;
    for (_, u) in &fields {
        err = err.max(u.divergence_defect()).max(u.hermitian_defect());
        err = err.max(u.at([0, 0, 0]).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok(Measured::new(1e-12 - err, format!("max divergence / Hermitian / mean defect = {err:.3e} over {} fields", fields.len())))
}

fn eigenfunctions(_: &Context) -> Result<Measured> {
    let mut cases = Vec::new();
    for l in [1.0, TAU] {
        let grid = Grid::new(16, l)?;
        let base = 4.0 * PI * PI / (l * l);
        cases.push((taylor_green(grid, 1.0)?, 3.0 * base));
        cases.push((abc_flow(grid, 1.0, 0.5, 0.25)?, base));
    }
    let grid = Grid::unit(16)?;
    let modes: [([i64; 3], [f64; 3]); 10] = [
        ([1, 0, 0], [0.0, 1.0, 0.0]),
        ([0, 1, 0], [0.0, 0.0, 1.0]),
        ([0, 0, 2], [1.0, 1.0, 0.0]),
        ([1, 1, 0], [1.0, -1.0, 0.0]),
        ([1, 1, 1], [1.0, -1.0, 0.0]),
        ([2, -1, 0], [1.0, 2.0, 3.0]),
        ([3, 0, 1], [0.0, 1.0, 0.0]),
        ([-2, 2, 1], [1.0, 1.0, 0.0]),
        ([4, 1, -2], [0.0, 2.0, 1.0]),
        ([5, 0, 0], [0.0, 0.6, 0.8]),
    ];
    for (k, pol) in modes {
        cases.push((single_mode(grid, k, pol)?, grid.laplacian_eigenvalue(k)));
    }
    let mut margin = f64::INFINITY;
    for (u, mu) in &cases {
        let r = inf_lambda_l2(u)?;
        margin = margin.min(1e-12 - relative(r.lambda0, *mu));
        margin = margin.min(1e-10 - r.value / hs_norm(u, 2.0)?);
    }
    Ok(Measured::new(margin, format!("min margin over {} eigenfunctions = {margin:.3e}", cases.len())))
}

/// Least-squares slope of `log E(shell)` against `log shell`.
pub fn shell_slope(u: &SpectralVectorField, r1: f64, r2: f64) -> f64 {
    let grid = u.grid();
    let mut shells = std::collections::BTreeMap::<u64, f64>::new();
    for (idx, k) in grid.wavevectors().enumerate().skip(1) {
        let e: f64 = u.coefficient(idx).iter().map(|z| z.norm_sqr()).sum();
        if e > 0.0 {
            *shells.entry((norm_sq(k) as f64).sqrt().round() as u64).or_default() += e;
        }
    }
    let pts: Vec<(f64, f64)> = shells
        .into_iter()
        .filter(|&(s, _)| s as f64 >= r1.ceil() && s as f64 <= r2.floor())
        .map(|(s, e)| ((s as f64).ln(), e.ln()))
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let cov: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    cov / var
}

fn spectral_slope(_: &Context) -> Result<Measured> {
    let grid = Grid::unit(32)?;
    let mut err: f64 = 0.0;
    for (slope, seed) in [(-5.0 / 3.0, 1), (-3.0, 2), (0.0, 3), (1.0, 4)] {
        let u = random_band(grid, 1.0, 10.0, slope, 1.0, seed)?;
        err = err.max((shell_slope(&u, 1.0, 10.0) - slope).abs());
    }
    Ok(Measured::new(0.2 - err, format!("max |fitted - requested| slope = {err:.3e} over shells 1..10")))
}

fn csv_schema(ctx: &Context) -> Result<Measured> {
    let records = &ctx.taylor_green_run()?.records;
    let text = table::write_csv(records)?;
    let parsed = table::read_csv(&text)?;
    let expect = table::columns(&records[0].criteria);
    if parsed.header != expect || text.lines().next() != Some(expect.join(",").as_str()) {
        return Ok(Measured::new(-1.0, "header differs from the documented columns".into()));
    }
    let mut err: f64 = 0.0;
    for (r, row) in records.iter().zip(&parsed.rows) {
        for (name, value) in [("t", r.t), ("energy", r.energy), ("enstrophy_rate", r.enstrophy_rate)] {
            let col = parsed.column(name).expect("documented column");
            err = err.max((row[col] - value).abs());
        }
    }
    Ok(Measured::new(-err, format!("{} rows, max round-trip difference = {err:.1e}", parsed.rows.len())))
}

/// Columns a `diagnose` of a checkpoint must reproduce.
pub const INSTANTANEOUS_COLUMNS: [&str; 11] = [
    "energy",
    "enstrophy",
    "palinstrophy_sq",
    "lambda0",
    "inf_l2",
    "l2_deficit_integrand",
    "r1",
    "r2",
    "enstrophy_rate",
    "max_speed",
    "divergence_defect",
];

fn run_artifacts(_: &Context) -> Result<Measured> {
    let dir = std::env::temp_dir().join(format!("nsprox-verify-{}", std::process::id()));
    let text = "[grid]\nn = 16\nbox_length = 2pi\n[time]\ndt = 2e-3\nt_end = 0.02\ncheckpoint_every = 5\n\
[initial_data]\nkind = random_band\nband = 0.3, 0.8\nseed = 5\n[criteria]\nq = 2, 3\n";
    let config: RunConfig = io::parse_config(text)?;
    let outcome = io::run(&config, &dir);
    let measured = outcome.and_then(|out| {
        let summary: serde_json::Value =
            serde_json::from_slice(&std::fs::read(dir.join("summary.json"))?)
                .map_err(|e| Error::Format(e.to_string()))?;
        if summary["config_hash"] != serde_json::Value::from(config.hash()) {
            return Ok(Measured::new(-1.0, "summary.json lacks the config hash".into()));
        }
        let table = table::read_csv(&std::fs::read_to_string(dir.join("diagnostics.csv"))?)?;
        let mut err: f64 = 0.0;
        for name in &out.summary.checkpoints {
            let step: usize = name["ckpt_".len()..name.len() - ".field".len()].parse().unwrap_or(0);
            let u = checkpoint::load(&dir.join(name))?;
            let rep = io::diagnose(&u, &config.criteria, config.viscosity, config.band_threshold)?;
            let row = table
                .rows
                .iter()
                .position(|r| r[0] as usize == step)
                .ok_or_else(|| Error::Format(format!("no CSV row for step {step}")))?;
            let rec = serde_json::to_value(&rep.record).map_err(|e| Error::Format(e.to_string()))?;
            for col in INSTANTANEOUS_COLUMNS {
                let a = table.get(row, col).unwrap_or(f64::NAN);
                let b = rec[col].as_f64().unwrap_or(f64::NAN);
                err = err.max(relative(b, a).min((a - b).abs()));
            }
        }
        Ok(Measured::new(
            1e-12 - err,
            format!("{} checkpoints re-diagnosed, max deviation from CSV = {err:.3e}", out.summary.checkpoints.len()),
        ))
    });
    let _ = std::fs::remove_dir_all(&dir);
    measured
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let names: Vec<&str> = properties().iter().map(|p| p.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names.len(), sorted.len());
    }

    #[test]
    fn sign_flipped_leray_fails_divergence_check() {
        let grid = Grid::unit(8).unwrap();
        let u = raw_field(grid, 1).unwrap();
        // u + (k . u) k / |k|^2 instead of minus
        let wrong = u.axpy(1.0, &u.sub(&leray_project(&u)));
        assert!(check_divergence(&[leray_project(&u)]).margin >= 0.0);
        assert!(check_divergence(&[wrong]).margin < 0.0);
    }

    #[test]
    fn wrong_deficit_exponent_fails_interpolation_check() {
        let fields = sample_fields(8, 10, 3).unwrap();
        assert!(check_interpolation(&fields, interpolation_ratio).unwrap().margin >= 0.0);
        let wrong = |u: &SpectralVectorField, a: f64| {
            let top = hs_norm(u, a)?;
            Ok(top * top / (hs_norm(u, a - 2.0)? * hs_norm(u, a - 1.0)?))
        };
        assert!(check_interpolation(&fields, wrong).unwrap().margin < 0.0);
    }

    #[test]
    fn filter_selects_by_substring() {
        let checks = run_suite(Some("sobolev_constant"), |_| {});
        assert_eq!(checks.len(), 1);
        assert!(checks[0].pass, "{:?}", checks[0]);
    }
}
