use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::RunConfig;
use super::table::write_csv;
use crate::error::Result;
use crate::initial::generate;
use crate::solver::{
    fd_tolerance, integrate, track_growth_bounds, GrowthSeries, Halt, Trajectory,
};
use crate::spectral::checkpoint;

/// Divergence defect above which a snapshot is flagged.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-12;
/// `lambda` independence of the growth identity above which a record is flagged.
pub const LAMBDA_INDEPENDENCE_TOLERANCE: f64 = 1e-10;

/// Problems detected along a run; all `false` on a clean run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Flags {
    pub halted: bool,
    pub under_resolved: bool,
    pub divergence: bool,
    pub energy_increase: bool,
    pub lambda_dependence: bool,
    pub growth_identity: bool,
    pub growth_bound: bool,
}

impl Flags {
    pub fn any(&self) -> bool {
        self.halted
            || self.under_resolved
            || self.divergence
            || self.energy_increase
            || self.lambda_dependence
            || self.growth_identity
            || self.growth_bound
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub max_energy_residual: f64,
    pub max_growth_identity_residual: f64,
    /// `5 h^2 max |d^2/dt^2 enstrophy|` estimated from the records.
    pub growth_identity_tolerance: f64,
    pub max_lambda_independence: f64,
    pub max_divergence_defect: f64,
}

/// Final state of one growth-bound series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthSummary {
    pub label: String,
    pub c_assumed: f64,
    pub max_ratio: f64,
    pub integral: f64,
    pub grad_sq: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub version: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub dt: f64,
    pub records: usize,
    pub final_step: usize,
    pub final_time: f64,
    pub halted: Option<Halt>,
    pub flags: Flags,
    pub metrics: Metrics,
    pub growth: Vec<GrowthSummary>,
    pub times: Vec<f64>,
    pub checkpoints: Vec<String>,
}

pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub growth: Vec<GrowthSeries>,
    pub summary: Summary,
    pub output_dir: PathBuf,
}

pub fn version() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

pub fn checkpoint_name(step: usize) -> String {
    format!("ckpt_{step}.field")
}

fn summarize(
    config: &RunConfig,
    traj: &Trajectory,
    growth: &[GrowthSeries],
    checkpoints: Vec<String>,
) -> Summary {
    let recs = &traj.records;
    let fold = |f: fn(&crate::solver::DiagnosticRecord) -> f64| recs.iter().map(f).fold(0.0, f64::max);
    let metrics = Metrics {
        max_energy_residual: traj.max_energy_residual(),
        max_growth_identity_residual: fold(|r| r.growth_identity_residual),
        growth_identity_tolerance: fd_tolerance(recs),
        max_lambda_independence: fold(|r| r.lambda_independence),
        max_divergence_defect: fold(|r| r.divergence_defect),
    };
    let flags = Flags {
        halted: traj.halted.is_some(),
        under_resolved: traj.under_resolved(),
        divergence: metrics.max_divergence_defect > DIVERGENCE_TOLERANCE,
        energy_increase: recs.windows(2).any(|w| w[1].energy > w[0].energy),
        lambda_dependence: metrics.max_lambda_independence > LAMBDA_INDEPENDENCE_TOLERANCE,
        growth_identity: recs.len() >= 3
            && metrics.max_growth_identity_residual > metrics.growth_identity_tolerance,
        growth_bound: growth.iter().any(|g| !g.holds),
    };
    let last = recs.last();
    Summary {
        version: version(),
        config_hash: config.hash(),
        config: config.clone(),
        dt: traj.dt,
        records: recs.len(),
        final_step: last.map_or(0, |r| r.step),
        final_time: last.map_or(0.0, |r| r.t),
        halted: traj.halted.clone(),
        flags,
        metrics,
        growth: growth
            .iter()
            .map(|g| GrowthSummary {
                label: g.label.clone(),
                c_assumed: g.c_assumed,
                max_ratio: g.max_ratio,
                integral: g.accumulator.last().copied().unwrap_or(0.0),
                grad_sq: last.map_or(0.0, |r| 2.0 * r.enstrophy),
                rhs: g.rhs.last().copied().unwrap_or(0.0),
                holds: g.holds,
            })
            .collect(),
        times: traj.times(),
        checkpoints,
    }
}

/// Integrate `config` and write `diagnostics.csv`, `summary.json` and the
/// checkpoints into `output_dir`. A halted run still writes its artifacts;
/// callers inspect `summary.halted`.
pub fn run(config: &RunConfig, output_dir: &Path) -> Result<RunOutcome> {
    std::fs::create_dir_all(output_dir)?;
    let grid = config.grid()?;
    let u0 = generate(grid, &config.initial_data)?;
    let mut checkpoints = Vec::new();
    let traj = integrate(&u0, &config.plan(), |step, _t, u| {
        let name = checkpoint_name(step);
        checkpoint::save(&output_dir.join(&name), u)?;
        checkpoints.push(name);
        Ok(())
    })?;
    let growth = track_growth_bounds(&traj.records, &config.c_assumed, config.c_default);
    let summary = summarize(config, &traj, &growth, checkpoints);

    checkpoint::write_atomic(
        &output_dir.join("diagnostics.csv"),
        write_csv(&traj.records)?.as_bytes(),
    )?;
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    checkpoint::write_atomic(&output_dir.join("summary.json"), json.as_bytes())?;
    Ok(RunOutcome {
        trajectory: traj,
        growth,
        summary,
        output_dir: output_dir.to_path_buf(),
    })
}
