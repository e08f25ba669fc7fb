use serde::Serialize;

use super::diagnostics::{evaluate, DiagnosticRecord};
use super::stepper::Stepper;
use crate::criteria::CriterionParams;
use crate::error::{Error, Result};
use crate::spectral::SpectralVectorField;

/// Energy residual above which a run is flagged as under-resolved.
pub const UNDER_RESOLVED_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct IntegrationPlan {
    pub dt: f64,
    pub t_end: f64,
    pub viscosity: f64,
    /// Record every this many steps; the final step is always recorded.
    pub output_every: usize,
    /// Checkpoint every this many steps (0 disables).
    pub checkpoint_every: usize,
    pub criteria: Vec<CriterionParams>,
    pub band_threshold: f64,
    /// Keep a copy of the field at every record.
    pub keep_snapshots: bool,
}

impl IntegrationPlan {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self {
            dt,
            t_end,
            viscosity: 1.0,
            output_every: 1,
            checkpoint_every: 0,
            criteria: Vec::new(),
            band_threshold: crate::criteria::DEFAULT_BAND_THRESHOLD,
            keep_snapshots: false,
        }
    }

    /// Number of steps; the last one is shortened to land on `t_end`.
    pub fn step_count(&self) -> usize {
        if self.t_end == 0.0 {
            return 0;
        }
        let ratio = self.t_end / self.dt;
        let whole = ratio.round();
        if (ratio - whole).abs() <= 1e-9 * ratio.max(1.0) {
            whole as usize
        } else {
            ratio.ceil() as usize
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::OutOfRange {
                name: "dt",
                value: self.dt,
                constraint: "dt > 0",
            });
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::OutOfRange {
                name: "t_end",
                value: self.t_end,
                constraint: "t_end >= 0",
            });
        }
        if self.output_every == 0 {
            return Err(Error::OutOfRange {
                name: "output_every",
                value: 0.0,
                constraint: "output_every >= 1",
            });
        }
        Ok(())
    }
}

/// Why a run stopped before `t_end`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Halt {
    pub t: f64,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub records: Vec<DiagnosticRecord>,
    /// Fields at each record when the plan keeps snapshots, else empty.
    pub snapshots: Vec<SpectralVectorField>,
    pub viscosity: f64,
    pub dt: f64,
    pub halted: Option<Halt>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn max_energy_residual(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.energy_residual)
            .fold(0.0, f64::max)
    }

    pub fn under_resolved(&self) -> bool {
        self.max_energy_residual() > UNDER_RESOLVED_THRESHOLD
    }
}

/// Integrate from `u0` and collect diagnostics; `on_checkpoint(step, t, u)`
/// fires at the checkpoint cadence (including step 0).
///
/// Step failures (CFL, blowup) end the run early: the trajectory keeps every
/// record up to the last valid state and reports the failure in `halted`.
pub fn integrate<F>(
    u0: &SpectralVectorField,
    plan: &IntegrationPlan,
    mut on_checkpoint: F,
) -> Result<Trajectory>
where
    F: FnMut(usize, f64, &SpectralVectorField) -> Result<()>,
{
    plan.validate()?;
    let grid = *u0.grid();
    let steps = plan.step_count();
    let stepper = Stepper::new(grid, plan.dt, plan.viscosity)?;

    let mut traj = Trajectory {
        records: Vec::new(),
        snapshots: Vec::new(),
        viscosity: plan.viscosity,
        dt: plan.dt,
        halted: None,
    };
    let record = |traj: &mut Trajectory, step: usize, t: f64, u: &SpectralVectorField| {
        let rec = evaluate(u, step, t, plan.viscosity, &plan.criteria, plan.band_threshold)?;
        traj.records.push(rec);
        if plan.keep_snapshots {
            traj.snapshots.push(u.clone());
        }
        Ok::<_, Error>(())
    };

    let mut u = u0.clone();
    record(&mut traj, 0, 0.0, &u)?;
    if plan.checkpoint_every > 0 {
        on_checkpoint(0, 0.0, &u)?;
    }

    for s in 0..steps {
        let t = s as f64 * plan.dt;
        let t_next = if s + 1 == steps {
            plan.t_end
        } else {
            (s + 1) as f64 * plan.dt
        };
        let h = t_next - t;
        let outcome = if (h - plan.dt).abs() <= 1e-12 * plan.dt {
            stepper.step(&u, t)
        } else {
            Stepper::new(grid, h, plan.viscosity).and_then(|st| st.step(&u, t))
        };
        match outcome {
            Ok(out) => u = out.field,
            Err(e @ (Error::CflViolation { .. } | Error::IntegrationBlowup { .. })) => {
                traj.halted = Some(Halt {
                    t,
                    reason: e.to_string(),
                });
                break;
            }
            Err(e) => return Err(e),
        }
        let n = s + 1;
        if n % plan.output_every == 0 || n == steps {
            record(&mut traj, n, t_next, &u)?;
        }
        if plan.checkpoint_every > 0 && (n % plan.checkpoint_every == 0 || n == steps) {
            on_checkpoint(n, t_next, &u)?;
        }
    }

    finish(&mut traj.records, plan.viscosity);
    Ok(traj)
}

/// Fill the finite-difference rate, growth-identity residual and energy
/// residual of every record.
pub fn finish(records: &mut [DiagnosticRecord], viscosity: f64) {
    let times: Vec<f64> = records.iter().map(|r| r.t).collect();
    let ens: Vec<f64> = records.iter().map(|r| r.enstrophy).collect();
    let fd = three_point_derivative(&times, &ens);
    let residual = energy_equality_residual(records, viscosity);
    for (i, r) in records.iter_mut().enumerate() {
        r.enstrophy_rate_fd = fd[i];
        r.growth_identity_residual = (fd[i] - r.enstrophy_rate).abs();
        r.energy_residual = residual[i];
    }
}

/// Derivative of samples `y(t)` by three-point Lagrange differentiation:
/// centered in the interior, one-sided at the ends. Exact for quadratics on
/// any spacing. Fewer than three samples give zeros (two give the slope).
pub fn three_point_derivative(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0.0],
        2 => {
            let s = (y[1] - y[0]) / (t[1] - t[0]);
            return vec![s, s];
        }
        _ => {}
    }
    let at = |i: usize, j: [usize; 3]| -> f64 {
        // d/dt of the quadratic through points j evaluated at t[i]
        let [a, b, c] = j;
        let x = t[i];
        let (ta, tb, tc) = (t[a], t[b], t[c]);
        y[a] * ((x - tb) + (x - tc)) / ((ta - tb) * (ta - tc))
            + y[b] * ((x - ta) + (x - tc)) / ((tb - ta) * (tb - tc))
            + y[c] * ((x - ta) + (x - tb)) / ((tc - ta) * (tc - tb))
    };
    (0..n)
        .map(|i| {
            if i == 0 {
                at(0, [0, 1, 2])
            } else if i == n - 1 {
                at(i, [n - 3, n - 2, n - 1])
            } else {
                at(i, [i - 1, i, i + 1])
            }
        })
        .collect()
}

/// `|E(t) + nu int_0^t ||grad u||^2 dtau - E(0)| / E(0)` at every record.
///
/// The dissipation integral uses the trapezoid rule with the endpoint
/// derivative correction `h^2/12 (f'_i - f'_{i+1})`, where
/// `f' = d/dt ||grad u||^2 = 2 enstrophy_rate` is known exactly from the
/// growth identity. The correction lifts the quadrature to fourth order so
/// the residual tracks the integrator error rather than the quadrature.
pub fn energy_equality_residual(records: &[DiagnosticRecord], viscosity: f64) -> Vec<f64> {
    let Some(first) = records.first() else {
        return Vec::new();
    };
    let e0 = first.energy;
    let mut integral = 0.0;
    let mut out = Vec::with_capacity(records.len());
    out.push(0.0);
    for w in records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let h = b.t - a.t;
        let (fa, fb) = (2.0 * a.enstrophy, 2.0 * b.enstrophy);
        let (da, db) = (2.0 * a.enstrophy_rate, 2.0 * b.enstrophy_rate);
        integral += 0.5 * h * (fa + fb) + h * h / 12.0 * (da - db);
        let lhs = b.energy + viscosity * integral;
        out.push(if e0 == 0.0 {
            (lhs - e0).abs()
        } else {
            (lhs - e0).abs() / e0
        });
    }
    out
}

/// Tolerance budget for the finite-difference rate: `5 h^2 max|E''|` with `h`
/// the largest record spacing and `E''` estimated by differentiating the
/// exact rate series.
pub fn fd_tolerance(records: &[DiagnosticRecord]) -> f64 {
    if records.len() < 3 {
        return 0.0;
    }
    let times: Vec<f64> = records.iter().map(|r| r.t).collect();
    let rate: Vec<f64> = records.iter().map(|r| r.enstrophy_rate).collect();
    let second = three_point_derivative(&times, &rate);
    let peak = second.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let h = times.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    5.0 * h * h * peak
}
