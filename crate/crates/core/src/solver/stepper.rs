use num_complex::Complex64;

use super::nonlinear::Kernel;
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralVectorField};

/// Largest admissible `max|u| dt / h`.
pub const CFL_LIMIT: f64 = 0.5;

/// Integrating-factor RK4 (Lawson) for
/// `du/dt = -nu (-Laplacian) u - P D[(u . grad) u]`.
///
/// The viscous factors `e^{-nu mu dt}` and `e^{-nu mu dt / 2}` are tabulated
/// once per mode, so the linear part is integrated exactly.
#[derive(Clone, Debug)]
pub struct Stepper {
    grid: Grid,
    dt: f64,
    viscosity: f64,
    full: Vec<f64>,
    half: Vec<f64>,
    kernel: Kernel,
}

/// Outcome of one step.
#[derive(Clone, Debug)]
pub struct StepOutput {
    pub field: SpectralVectorField,
    /// `max|u| dt / h` at the start of the step.
    pub cfl: f64,
}

impl Stepper {
    pub fn new(grid: Grid, dt: f64, viscosity: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::OutOfRange {
                name: "dt",
                value: dt,
                constraint: "dt > 0",
            });
        }
        if !(viscosity.is_finite() && viscosity >= 0.0) {
            return Err(Error::OutOfRange {
                name: "viscosity",
                value: viscosity,
                constraint: "viscosity >= 0",
            });
        }
        let mut full = Vec::with_capacity(grid.len());
        let mut half = Vec::with_capacity(grid.len());
        for k in grid.wavevectors() {
            let mu = grid.laplacian_eigenvalue(k);
            full.push((-viscosity * mu * dt).exp());
            half.push((-viscosity * mu * dt * 0.5).exp());
        }
        Ok(Self {
            grid,
            dt,
            viscosity,
            full,
            half,
            kernel: Kernel::new(grid),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn viscosity(&self) -> f64 {
        self.viscosity
    }

    /// `N(u) = -P D[(u . grad) u]` and the peak speed of `u`.
    fn rhs(&self, u: &SpectralVectorField, t: f64) -> Result<(SpectralVectorField, f64)> {
        let adv = self.kernel.advection(u).map_err(|e| match e {
            Error::IntegrationBlowup { .. } => Error::IntegrationBlowup { t },
            other => other,
        })?;
        Ok((self.kernel.project(&adv.term).scaled(-1.0), adv.max_speed))
    }

    /// Advance `u` from time `t` by one step.
    pub fn step(&self, u: &SpectralVectorField, t: f64) -> Result<StepOutput> {
        assert_eq!(*u.grid(), self.grid, "grid mismatch");
        let h = self.dt;
        let (a, speed) = self.rhs(u, t)?;
        let cfl = speed * h / self.grid.spacing();
        if cfl > CFL_LIMIT {
            return Err(Error::CflViolation {
                t,
                cfl,
                limit: CFL_LIMIT,
            });
        }

        let uc = u.components();
        let ac = a.components();
        // u1 = E2 (u + h/2 a)
        let u1 = self.build(|j, i| (uc[j][i] + ac[j][i] * (0.5 * h)) * self.half[i]);
        let (b, _) = self.rhs(&u1, t)?;
        let bc = b.components();
        // u2 = E2 u + h/2 b
        let u2 = self.build(|j, i| uc[j][i] * self.half[i] + bc[j][i] * (0.5 * h));
        let (c, _) = self.rhs(&u2, t)?;
        let cc = c.components();
        // u3 = E u + h E2 c
        let u3 = self.build(|j, i| uc[j][i] * self.full[i] + cc[j][i] * (h * self.half[i]));
        let (d, _) = self.rhs(&u3, t)?;
        let dc = d.components();
        let next = self.build(|j, i| {
            let e = self.full[i];
            let e2 = self.half[i];
            uc[j][i] * e
                + (ac[j][i] * e + (bc[j][i] + cc[j][i]) * (2.0 * e2) + dc[j][i]) * (h / 6.0)
        });

        let finite = next
            .components()
            .iter()
            .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        if !finite {
            return Err(Error::IntegrationBlowup { t: t + h });
        }
        Ok(StepOutput { field: next, cfl })
    }

    fn build<F>(&self, f: F) -> SpectralVectorField
    where
        F: Fn(usize, usize) -> Complex64,
    {
        let len = self.grid.len();
        let coeffs = [0, 1, 2].map(|j| (0..len).map(|i| f(j, i)).collect::<Vec<_>>());
        SpectralVectorField::from_trusted(self.grid, coeffs)
    }
}

/// One step of size `dt` at unit viscosity.
pub fn step(u: &SpectralVectorField, dt: f64) -> Result<SpectralVectorField> {
    Ok(Stepper::new(*u.grid(), dt, 1.0)?.step(u, 0.0)?.field)
}
