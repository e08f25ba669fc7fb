//! Dealiased pseudo-spectral integration of the incompressible Navier-Stokes
//! equations on the torus, with per-instant diagnostics and growth-bound
//! tracking.

mod diagnostics;
mod growth;
mod nonlinear;
mod stepper;
mod trajectory;

pub use diagnostics::{enstrophy_rate_rhs, evaluate, CriterionSample, DiagnosticRecord};
pub use growth::{track_growth_bounds, ConstantChoice, GrowthSeries, IntegrandKind, AUTO_MARGIN};
pub use nonlinear::{advection, dealias_mask, nonlinear_term, Advection};
pub use stepper::{step, StepOutput, Stepper, CFL_LIMIT};
pub use trajectory::{
    energy_equality_residual, fd_tolerance, finish, integrate, three_point_derivative, Halt,
    IntegrationPlan, Trajectory, UNDER_RESOLVED_THRESHOLD,
};
