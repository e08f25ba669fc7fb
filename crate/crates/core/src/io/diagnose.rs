use serde::Serialize;

use crate::criteria::{
    band_radii, deficit_factor, inf_lambda_hbeta, inf_lambda_l2, BandReport, CriterionParams,
    DeficitReport, InfimumResult,
};
use crate::error::Result;
use crate::solver::{evaluate, DiagnosticRecord};
use crate::spectral::SpectralVectorField;

/// Orders at which the interpolation and band inequalities are always checked.
pub const CHECK_ALPHAS: [f64; 3] = [2.0, 2.25, 2.5];
/// Slack allowed on both inequality checks.
pub const CHECK_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HbetaInfimum {
    pub beta: f64,
    pub result: InfimumResult,
}

/// `||u||^2_{alpha-1} <= ||u||_{alpha-2} ||u||_alpha`, reported as
/// `margin = 1 - ratio`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterpolationCheck {
    pub alpha: f64,
    pub ratio: f64,
    pub margin: f64,
    pub pass: bool,
}

/// `ratio >= (r1/r2)^4` for the thresholded support radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandCheck {
    pub alpha: f64,
    pub ratio: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnoseReport {
    pub n: usize,
    pub box_length: f64,
    pub l2: InfimumResult,
    pub hbeta: Vec<HbetaInfimum>,
    pub deficits: Vec<DeficitReport>,
    pub band: BandReport,
    pub interpolation_checks: Vec<InterpolationCheck>,
    pub band_checks: Vec<BandCheck>,
    /// The same instantaneous quantities a run records.
    pub record: DiagnosticRecord,
    pub pass: bool,
}

/// Evaluate every criterion quantity of a single field.
pub fn diagnose(
    u: &SpectralVectorField,
    criteria: &[CriterionParams],
    viscosity: f64,
    band_threshold: f64,
) -> Result<DiagnoseReport> {
    let grid = *u.grid();
    let l2 = inf_lambda_l2(u)?;
    let band = band_radii(u, band_threshold)?;

    let mut alphas: Vec<f64> = CHECK_ALPHAS.to_vec();
    for c in criteria {
        if c.has_deficit_form() && !alphas.contains(&c.alpha) {
            alphas.push(c.alpha);
        }
    }
    let mut hbeta = Vec::new();
    for c in criteria {
        if !hbeta.iter().any(|h: &HbetaInfimum| h.beta == c.beta) && (0.0..1.5).contains(&c.beta) {
            hbeta.push(HbetaInfimum {
                beta: c.beta,
                result: inf_lambda_hbeta(u, c.beta)?,
            });
        }
    }

    let deficits = alphas
        .iter()
        .map(|&a| deficit_factor(u, a))
        .collect::<Result<Vec<_>>>()?;
    let interpolation_checks: Vec<InterpolationCheck> = deficits
        .iter()
        .map(|d| {
            let margin = 1.0 - d.raw_ratio;
            InterpolationCheck {
                alpha: d.alpha,
                ratio: d.raw_ratio,
                margin,
                pass: margin >= -CHECK_SLACK,
            }
        })
        .collect();
    let q = (band.r1 / band.r2).powi(2);
    let bound = q * q;
    let band_checks: Vec<BandCheck> = deficits
        .iter()
        .map(|d| {
            let margin = d.raw_ratio - bound;
            BandCheck {
                alpha: d.alpha,
                ratio: d.raw_ratio,
                bound,
                margin,
                pass: margin >= -CHECK_SLACK,
            }
        })
        .collect();

    let record = evaluate(u, 0, 0.0, viscosity, criteria, band_threshold)?;
    let pass = interpolation_checks.iter().all(|c| c.pass) && band_checks.iter().all(|c| c.pass);
    Ok(DiagnoseReport {
        n: grid.n(),
        box_length: grid.box_length(),
        l2,
        hbeta,
        deficits,
        band,
        interpolation_checks,
        band_checks,
        record,
        pass,
    })
}
