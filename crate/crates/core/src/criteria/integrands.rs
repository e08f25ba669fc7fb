//! Time integrands of the enstrophy growth bounds. Each bound reads
//! `||grad u(t)||^2 <= ||grad u0||^2 exp(C int_0^t g(tau) dtau)` for its own `g`.

use super::deficit::{deficit_from_weights, BandReport};
use super::params::CriterionParams;
use crate::error::Result;
use crate::spectral::{ModalWeights, SpectralVectorField};

/// `L^2` deficit form: `||-Laplacian u||^{4/3} (1 - ||grad u||^4 / (||u||^2 ||Laplacian u||^2))^{2/3}`.
pub fn l2_deficit_integrand(u: &SpectralVectorField) -> Result<f64> {
    let d = deficit_from_weights(&ModalWeights::of(u), 2.0)?;
    Ok(d.hs_alpha.powf(4.0 / 3.0) * d.deficit.powf(2.0 / 3.0))
}

/// Sobolev deficit form: `||u||^p_alpha (1 - ||u||^4_{alpha-1} / (||u||^2_{alpha-2} ||u||^2_alpha))^{p/2}`.
pub fn sobolev_deficit_integrand(u: &SpectralVectorField, params: &CriterionParams) -> Result<f64> {
    let d = deficit_from_weights(&ModalWeights::of(u), params.alpha)?;
    Ok(d.hs_alpha.powf(params.p) * d.deficit.powf(params.p / 2.0))
}

/// Band form: `||u||^p_alpha (1 - R1^4 / R2^4)^{p/2}`.
pub fn band_integrand(
    u: &SpectralVectorField,
    params: &CriterionParams,
    band: &BandReport,
) -> Result<f64> {
    let hs = ModalWeights::of(u).hs_norm_sq(params.alpha).sqrt();
    Ok(hs.powf(params.p) * band.band_deficit_bound.powf(params.p / 2.0))
}

/// `L^q` form: `(inf_lambda ||-Laplacian u - lambda u||_{L^q})^p`.
pub fn lq_integrand(inf_lq: f64, params: &CriterionParams) -> f64 {
    inf_lq.powf(params.p)
}
