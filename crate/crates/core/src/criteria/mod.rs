//! Closed-form and searched quantities behind the eigenfunction-proximity
//! criteria: infima over the spectral shift, interpolation deficits, band
//! support bounds and the whole-space sharp Sobolev constant.

mod deficit;
mod infimum;
mod integrands;
mod params;
pub mod search;
mod sobolev;

pub use deficit::{band_radii, deficit_factor, BandReport, DeficitReport, DEFAULT_BAND_THRESHOLD};
pub use infimum::{
    inf_lambda_hbeta, inf_lambda_l2, inf_lambda_lq, objective_at, InfimumMethod, InfimumResult,
    LqObjective,
};
pub use integrands::{band_integrand, l2_deficit_integrand, lq_integrand, sobolev_deficit_integrand};
pub use params::{CriterionParams, Selection};
pub use sobolev::sharp_sobolev_constant;
