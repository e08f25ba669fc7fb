//! Configuration, command implementations and artifact emission.

pub mod config;
mod diagnose;
mod run;
pub mod table;

use std::path::Path;

pub use config::{load_config, load_field_spec, parse_config, parse_field_spec, FieldSpec, RunConfig};
pub use diagnose::{
    diagnose, BandCheck, DiagnoseReport, HbetaInfimum, InterpolationCheck, CHECK_ALPHAS,
    CHECK_SLACK,
};
pub use run::{
    checkpoint_name, run, version, Flags, GrowthSummary, Metrics, RunOutcome, Summary,
    DIVERGENCE_TOLERANCE, LAMBDA_INDEPENDENCE_TOLERANCE,
};

use crate::error::Result;
use crate::initial::generate;
use crate::spectral::{checkpoint, SpectralVectorField};

/// Generate the field described by `spec` and save it to `out`.
pub fn gen_ic(spec: &FieldSpec, out: &Path) -> Result<SpectralVectorField> {
    let u = generate(spec.grid()?, &spec.initial_data)?;
    checkpoint::save(out, &u)?;
    Ok(u)
}
