//! Pseudo-spectral incompressible Navier-Stokes on the periodic 3-torus,
//! instrumented with eigenfunction-proximity regularity diagnostics.

pub mod error;
pub mod criteria;
pub mod initial;
pub mod io;
pub mod solver;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use spectral::{Grid, SpectralVectorField};
