//! Periodic-box spectral fields: lattice, transforms, Leray projection and
//! the `L^q` / homogeneous Sobolev norms.

pub mod checkpoint;
pub mod fft;
mod field;
mod grid;
mod ops;

pub(crate) use field::HalfPower;
pub use field::{PhysicalField, SpectralVectorField, Triple};
pub use grid::{norm_sq, Grid, Wavevectors};
pub use ops::{dilate, hs_norm, leray_project, lq_norm, neg_laplacian, shifted_laplacian, ModalWeights};
