use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("field is identically zero")]
    ZeroField,

    #[error("{name} = {value} is out of range: {constraint}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("could not bracket the minimum after {doublings} doublings")]
    BracketFailure { doublings: u32 },

    #[error("polarization is not transverse to k0 (k0 . pol = {dot})")]
    NotTransverse { dot: f64 },

    #[error("no lattice points in the band {r1} <= |k|/L <= {r2}")]
    EmptyBand { r1: f64, r2: f64 },

    #[error("CFL violation at t = {t}: max|u| dt / h = {cfl} > {limit}")]
    CflViolation { t: f64, cfl: f64, limit: f64 },

    #[error("integration blew up (non-finite state) at t = {t}")]
    IntegrationBlowup { t: f64 },

    #[error("malformed field file: {0}")]
    Format(String),

    #[error("configuration: {0}")]
    Config(#[from] crate::io::config::ConfigError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
