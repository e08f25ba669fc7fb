//! Browser bindings: generate a field, advance it, read diagnostics and a
//! speed slice for drawing. [`Session`] holds the logic and is usable natively;
//! [`Demo`] wraps it for JavaScript.

use std::f64::consts::TAU;

use nsprox::criteria::{CriterionParams, DEFAULT_BAND_THRESHOLD};
use nsprox::initial::{abc_flow, random_band, taylor_green};
use nsprox::solver::{evaluate, DiagnosticRecord, Stepper, CFL_LIMIT};
use nsprox::{Error, Grid, Result, SpectralVectorField};
use wasm_bindgen::prelude::*;

/// Fraction of the CFL limit used when choosing a step.
const CFL_TARGET: f64 = 0.5;
const VISCOSITY: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    TaylorGreen,
    Abc,
    RandomBand,
}

impl Kind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "taylor_green" => Some(Self::TaylorGreen),
            "abc" => Some(Self::Abc),
            "random_band" => Some(Self::RandomBand),
            _ => None,
        }
    }
}

pub struct Session {
    u: SpectralVectorField,
    t: f64,
    steps: usize,
    criteria: Vec<CriterionParams>,
}

impl Session {
    /// Initial field of `kind` on the `2 pi` box.
    pub fn new(kind: Kind, n: usize, amplitude: f64, seed: u64) -> Result<Self> {
        let grid = Grid::new(n, TAU)?;
        let u = match kind {
            Kind::TaylorGreen => taylor_green(grid, amplitude)?,
            Kind::Abc => abc_flow(grid, amplitude, 0.7 * amplitude, 0.4 * amplitude)?,
            Kind::RandomBand => {
                let top = n as f64 / 3.0;
                random_band(grid, 1.0 / TAU, top / TAU, -5.0 / 3.0, amplitude, seed)?
            }
        };
        Ok(Self {
            u,
            t: 0.0,
            steps: 0,
            criteria: vec![CriterionParams::from_q(3.0)?],
        })
    }

    pub fn field(&self) -> &SpectralVectorField {
        &self.u
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Step size at half the CFL limit for the current peak speed.
    pub fn stable_dt(&self) -> f64 {
        let speed = self.u.to_physical().max_magnitude();
        let h = self.u.grid().spacing();
        if speed == 0.0 {
            1e-2
        } else {
            (CFL_TARGET * CFL_LIMIT * h / speed).min(1e-2)
        }
    }

    /// Advance `count` steps with a step size fixed for the batch.
    pub fn advance(&mut self, count: usize) -> Result<()> {
        let dt = self.stable_dt();
        let stepper = Stepper::new(*self.u.grid(), dt, VISCOSITY)?;
        for _ in 0..count {
            self.u = stepper.step(&self.u, self.t)?.field;
            self.t += dt;
            self.steps += 1;
        }
        Ok(())
    }

    pub fn diagnostics(&self) -> Result<DiagnosticRecord> {
        evaluate(&self.u, self.steps, self.t, VISCOSITY, &self.criteria, DEFAULT_BAND_THRESHOLD)
    }

    /// `|u|` on the plane `x_0 = 0`, row-major `n x n`.
    pub fn speed_slice(&self) -> Vec<f32> {
        let n = self.u.grid().n();
        let phys = self.u.to_physical();
        let c = phys.components();
        (0..n * n)
            .map(|i| (c[0][i] * c[0][i] + c[1][i] * c[1][i] + c[2][i] * c[2][i]).sqrt() as f32)
            .collect()
    }
}

fn js_error(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Demo(Session);

#[wasm_bindgen]
impl Demo {
    /// `kind` is `taylor_green`, `abc` or `random_band`.
    #[wasm_bindgen(constructor)]
    pub fn new(kind: &str, n: usize, amplitude: f64, seed: u32) -> std::result::Result<Demo, JsError> {
        let kind = Kind::parse(kind).ok_or_else(|| JsError::new(&format!("unknown field kind '{kind}'")))?;
        Session::new(kind, n, amplitude, seed.into()).map(Demo).map_err(js_error)
    }

    pub fn n(&self) -> usize {
        self.0.field().grid().n()
    }

    pub fn time(&self) -> f64 {
        self.0.time()
    }

    /// Advance `count` steps and return the new diagnostics as JSON.
    pub fn step(&mut self, count: usize) -> std::result::Result<String, JsError> {
        self.0.advance(count).map_err(js_error)?;
        self.diagnostics()
    }

    pub fn diagnostics(&self) -> std::result::Result<String, JsError> {
        let record = self.0.diagnostics().map_err(js_error)?;
        serde_json::to_string(&record).map_err(|e| JsError::new(&e.to_string()))
    }

    /// Speed magnitude on one plane for drawing.
    pub fn slice(&self) -> Vec<f32> {
        self.0.speed_slice()
    }
}
