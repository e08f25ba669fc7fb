//! `diagnostics.csv`: one row per output instant.
//!
//! Column order is fixed: the [`BASE_COLUMNS`], then for every criterion the
//! [`CRITERION_COLUMNS`] prefixed by its label (`q2_inf_lq`, ...), followed
//! for `alpha` criteria by the [`ALPHA_COLUMNS`]. Floats are written with 17
//! significant digits so every value round-trips exactly.

use crate::error::{Error, Result};
use crate::solver::{CriterionSample, DiagnosticRecord};

pub const BASE_COLUMNS: [&str; 19] = [
    "step",
    "t",
    "energy",
    "enstrophy",
    "palinstrophy_sq",
    "lambda0",
    "inf_l2",
    "l2_deficit_integrand",
    "r1",
    "r2",
    "band_deficit_bound",
    "enstrophy_rate",
    "enstrophy_rate_lambda_zero",
    "lambda_independence",
    "enstrophy_rate_fd",
    "growth_identity_residual",
    "energy_residual",
    "max_speed",
    "divergence_defect",
];

pub const CRITERION_COLUMNS: [&str; 6] = [
    "inf_lq",
    "lambda_lq",
    "u_la",
    "grad_lb",
    "holder_bound",
    "integrand",
];

pub const ALPHA_COLUMNS: [&str; 3] = ["deficit", "deficit_ratio", "band_integrand"];

/// Header for records carrying `criteria`.
pub fn columns(criteria: &[CriterionSample]) -> Vec<String> {
    let mut out: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    for c in criteria {
        out.extend(CRITERION_COLUMNS.iter().map(|s| format!("{}_{s}", c.label)));
        if c.deficit.is_some() {
            out.extend(ALPHA_COLUMNS.iter().map(|s| format!("{}_{s}", c.label)));
        }
    }
    out
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(r: &DiagnosticRecord) -> Vec<String> {
    let mut out = vec![r.step.to_string()];
    out.extend(
        [
            r.t,
            r.energy,
            r.enstrophy,
            r.palinstrophy_sq,
            r.lambda0,
            r.inf_l2,
            r.l2_deficit_integrand,
            r.r1,
            r.r2,
            r.band_deficit_bound,
            r.enstrophy_rate,
            r.enstrophy_rate_lambda_zero,
            r.lambda_independence,
            r.enstrophy_rate_fd,
            r.growth_identity_residual,
            r.energy_residual,
            r.max_speed,
            r.divergence_defect,
        ]
        .map(real),
    );
    for c in &r.criteria {
        out.extend(
            [
                c.inf_lq,
                c.lambda_lq,
                c.u_la,
                c.grad_lb,
                c.holder_bound,
                c.integrand,
            ]
            .map(real),
        );
        if let Some(d) = &c.deficit {
            out.push(real(d.deficit));
            out.push(real(d.ratio));
            out.push(real(c.band_integrand.unwrap_or(f64::NAN)));
        }
    }
    out
}

/// Render records as CSV text.
pub fn write_csv(records: &[DiagnosticRecord]) -> Result<String> {
    let header = records.first().map_or_else(|| columns(&[]), |r| columns(&r.criteria));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(csv_error)?;
    for r in records {
        w.write_record(row(r)).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Format(format!("CSV: {e}"))
}

/// Parsed `diagnostics.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn get(&self, row: usize, name: &str) -> Option<f64> {
        Some(self.rows.get(row)?[self.column(name)?])
    }
}

/// Parse CSV text written by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Table> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(csv_error)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        let values = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::Format(format!("CSV row {}: {s:?} is not a number", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(values);
    }
    Ok(Table { header, rows })
}
