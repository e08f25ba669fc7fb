use serde::Serialize;

use super::diagnostics::DiagnosticRecord;

/// Stand-in for an unknown constant of a growth bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantChoice {
    Fixed(f64),
    /// Ten times the largest pointwise ratio observed along the run.
    Auto,
}

pub const AUTO_MARGIN: f64 = 10.0;

/// Which integrand a series accumulates.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrandKind {
    /// `||-Laplacian u||^{4/3} (L^2 deficit)^{2/3}`
    L2Deficit,
    /// The criterion's own integrand (index into `DiagnosticRecord::criteria`).
    Criterion(usize),
    /// Band form of an `alpha` criterion.
    Band(usize),
}

/// Growth bound `||grad u(t)||^2 <= ||grad u0||^2 exp(c int_0^t g)` along a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthSeries {
    pub label: String,
    pub kind: IntegrandKind,
    pub c_assumed: f64,
    /// Largest `max(0, d/dt ||grad u||^2 upper estimate) / (g ||grad u||^2)`.
    pub max_ratio: f64,
    pub integrand: Vec<f64>,
    /// Running trapezoid integral of the integrand.
    pub accumulator: Vec<f64>,
    pub rhs: Vec<f64>,
    /// `||grad u(t)||^2 <= rhs(t)` at every record.
    pub holds: bool,
}

fn series_for(
    records: &[DiagnosticRecord],
    label: String,
    kind: IntegrandKind,
    choice: ConstantChoice,
) -> GrowthSeries {
    let g: Vec<f64> = records
        .iter()
        .map(|r| match kind {
            IntegrandKind::L2Deficit => r.l2_deficit_integrand,
            IntegrandKind::Criterion(i) => r.criteria[i].integrand,
            IntegrandKind::Band(i) => r.criteria[i].band_integrand.unwrap_or(0.0),
        })
        .collect();
    // Upper estimate of d/dt ||grad u||^2: the constant-free Hoelder bound for
    // the L^q criteria, the exact Galerkin rate otherwise.
    let upper: Vec<f64> = records
        .iter()
        .map(|r| match kind {
            IntegrandKind::Criterion(i) if r.criteria[i].deficit.is_none() => {
                2.0 * r.criteria[i].holder_bound
            }
            _ => 2.0 * r.enstrophy_rate,
        })
        .collect();
    let max_ratio = records
        .iter()
        .zip(g.iter().zip(&upper))
        .map(|(r, (&gi, &ui))| {
            let grad_sq = 2.0 * r.enstrophy;
            if ui <= 0.0 {
                0.0
            } else if gi * grad_sq > 0.0 {
                ui / (gi * grad_sq)
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max);
    let c = match choice {
        ConstantChoice::Fixed(c) => c,
        ConstantChoice::Auto => AUTO_MARGIN * max_ratio,
    };

    let mut accumulator = Vec::with_capacity(records.len());
    let mut acc = 0.0;
    for i in 0..records.len() {
        if i > 0 {
            acc += 0.5 * (records[i].t - records[i - 1].t) * (g[i] + g[i - 1]);
        }
        accumulator.push(acc);
    }
    let grad0 = records.first().map_or(0.0, |r| 2.0 * r.enstrophy);
    let rhs: Vec<f64> = accumulator.iter().map(|a| grad0 * (c * a).exp()).collect();
    let holds = records
        .iter()
        .zip(&rhs)
        .all(|(r, &b)| 2.0 * r.enstrophy <= b * (1.0 + 1e-12));
    GrowthSeries {
        label,
        kind,
        c_assumed: c,
        max_ratio,
        integrand: g,
        accumulator,
        rhs,
        holds,
    }
}

/// Accumulate every growth bound available in the records. `choices` gives
/// the constant per criterion (same order as `records[..].criteria`); the
/// `L^2` deficit and band series use `default_choice`.
pub fn track_growth_bounds(
    records: &[DiagnosticRecord],
    choices: &[ConstantChoice],
    default_choice: ConstantChoice,
) -> Vec<GrowthSeries> {
    let mut out = Vec::new();
    if records.is_empty() {
        return out;
    }
    out.push(series_for(
        records,
        "l2_deficit".into(),
        IntegrandKind::L2Deficit,
        default_choice,
    ));
    for (i, sample) in records[0].criteria.iter().enumerate() {
        let choice = choices.get(i).copied().unwrap_or(default_choice);
        out.push(series_for(
            records,
            sample.label.clone(),
            IntegrandKind::Criterion(i),
            choice,
        ));
        if sample.band_integrand.is_some() {
            out.push(series_for(
                records,
                format!("band_{}", sample.label),
                IntegrandKind::Band(i),
                default_choice,
            ));
        }
    }
    out
}
