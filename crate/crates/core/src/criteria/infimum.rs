//! Infima of `lambda -> ||-Laplacian u - lambda u||` over the spectral shift.
//!
//! In a Hilbert norm the objective squared is the quadratic
//! `||u||^2_{2+beta} - 2 lambda ||u||^2_{1+beta} + lambda^2 ||u||^2_beta`, minimized
//! at `lambda0 = ||u||^2_{1+beta} / ||u||^2_beta`. The minimum is evaluated as
//! `sum_m mu^beta (mu - lambda0)^2 w_m` rather than by subtracting the two
//! closed-form terms, which would cancel catastrophically near eigenfunctions.
//!
//! For `L^q` there is no closed form. The objective is the `L^q` norm of an
//! affine family, hence convex, and a golden-section search seeded by the
//! `L^2` minimizer finds the global minimum.

use serde::Serialize;

use super::search::{golden_section, Best};
use crate::error::{Error, Result};
use crate::spectral::{
    lq_norm, neg_laplacian, shifted_laplacian, HalfPower, ModalWeights, SpectralVectorField,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InfimumMethod {
    #[serde(rename = "closed_form_l2")]
    ClosedFormL2,
    #[serde(rename = "closed_form_hbeta")]
    ClosedFormHbeta,
    /// Golden-section search on the convex `L^q` objective.
    #[serde(rename = "ternary_search_lq")]
    SearchLq,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InfimumResult {
    pub lambda0: f64,
    pub value: f64,
    pub method: InfimumMethod,
    pub iterations: usize,
}

/// `inf_lambda ||-Laplacian u - lambda u||_{L^2}`.
pub fn inf_lambda_l2(u: &SpectralVectorField) -> Result<InfimumResult> {
    let weights = ModalWeights::of(u);
    let mut r = hilbert_infimum(&weights, 0.0)?;
    r.method = InfimumMethod::ClosedFormL2;
    Ok(r)
}

/// `inf_lambda ||-Laplacian u - lambda u||_{H^beta dot}`, `0 <= beta < 3/2`.
pub fn inf_lambda_hbeta(u: &SpectralVectorField, beta: f64) -> Result<InfimumResult> {
    if !(0.0..1.5).contains(&beta) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            constraint: "0 <= beta < 3/2",
        });
    }
    hilbert_infimum(&ModalWeights::of(u), beta)
}

pub(crate) fn hilbert_infimum(weights: &ModalWeights, beta: f64) -> Result<InfimumResult> {
    if weights.is_zero() {
        return Err(Error::ZeroField);
    }
    let lambda0 = weights.hs_norm_sq(1.0 + beta) / weights.hs_norm_sq(beta);
    let value = weights.shifted_sq(beta, lambda0).max(0.0).sqrt();
    if !lambda0.is_finite() || !value.is_finite() {
        return Err(Error::NonFinite("infimum"));
    }
    Ok(InfimumResult {
        lambda0,
        value,
        method: InfimumMethod::ClosedFormHbeta,
        iterations: 0,
    })
}

/// Objective `lambda -> ||a - lambda b||_{L^q}` with `a = -Laplacian u` and
/// `b = u` sampled once on the collocation grid.
pub struct LqObjective {
    q: f64,
    pow: HalfPower,
    a: Vec<[f64; 3]>,
    b: Vec<[f64; 3]>,
    h3: f64,
    scale: f64,
}

impl LqObjective {
    pub fn new(u: &SpectralVectorField, q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 1.0 {
            return Err(Error::OutOfRange {
                name: "q",
                value: q,
                constraint: "1 < q < inf",
            });
        }
        let a = interleave(&neg_laplacian(u).to_physical().components().to_vec());
        let b = interleave(&u.to_physical().components().to_vec());
        // Reference magnitude; keeps |.|^q in range for large q.
        let scale = a
            .iter()
            .chain(&b)
            .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        Ok(Self {
            q,
            pow: HalfPower::new(q),
            a,
            b,
            h3: u.grid().spacing().powi(3),
            scale,
        })
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        let s = 1.0 / (self.scale * (1.0 + lambda.abs()));
        let mut sum = 0.0;
        for (a, b) in self.a.iter().zip(&self.b) {
            let d0 = (a[0] - lambda * b[0]) * s;
            let d1 = (a[1] - lambda * b[1]) * s;
            let d2 = (a[2] - lambda * b[2]) * s;
            sum += self.pow.of(d0 * d0 + d1 * d1 + d2 * d2);
        }
        (sum * self.h3).powf(1.0 / self.q) / s
    }
}

fn interleave(comps: &[Vec<f64>]) -> Vec<[f64; 3]> {
    (0..comps[0].len())
        .map(|i| [comps[0][i], comps[1][i], comps[2][i]])
        .collect()
}

const MAX_DOUBLINGS: u32 = 60;

/// `inf_lambda ||-Laplacian u - lambda u||_{L^q}` by golden-section search.
pub fn inf_lambda_lq(u: &SpectralVectorField, q: f64) -> Result<InfimumResult> {
    let seed = inf_lambda_l2(u)?;
    let objective = LqObjective::new(u, q)?;
    let f = |lambda: f64| objective.eval(lambda);

    let grid = u.grid();
    let top = grid.base_frequency() * u.support_radius();
    let mut width = 4.0 * top * top;

    let mut center = seed.lambda0;
    let mut f_center = f(center);
    let mut best = Best::new(center, f_center);
    let mut lo = center - width;
    let mut hi = center + width;
    let mut doublings = 0;
    loop {
        let f_lo = f(lo);
        let f_hi = f(hi);
        best.offer(lo, f_lo);
        best.offer(hi, f_hi);
        if f_lo >= f_center && f_hi >= f_center {
            break;
        }
        if doublings >= MAX_DOUBLINGS {
            return Err(Error::BracketFailure { doublings });
        }
        width *= 2.0;
        if f_lo < f_center {
            hi = center;
            center = lo;
            f_center = f_lo;
            lo = center - width;
        } else {
            lo = center;
            center = hi;
            f_center = f_hi;
            hi = center + width;
        }
        doublings += 1;
    }

    let tol = 1e-8 * seed.lambda0.abs().max(1.0);
    let iterations = golden_section(&f, lo, hi, tol, &mut best);
    if !best.value.is_finite() {
        return Err(Error::NonFinite("L^q objective"));
    }
    Ok(InfimumResult {
        lambda0: best.x,
        value: best.value,
        method: InfimumMethod::SearchLq,
        iterations: iterations + doublings as usize,
    })
}

/// Objective value of a result's own method at shift `lambda`; used for
/// minimizer certificates.
pub fn objective_at(
    u: &SpectralVectorField,
    method: InfimumMethod,
    order: f64,
    lambda: f64,
) -> Result<f64> {
    match method {
        InfimumMethod::ClosedFormL2 => Ok(ModalWeights::of(u).shifted_sq(0.0, lambda).sqrt()),
        InfimumMethod::ClosedFormHbeta => {
            Ok(ModalWeights::of(u).shifted_sq(order, lambda).sqrt())
        }
        InfimumMethod::SearchLq => lq_norm(&shifted_laplacian(u, lambda), order),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn sin_e2(grid: Grid) -> SpectralVectorField {
        // sin(2 pi x1) e2: coefficient -i/2 on k = (1,0,0)
        SpectralVectorField::from_fn(grid, |k| {
            let z = Complex64::new(0.0, 0.0);
            match k {
                [1, 0, 0] => [z, Complex64::new(0.0, -0.5), z],
                [-1, 0, 0] => [z, Complex64::new(0.0, 0.5), z],
                _ => [z; 3],
            }
        })
        .unwrap()
    }

    #[test]
    fn eigenfunction_l2() {
        let u = sin_e2(Grid::unit(8).unwrap());
        let r = inf_lambda_l2(&u).unwrap();
        assert!((r.lambda0 - 4.0 * PI * PI).abs() <= 1e-12 * 4.0 * PI * PI);
        let h2 = crate::spectral::hs_norm(&u, 2.0).unwrap();
        assert!(r.value <= 1e-10 * h2);
        assert_eq!(r.method, InfimumMethod::ClosedFormL2);
    }

    #[test]
    fn zero_field_errors() {
        let u = SpectralVectorField::zeros(Grid::unit(8).unwrap());
        assert!(matches!(inf_lambda_l2(&u), Err(Error::ZeroField)));
        assert!(matches!(inf_lambda_hbeta(&u, 0.5), Err(Error::ZeroField)));
        assert!(matches!(inf_lambda_lq(&u, 3.0), Err(Error::ZeroField)));
    }

    #[test]
    fn beta_range() {
        let u = sin_e2(Grid::unit(8).unwrap());
        assert!(inf_lambda_hbeta(&u, -0.1).is_err());
        assert!(inf_lambda_hbeta(&u, 1.5).is_err());
        assert!(inf_lambda_hbeta(&u, 1.49).is_ok());
    }

    #[test]
    fn eigenfunction_lq3() {
        let u = sin_e2(Grid::unit(8).unwrap());
        let r = inf_lambda_lq(&u, 3.0).unwrap();
        let scale = lq_norm(&neg_laplacian(&u), 3.0).unwrap();
        assert!(r.value <= 1e-9 * scale, "{} vs {}", r.value, scale);
    }
}
