//! Exponent bookkeeping for the shifted-Laplacian growth criteria.
//!
//! A criterion is selected either by the Lebesgue exponent `q` or by the
//! Sobolev order `alpha`; everything else follows from the scaling relations
//!
//! ```text
//! 2/p + 3/q = 3           alpha = 1/2 + 2/p      beta = s = alpha - 2 = 3/2 - 3/q
//! 1/a = 5/18 - 1/(3q)     1/b = 13/18 - 2/(3q)   1/a + 1/b + 1/q = 1
//! 1/p + 1/r = 1           2/r = 3/q - 1
//! ```
//!
//! All relations are solved and checked in exact rational arithmetic; the
//! `f64` fields are conversions of the rational reciprocals.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

type Q = Ratio<i64>;

fn rat(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn to_f64(r: Q) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn recip_f64(r: Q) -> f64 {
    if *r.numer() == 0 {
        f64::INFINITY
    } else {
        to_f64(r.recip())
    }
}

/// How a criterion was requested.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Q,
    Alpha,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionParams {
    pub selection: Selection,
    pub q: f64,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
    pub a: f64,
    pub b: f64,
    /// Hoelder conjugate of `p`; infinite when `p = 1`.
    pub r: f64,
    /// `q = 3` is handled by the `L^3 . L^6 . L^2` chain, which is the
    /// `a = 6, b = 2` member of the general family.
    pub dedicated_q3_chain: bool,
    #[serde(skip)]
    inv_q: Q,
    #[serde(skip)]
    inv_p: Q,
}

/// Exact rational from a decimal input such as `2.25` or `1.3`.
fn rational_input(name: &'static str, value: f64, constraint: &'static str) -> Result<Q> {
    let out_of_range = || Error::OutOfRange {
        name,
        value,
        constraint,
    };
    if !value.is_finite() {
        return Err(out_of_range());
    }
    let r = Q::approximate_float(value).ok_or_else(out_of_range)?;
    // Continued fractions may settle on a nearby rational; insist on a
    // faithful representation.
    if (to_f64(r) - value).abs() > 1e-12 * value.abs().max(1.0) || *r.denom() > 1_000_000 {
        return Err(out_of_range());
    }
    Ok(r)
}

const Q_RANGE: &str = "6/5 < q <= 3";
const ALPHA_RANGE: &str = "2 <= alpha <= 5/2";

impl CriterionParams {
    /// Parameters of the `L^q` criterion, `6/5 < q <= 3`.
    pub fn from_q(q: f64) -> Result<Self> {
        let qr = rational_input("q", q, Q_RANGE)?;
        if qr <= rat(6, 5) || qr > rat(3, 1) {
            return Err(Error::OutOfRange {
                name: "q",
                value: q,
                constraint: Q_RANGE,
            });
        }
        Ok(Self::build(Selection::Q, qr.recip()))
    }

    /// Parameters of the `H^alpha dot` deficit criterion, `2 <= alpha <= 5/2`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        let ar = rational_input("alpha", alpha, ALPHA_RANGE)?;
        if ar < rat(2, 1) || ar > rat(5, 2) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                constraint: ALPHA_RANGE,
            });
        }
        // 3/q = 7/2 - alpha
        let inv_q = (rat(7, 2) - ar) / rat(3, 1);
        Ok(Self::build(Selection::Alpha, inv_q))
    }

    fn build(selection: Selection, inv_q: Q) -> Self {
        let one = rat(1, 1);
        // 2/p = 3 - 3/q
        let inv_p = (rat(3, 1) - inv_q * 3) / 2;
        let alpha = rat(1, 2) + inv_p * 2;
        let beta = alpha - 2;
        let s = rat(3, 2) - inv_q * 3;
        let inv_a = rat(5, 18) - inv_q / 3;
        let inv_b = rat(13, 18) - inv_q * 2 / 3;
        let inv_r = one - inv_p;

        debug_assert_eq!(inv_p * 2 + inv_q * 3, rat(3, 1));
        debug_assert_eq!(inv_a + inv_b + inv_q, one);
        debug_assert_eq!(inv_r * 2, inv_q * 3 - 1);
        debug_assert_eq!(beta, s);

        Self {
            selection,
            q: recip_f64(inv_q),
            p: recip_f64(inv_p),
            alpha: to_f64(alpha),
            beta: to_f64(beta),
            s: to_f64(s),
            a: recip_f64(inv_a),
            b: recip_f64(inv_b),
            r: recip_f64(inv_r),
            dedicated_q3_chain: inv_q == rat(1, 3),
            inv_q,
            inv_p,
        }
    }

    /// True when the Sobolev order lies in the deficit-criterion range.
    pub fn has_deficit_form(&self) -> bool {
        let alpha = rat(1, 2) + self.inv_p * 2;
        alpha >= rat(2, 1) && alpha <= rat(5, 2)
    }

    /// Exact check of every scaling relation.
    pub fn relations_hold(&self) -> bool {
        let one = rat(1, 1);
        let inv_a = rat(5, 18) - self.inv_q / 3;
        let inv_b = rat(13, 18) - self.inv_q * 2 / 3;
        let inv_r = one - self.inv_p;
        self.inv_p * 2 + self.inv_q * 3 == rat(3, 1)
            && inv_a + inv_b + self.inv_q == one
            && inv_r * 2 == self.inv_q * 3 - 1
            && self.inv_p + inv_r == one
    }

    /// Short label used for output columns, e.g. `q2` or `alpha2.25`.
    pub fn label(&self) -> String {
        match self.selection {
            Selection::Q => format!("q{}", self.q),
            Selection::Alpha => format!("alpha{}", self.alpha),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q3_uses_l3_l6_l2_chain() {
        let p = CriterionParams::from_q(3.0).unwrap();
        assert_eq!(p.p, 1.0);
        assert_eq!(p.a, 6.0);
        assert_eq!(p.b, 2.0);
        assert!(p.r.is_infinite());
        assert_eq!(p.alpha, 2.5);
        assert!(p.dedicated_q3_chain);
        assert!(p.relations_hold());
    }

    #[test]
    fn q2_matches_four_thirds() {
        let p = CriterionParams::from_q(2.0).unwrap();
        assert!((p.p - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.alpha, 2.0);
        assert_eq!(p.beta, 0.0);
        assert_eq!(p.a, 9.0);
        assert!((p.b - 18.0 / 7.0).abs() < 1e-15);
        assert_eq!(p.r, 4.0);
    }

    #[test]
    fn alpha_five_halves_gives_q3_p1() {
        let p = CriterionParams::from_alpha(2.5).unwrap();
        assert_eq!(p.q, 3.0);
        assert_eq!(p.p, 1.0);
        assert_eq!(p.selection, Selection::Alpha);
    }

    #[test]
    fn ranges_enforced() {
        assert!(CriterionParams::from_q(1.1).is_err());
        assert!(CriterionParams::from_q(1.2).is_err());
        assert!(CriterionParams::from_q(3.01).is_err());
        assert!(CriterionParams::from_q(f64::NAN).is_err());
        assert!(CriterionParams::from_alpha(1.99).is_err());
        assert!(CriterionParams::from_alpha(2.6).is_err());
        let e = CriterionParams::from_q(1.1).unwrap_err().to_string();
        assert!(e.contains("6/5 < q <= 3"), "{e}");
    }

    #[test]
    fn intermediate_q_relations() {
        for q in [1.25, 1.5, 2.0, 2.4, 2.5, 2.75, 3.0] {
            let p = CriterionParams::from_q(q).unwrap();
            assert!(p.relations_hold(), "q={q}");
            assert!((2.0 / p.p + 3.0 / p.q - 3.0).abs() < 1e-14);
            assert!((1.0 / p.a + 1.0 / p.b + 1.0 / p.q - 1.0).abs() < 1e-14);
            assert!(p.a >= 6.0 && p.b > 2.0 - 1e-12 && p.b < 6.0);
        }
    }
}
