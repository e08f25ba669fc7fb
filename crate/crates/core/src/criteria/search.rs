//! Golden-section minimization of a convex function of one variable.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

#[derive(Clone, Copy, Debug)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Tracks the best point seen so callers can seed candidates (for example a
/// closed-form guess) that the shrinking bracket may never revisit.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Best {
    pub x: f64,
    pub value: f64,
}

impl Best {
    pub fn new(x: f64, value: f64) -> Self {
        Self { x, value }
    }

    pub fn offer(&mut self, x: f64, value: f64) {
        if value < self.value {
            self.x = x;
            self.value = value;
        }
    }
}

/// Golden-section search on `[lo, hi]` until the bracket is no wider than
/// `tol`. `best` collects every evaluation.
pub(crate) fn golden_section<F>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    best: &mut Best,
) -> usize
where
    F: Fn(f64) -> f64,
{
    let mut evaluations = 0;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    evaluations += 2;
    best.offer(x1, f1);
    best.offer(x2, f2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            best.offer(x1, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            best.offer(x2, f2);
        }
        evaluations += 1;
        if evaluations > 10_000 {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    best.offer(mid, f(mid));
    evaluations + 1
}

/// Convenience wrapper over [`golden_section`] for a plain bracket.
pub fn minimize_bracket<F>(f: F, lo: f64, hi: f64, tol: f64) -> Minimum
where
    F: Fn(f64) -> f64,
{
    let mid = 0.5 * (lo + hi);
    let mut best = Best::new(mid, f(mid));
    let evaluations = golden_section(&f, lo, hi, tol, &mut best) + 1;
    Minimum {
        x: best.x,
        value: best.value,
        evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        // An offset minimum only locates x to ~sqrt(eps); keep it at zero.
        let m = minimize_bracket(|x| (x - 0.2) * (x - 0.2), -1.0, 1.0, 1e-10);
        assert!((m.x - 0.2).abs() < 1e-9);
        assert!(m.value < 1e-18);
        let shifted = minimize_bracket(|x| (x - 0.2) * (x - 0.2) + 1.0, -1.0, 1.0, 1e-10);
        assert!((shifted.x - 0.2).abs() < 1e-7);
    }

    #[test]
    fn v_shape_at_edge() {
        let m = minimize_bracket(|x| (x - 0.999).abs(), -1.0, 1.0, 1e-12);
        assert!((m.x - 0.999).abs() < 1e-11);
    }
}
