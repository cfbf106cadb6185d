//! Scalar root finding shared by the analytic gas-dynamics relations.

pub(crate) const RESIDUAL_TOL: f64 = 1e-13;
pub(crate) const MAX_ITER: usize = 200;

/// Root of `f` in `[lo, hi]` given a sign change: bisection until the bracket
/// is narrow, then safeguarded Newton polish with a central-difference slope.
/// Returns `None` when the endpoints do not bracket a root.
pub(crate) fn bracketed_root<F>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut flo = f(lo);
    let fhi = f(hi);
    if !flo.is_finite() || !fhi.is_finite() {
        return None;
    }
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }

    let width0 = hi - lo;
    let mut best = (f64::INFINITY, 0.5 * (lo + hi));
    let mut iter = 0;

    // Bisection phase.
    while iter < max_iter && hi - lo > 1e-6 * width0 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        iter += 1;
        if fm.abs() < best.0 {
            best = (fm.abs(), mid);
        }
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }

    // Newton polish, falling back to bisection whenever a step leaves the bracket.
    let mut x = 0.5 * (lo + hi);
    while iter < max_iter {
        let fx = f(x);
        iter += 1;
        if fx.abs() < best.0 {
            best = (fx.abs(), x);
        }
        if fx.abs() <= tol || hi - lo <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            break;
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let dx = (1e-7 * (hi - lo)).max(f64::EPSILON * x.abs().max(1.0) * 16.0);
        let slope = (f(x + dx) - f(x - dx)) / (2.0 * dx);
        let newton = x - fx / slope;
        x = if slope.is_finite() && slope != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Some(best.1)
}
