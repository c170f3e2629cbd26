//! Monotone root finding.
//!
//! Every "by continuity and monotonicity there is a unique ..." step in the
//! constructions is realized by bisection on a sign-changing bracket.

use crate::error::{Error, Result};

/// Default width of the final bracket.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Hard cap on halvings; the loop normally ends earlier on width or on
/// floating point exhaustion of the bracket.
const MAX_HALVINGS: usize = 2_000;

/// Bisection for a root of `f` on `[lo, hi]`.
///
/// `f(lo)` and `f(hi)` must have opposite signs or one of them must be zero.
/// Returns the exact endpoint when it is a root, otherwise the midpoint of a
/// bracket of width at most `tol` (or of the narrowest bracket representable
/// in `f64`, whichever comes first).
pub fn bisect_monotone<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(lo <= hi, "empty interval [{lo}, {hi}]");
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = f(hi);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    let lo_negative = f_lo < 0.0;
    let (mut a, mut b) = (lo, hi);
    for _ in 0..MAX_HALVINGS {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == lo_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Root of `f` on `[lo, hi]` nearest to `center`.
///
/// Scans outward from `center` in steps of `step`, alternating sides, and
/// bisects the first sub-interval that shows a sign change. Returns `None`
/// when no sign change exists on the scanned grid.
pub fn nearest_root<F>(mut f: F, center: f64, lo: f64, hi: f64, step: f64, tol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let f_center = f(center);
    if f_center == 0.0 {
        return Some(center);
    }
    let mut prev_right = (center, f_center);
    let mut prev_left = (center, f_center);
    let mut k = 1usize;
    loop {
        let offset = k as f64 * step;
        let right = (center + offset).min(hi);
        let left = (center - offset).max(lo);
        let right_open = prev_right.0 < hi;
        let left_open = prev_left.0 > lo;
        if !right_open && !left_open {
            return None;
        }
        // Candidate brackets on both sides; keep the one whose root is closer.
        let mut found: Option<f64> = None;
        if right_open {
            let fr = f(right);
            if fr == 0.0 || fr.signum() != prev_right.1.signum() {
                let r = bisect_monotone(&mut f, prev_right.0, right, tol).ok()?;
                found = Some(r);
            }
            prev_right = (right, fr);
        }
        if left_open {
            let fl = f(left);
            if fl == 0.0 || fl.signum() != prev_left.1.signum() {
                let r = bisect_monotone(&mut f, left, prev_left.0, tol).ok()?;
                found = match found {
                    Some(other) if (other - center).abs() <= (r - center).abs() => Some(other),
                    _ => Some(r),
                };
            }
            prev_left = (left, fl);
        }
        if found.is_some() {
            return found;
        }
        k += 1;
    }
}
