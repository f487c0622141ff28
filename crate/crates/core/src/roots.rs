//! Scalar root finders shared by the eigenvalue and intersection solvers.

use crate::error::{Error, Result};

/// A located root together with the bracket it was refined from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

fn opposite(a: f64, b: f64) -> bool {
    (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)
}

/// Plain bisection until the bracket is narrower than `xtol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if !opposite(flo, fhi) {
        return Err(Error::Bracket(format!("no sign change on [{lo}, {hi}]")));
    }
    let bracket = (lo.min(hi), lo.max(hi));
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            return Ok(Root { x: mid, fx: f(mid), bracket, iterations: it });
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(Root { x: mid, fx: 0.0, bracket, iterations: it });
        }
        if opposite(flo, fmid) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
        if (hi - lo).abs() <= xtol {
            let x = 0.5 * (lo + hi);
            return Ok(Root { x, fx: f(x), bracket, iterations: it });
        }
    }
    Err(Error::Convergence { routine: "bisect", iterations: max_iter })
}

/// Bracketed secant (Illinois variant of regula falsi).
///
/// Stops when successive iterates move by less than `xtol` and `|f| ≤ ftol`,
/// or when the bracket has collapsed to a few ulps.
pub fn illinois<F>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    ftol: f64,
    max_iter: usize,
) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let mut fa = f(a);
    let mut fb = f(b);
    if !opposite(fa, fb) {
        return Err(Error::Bracket(format!("no sign change on [{a}, {b}]")));
    }
    let bracket = (a.min(b), a.max(b));
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, bracket, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: 0.0, bracket, iterations: 0 });
    }
    let mut side = 0i8;
    let mut last = f64::NAN;
    for it in 1..=max_iter {
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !c.is_finite() || c <= a.min(b) || c >= a.max(b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        let step = (c - last).abs();
        last = c;
        if fc == 0.0 {
            return Ok(Root { x: c, fx: 0.0, bracket, iterations: it });
        }
        if opposite(fa, fc) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        let collapsed = (b - a).abs() <= 4.0 * f64::EPSILON * c.abs().max(f64::MIN_POSITIVE);
        if (step <= xtol && fc.abs() <= ftol) || collapsed {
            return Ok(Root { x: c, fx: fc, bracket, iterations: it });
        }
    }
    Err(Error::Convergence { routine: "illinois", iterations: max_iter })
}

/// Unbracketed secant iteration from two starting points.
pub fn secant<F>(mut f: F, mut x0: f64, mut x1: f64, xtol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let mut f0 = f(x0);
    let mut f1 = f(x1);
    for it in 1..=max_iter {
        if f1 == 0.0 {
            return Ok(Root { x: x1, fx: 0.0, bracket: (x1, x1), iterations: it });
        }
        let denom = f1 - f0;
        if denom == 0.0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
        if (x1 - x0).abs() <= xtol {
            return Ok(Root { x: x1, fx: f1, bracket: (x0.min(x1), x0.max(x1)), iterations: it });
        }
    }
    Err(Error::Convergence { routine: "secant", iterations: max_iter })
}
