//! Experiments around the ball/shell comparison: λ₁ sweeps over α, crossing
//! detection for volume-matched pairs, and the small-ε intersection analysis
//! between Neumann–Robin annuli and the disk of the same area.

use crate::error::{Error, Result};
use crate::geometry::match_shell_to_ball;
use crate::roots::{bisect, illinois, secant};
use crate::secular::{solve_lambda1, SecularProblem};
use crate::specfun::{bessel_i, scaled_i, scaled_k, BesselOrder};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::SQRT_2;

/// Relative slack allowed when checking `λ₁ ≤ α|∂Ω|/|Ω|` on solver output.
const BOUND_SLACK: f64 = 1e-9;

/// One α of a two-column sweep. Failed solves leave their column empty and
/// record the message in `error`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub lambda_ball: Option<f64>,
    pub lambda_partner: Option<f64>,
    /// `lambda_partner − lambda_ball`
    pub difference: Option<f64>,
    /// Both available values satisfy the variational bound.
    pub bound_ok: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    /// Sorted by α descending.
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Indices `i` such that the difference changes sign between rows `i` and `i+1`.
    pub fn sign_changes(&self) -> Vec<usize> {
        self.rows
            .windows(2)
            .enumerate()
            .filter_map(|(i, w)| match (w[0].difference, w[1].difference) {
                (Some(a), Some(b)) if (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0) => Some(i),
                _ => None,
            })
            .collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

fn solve_checked(p: &SecularProblem, alpha: f64) -> Result<f64> {
    let q = p.with_alpha(alpha)?;
    let lambda = solve_lambda1(&q)?.lambda1;
    Ok(lambda)
}

fn within_bound(p: &SecularProblem, alpha: f64, lambda: f64) -> bool {
    let bound = alpha * p.surface_to_volume();
    lambda <= bound + BOUND_SLACK * bound.abs().max(f64::MIN_POSITIVE)
}

fn sweep_row(ball: &SecularProblem, partner: &SecularProblem, alpha: f64) -> SweepRow {
    let a = solve_checked(ball, alpha);
    let b = solve_checked(partner, alpha);
    let bound_ok = a.as_ref().map_or(true, |&l| within_bound(ball, alpha, l))
        && b.as_ref().map_or(true, |&l| within_bound(partner, alpha, l));
    let error = match (&a, &b) {
        (Err(e), _) => Some(format!("ball: {e}")),
        (_, Err(e)) => Some(format!("partner: {e}")),
        _ => None,
    };
    let (lambda_ball, lambda_partner) = (a.ok(), b.ok());
    let difference = lambda_ball.zip(lambda_partner).map(|(x, y)| y - x);
    SweepRow { alpha, lambda_ball, lambda_partner, difference, bound_ok, error }
}

/// Solve both problems at every α of the grid, in parallel. The α of each
/// template problem is ignored. Output rows are sorted by α descending, so the
/// table does not depend on the order of `alpha_grid`.
pub fn sweep(ball: &SecularProblem, partner: &SecularProblem, alpha_grid: &[f64]) -> Result<SweepTable> {
    if let Some(bad) = alpha_grid.iter().find(|a| !(a.is_finite() && **a <= 0.0)) {
        return Err(Error::domain(format!("alpha grid must be finite and <= 0, found {bad}")));
    }
    let mut grid = alpha_grid.to_vec();
    grid.sort_by(|a, b| b.total_cmp(a));
    let rows = grid.par_iter().map(|&alpha| sweep_row(ball, partner, alpha)).collect();
    Ok(SweepTable { rows })
}

/// `n ≥ 2` equally spaced values from `hi` down to `lo`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| hi + (lo - hi) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingReport {
    /// Crossing closest to zero, bisected to `|Δα| ≤ 1e−8`.
    pub alpha_cross: Option<f64>,
    pub bracket: Option<(f64, f64)>,
    /// Number of sign changes of the difference seen on the samples.
    pub sign_changes: usize,
    pub samples: SweepTable,
    pub certified: bool,
}

/// Tolerance on α for crossing bisection.
pub const CROSSING_TOLERANCE: f64 = 1e-8;

/// Look for a sign change of `λ₁(shell) − λ₁(ball)` on `[lo, hi]` for the ball of
/// radius `r_ball` and the shell of equal volume with inner radius `r1`.
pub fn find_crossing(
    d: u32,
    r_ball: f64,
    r1: f64,
    alpha_range: (f64, f64),
    samples: usize,
) -> Result<CrossingReport> {
    let (lo, hi) = (alpha_range.0.min(alpha_range.1), alpha_range.0.max(alpha_range.1));
    if !(hi < 0.0) || !lo.is_finite() {
        return Err(Error::domain(format!("alpha range must lie in (-inf, 0), got [{lo}, {hi}]")));
    }
    let shell = match_shell_to_ball(d, r_ball, r1)?;
    let partner = SecularProblem::robin_shell(d, shell.r1(), shell.r2(), hi)?;
    let ball = SecularProblem::ball(d, r_ball, hi)?;
    let table = sweep(&ball, &partner, &linear_grid(lo, hi, samples))?;
    let changes = table.sign_changes();
    let Some(&first) = changes.first() else {
        return Ok(CrossingReport {
            alpha_cross: None,
            bracket: None,
            sign_changes: 0,
            samples: table,
            certified: false,
        });
    };
    let (a_hi, a_lo) = (table.rows[first].alpha, table.rows[first + 1].alpha);
    let mut failure = None;
    let diff = |alpha: f64| match solve_checked(&partner, alpha).and_then(|s| Ok(s - solve_checked(&ball, alpha)?)) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let root = bisect(diff, a_lo, a_hi, CROSSING_TOLERANCE, 200);
    if let Some(e) = failure {
        return Err(e);
    }
    let root = root?;
    Ok(CrossingReport {
        alpha_cross: Some(root.x),
        bracket: Some((a_lo, a_hi)),
        sign_changes: changes.len(),
        samples: table,
        certified: true,
    })
}

/// `a₀(y) = (−y I₀²(y) + I₀(y)I₁(y) + y[1 + I₁²(y)]) / (√2 y)`.
pub fn a0(y: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("a0 needs finite y > 0, got {y}")));
    }
    let i0 = bessel_i(BesselOrder::ZERO, y)?;
    let i1 = bessel_i(BesselOrder::ONE, y)?;
    // y(I₁² − I₀²) written as a product to soften the cancellation
    let core = y * (i1 - i0) * (i1 + i0) + i0 * i1 + y;
    Ok(core / (SQRT_2 * y))
}

/// Interval on which the zero of `a₀` is certified unique.
pub const Y0_SCAN: (f64, f64) = (1e-3, 50.0);
const Y0_SAMPLES: usize = 5000;

fn a0_value(y: f64) -> f64 {
    a0(y).unwrap_or(f64::NAN)
}

/// Brackets of sign changes of `a₀` on [`Y0_SCAN`].
pub fn a0_sign_changes() -> Vec<(f64, f64)> {
    let (lo, hi) = Y0_SCAN;
    let step = (hi - lo) / Y0_SAMPLES as f64;
    let mut out = Vec::new();
    let mut prev = (lo, a0_value(lo));
    for i in 1..=Y0_SAMPLES {
        let y = lo + step * i as f64;
        let v = a0_value(y);
        if (prev.1 < 0.0 && v > 0.0) || (prev.1 > 0.0 && v < 0.0) || v == 0.0 {
            out.push((prev.0, y));
        }
        prev = (y, v);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    Bisection,
    Secant,
}

fn unique_y0_bracket() -> Result<(f64, f64)> {
    match a0_sign_changes().as_slice() {
        [one] => Ok(*one),
        other => Err(Error::Bracket(format!(
            "a0 must change sign exactly once on ({}, {}), found {}",
            Y0_SCAN.0,
            Y0_SCAN.1,
            other.len()
        ))),
    }
}

/// Zero of `a₀` by one method only.
pub fn find_y0_by(method: RootMethod) -> Result<f64> {
    let (lo, hi) = unique_y0_bracket()?;
    let root = match method {
        RootMethod::Bisection => bisect(a0_value, lo, hi, 1e-15, 200)?,
        RootMethod::Secant => secant(a0_value, lo, hi, 1e-15, 100)?,
    };
    if !(lo..=hi).contains(&root.x) {
        return Err(Error::Convergence { routine: "find_y0", iterations: root.iterations });
    }
    Ok(root.x)
}

/// The unique positive zero `y₀` of `a₀`, bisected and cross-checked by secant to 1e−10.
pub fn find_y0() -> Result<f64> {
    let by_bisection = find_y0_by(RootMethod::Bisection)?;
    let by_secant = find_y0_by(RootMethod::Secant)?;
    if (by_bisection - by_secant).abs() > 1e-10 {
        return Err(Error::Convergence { routine: "find_y0", iterations: 0 });
    }
    let residual = a0(by_bisection)?.abs();
    if residual > 1e-12 {
        return Err(Error::Convergence { routine: "find_y0", iterations: 0 });
    }
    Ok(by_bisection)
}

/// Limit `−y₀I₁(y₀)/(r₃I₀(y₀))` of the intersection α as `ε → 0`.
pub fn alpha_limit(y0: f64, r3: f64) -> Result<f64> {
    if !(r3 > 0.0) {
        return Err(Error::domain(format!("r3 must be positive, got {r3}")));
    }
    Ok(-y0 * bessel_i(BesselOrder::ONE, y0)? / (r3 * bessel_i(BesselOrder::ZERO, y0)?))
}

/// Radii `(√(2εr₃ + ε²), r₃ + ε)` of the annulus with the area of the disk of radius `r₃`.
pub fn annulus_radii(epsilon: f64, r3: f64) -> (f64, f64) {
    ((epsilon * (2.0 * r3 + epsilon)).sqrt(), r3 + epsilon)
}

/// `F(ε, k, r₃)` divided by the positive factor `e^{k(r₂ − r₁ + r₃)} / (2√(2π k³ r₁ r₂ r₃))`,
/// which keeps every Bessel factor bounded.
pub fn intersection_function(epsilon: f64, k: f64, r3: f64) -> Result<f64> {
    if !(epsilon > 0.0 && k > 0.0 && r3 > 0.0) {
        return Err(Error::domain(format!("need epsilon, k, r3 > 0, got {epsilon}, {k}, {r3}")));
    }
    let (r1, r2) = annulus_radii(epsilon, r3);
    let (a, b, c) = (k * r1, k * r2, k * r3);
    let (zero, one) = (BesselOrder::ZERO, BesselOrder::ONE);
    let weight = (-2.0 * (b - a)).exp();
    let i1a = scaled_i(one, a)?;
    let k1a = scaled_k(one, a)?;
    let (i0b, i1b) = (scaled_i(zero, b)?, scaled_i(one, b)?);
    let (k0b, k1b) = (scaled_k(zero, b)?, scaled_k(one, b)?);
    let (i0c, i1c) = (scaled_i(zero, c)?, scaled_i(one, c)?);
    let first = i0c * (weight * i1a * k1b - i1b * k1a);
    let second = i1c * (weight * i1a * k0b + i0b * k1a);
    Ok(first + second)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntersectionPoint {
    pub epsilon: f64,
    pub k: f64,
    pub alpha: f64,
    /// Scaled `F` at the returned `k`.
    pub residual: f64,
}

/// Samples per unit of `k r₃` in the root scan.
const INTERSECTION_DENSITY: f64 = 200.0;
/// Upper end of the scan in `k r₃`.
const INTERSECTION_REACH: f64 = 60.0;

fn intersection_point(epsilon: f64, r3: f64) -> Result<IntersectionPoint> {
    let f = |k: f64| intersection_function(epsilon, k, r3).unwrap_or(f64::NAN);
    let steps = (INTERSECTION_REACH * INTERSECTION_DENSITY) as usize;
    let k_of = |i: usize| (1e-3 + (INTERSECTION_REACH - 1e-3) * i as f64 / steps as f64) / r3;
    let mut prev = (k_of(0), f(k_of(0)));
    for i in 1..=steps {
        let k = k_of(i);
        let v = f(k);
        if !v.is_finite() {
            return Err(Error::Convergence { routine: "intersection_curve", iterations: i });
        }
        if (prev.1 < 0.0 && v >= 0.0) || (prev.1 > 0.0 && v <= 0.0) {
            let coarse = bisect(f, prev.0, k, 1e-6 * k, 200)?;
            let (lo, hi) = coarse.bracket;
            let root = illinois(f, lo.max(coarse.x - 2e-6 * k), hi.min(coarse.x + 2e-6 * k), 1e-14 * k, 0.0, 200)
                .or_else(|_| bisect(f, prev.0, k, 4.0 * f64::EPSILON * k, 400))?;
            let kx = root.x;
            let ratio = scaled_i(BesselOrder::ONE, kx * r3)? / scaled_i(BesselOrder::ZERO, kx * r3)?;
            return Ok(IntersectionPoint { epsilon, k: kx, alpha: -kx * ratio, residual: root.fx });
        }
        prev = (k, v);
    }
    Err(Error::Bracket(format!(
        "no root of F for epsilon={epsilon} with k r3 in (0, {INTERSECTION_REACH}]"
    )))
}

/// Smallest positive root `k(ε)` of `F(ε, ·, r₃)` for each `ε`, with α from
/// `α = −k I₁(kr₃)/I₀(kr₃)`. Failures are reported per entry.
pub fn intersection_curve(r3: f64, epsilons: &[f64]) -> Result<Vec<Result<IntersectionPoint>>> {
    if !(r3 > 0.0) || !r3.is_finite() {
        return Err(Error::domain(format!("r3 must be positive, got {r3}")));
    }
    Ok(epsilons
        .par_iter()
        .map(|&eps| {
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(Error::domain(format!("epsilon must be positive, got {eps}")));
            }
            intersection_point(eps, r3)
        })
        .collect())
}

/// `(μ₁, λ₁)`: the Neumann–Robin annulus and disk eigenvalues at the point's α.
pub fn intersection_eigenvalues(point: &IntersectionPoint, r3: f64) -> Result<(f64, f64)> {
    let (r1, r2) = annulus_radii(point.epsilon, r3);
    let mu = solve_lambda1(&SecularProblem::neumann_robin_annulus(r1, r2, point.alpha)?)?.lambda1;
    let lambda = solve_lambda1(&SecularProblem::ball(2, r3, point.alpha)?)?.lambda1;
    Ok((mu, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = linear_grid(-50.0, -0.1, 500);
        assert_eq!(g.len(), 500);
        assert_eq!(g[0], -0.1);
        assert_eq!(*g.last().unwrap(), -50.0);
    }

    #[test]
    fn a0_near_origin_is_positive() {
        assert!(a0(0.01).unwrap() > 0.0);
        assert!(a0(0.0).unwrap_err().is_domain());
    }

    #[test]
    fn annulus_has_disk_area() {
        let (r1, r2) = annulus_radii(0.3, 1.7);
        assert!(((r2 * r2 - r1 * r1) - 1.7 * 1.7).abs() < 1e-14);
    }

    #[test]
    fn sweep_rejects_positive_alpha() {
        let b = SecularProblem::ball(2, 1.0, 0.0).unwrap();
        assert!(sweep(&b, &b, &[0.5]).unwrap_err().is_domain());
    }
}
