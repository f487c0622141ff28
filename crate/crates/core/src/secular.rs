//! Secular functions for the radial Robin problem and the largest-root solver.
//!
//! With `λ₁ = −k²`, a radial eigenfunction on a shell is
//! `r^{−ν} (C₁ K_ν(kr) + C₂ I_ν(kr))`, `ν = (d−2)/2`, and the two boundary
//! conditions give a 2×2 homogeneous system whose determinant vanishes at the
//! admissible `k`. All functions here evaluate that determinant (or its ball
//! and Neumann–Robin counterparts) with the exponential growth of `I` and
//! decay of `K` divided out, so they stay finite for `k(r₂ − r₁)` in the
//! thousands. The positive factor divided out never changes sign, so zeros
//! and signs agree with the unscaled determinants.

use crate::error::{Error, Result};
use crate::geometry::ShellGeometry;
use crate::roots;
use crate::specfun::{self, BesselOrder};
use serde::{Deserialize, Serialize};

/// Shells thinner than this fraction of the outer radius are rejected.
pub const MIN_RELATIVE_WIDTH: f64 = 1e-8;

/// Weights below this are treated as zero in the scaled determinant.
const EXP_FLUSH: f64 = 1e-300;

/// Condition on the inner sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InnerBoundary {
    /// No inner boundary (ball); regularity at the origin.
    Absent,
    /// Robin condition with the shared parameter.
    Robin,
    /// Neumann condition (Neumann–Robin annulus, `d = 2`).
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Ball,
    RobinShell,
    NeumannRobinAnnulus,
}

/// Radial Robin eigenvalue problem on a ball or shell with parameter `alpha ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularProblem {
    geometry: ShellGeometry,
    inner: InnerBoundary,
    alpha: f64,
}

impl SecularProblem {
    pub fn new(geometry: ShellGeometry, inner: InnerBoundary, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha > 0.0 {
            return Err(Error::domain(format!(
                "boundary parameter must be finite and non-positive, got {alpha}"
            )));
        }
        match (geometry.is_ball(), inner) {
            (true, InnerBoundary::Absent) => {}
            (true, _) => return Err(Error::domain("a ball has no inner boundary condition")),
            (false, InnerBoundary::Absent) => {
                return Err(Error::domain("a shell needs an inner boundary condition"))
            }
            (false, InnerBoundary::Neumann) if geometry.d() != 2 => {
                return Err(Error::domain("Neumann-Robin annuli are only supported for d = 2"))
            }
            (false, _) => {
                if geometry.width() <= MIN_RELATIVE_WIDTH * geometry.r2() {
                    return Err(Error::domain(format!(
                        "shell too thin: r2 - r1 = {} <= {MIN_RELATIVE_WIDTH:e} r2",
                        geometry.width()
                    )));
                }
            }
        }
        Ok(SecularProblem { geometry, inner, alpha })
    }

    pub fn ball(d: u32, r: f64, alpha: f64) -> Result<Self> {
        Self::new(ShellGeometry::ball(d, r)?, InnerBoundary::Absent, alpha)
    }

    pub fn robin_shell(d: u32, r1: f64, r2: f64, alpha: f64) -> Result<Self> {
        if r1 <= 0.0 {
            return Err(Error::domain(format!("shell inner radius must be positive, got {r1}")));
        }
        Self::new(ShellGeometry::new(d, r1, r2)?, InnerBoundary::Robin, alpha)
    }

    pub fn neumann_robin_annulus(r1: f64, r2: f64, alpha: f64) -> Result<Self> {
        if r1 <= 0.0 {
            return Err(Error::domain(format!("annulus inner radius must be positive, got {r1}")));
        }
        Self::new(ShellGeometry::new(2, r1, r2)?, InnerBoundary::Neumann, alpha)
    }

    /// Same geometry and boundary conditions with a different parameter.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.geometry, self.inner, alpha)
    }

    pub fn geometry(&self) -> &ShellGeometry {
        &self.geometry
    }

    pub fn inner(&self) -> InnerBoundary {
        self.inner
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kind(&self) -> ProblemKind {
        match self.inner {
            InnerBoundary::Absent => ProblemKind::Ball,
            InnerBoundary::Robin => ProblemKind::RobinShell,
            InnerBoundary::Neumann => ProblemKind::NeumannRobinAnnulus,
        }
    }

    pub fn order(&self) -> BesselOrder {
        BesselOrder::from_twice(self.geometry.d() - 2)
    }

    /// Measure of the Robin part of the boundary.
    pub fn robin_surface(&self) -> f64 {
        match self.inner {
            InnerBoundary::Neumann => self.geometry.outer_surface(),
            _ => self.geometry.surface(),
        }
    }

    /// Ratio `|∂Ω_Robin| / |Ω|`: the slope of `λ₁` at `α = 0` and the constant
    /// in the test-function bound `λ₁ ≤ α |∂Ω_Robin| / |Ω|`.
    pub fn surface_to_volume(&self) -> f64 {
        self.robin_surface() / self.geometry.volume()
    }

    /// Upper bound on `λ₁` from the constant test function.
    pub fn variational_bound(&self) -> f64 {
        self.alpha * self.surface_to_volume()
    }

    /// Leading large-|α| guess `k ≈ −α + (d−1)/(2 r₂)` for the largest root.
    pub fn predicted_k(&self) -> f64 {
        -self.alpha + f64::from(self.geometry.d() - 1) / (2.0 * self.geometry.r2())
    }
}

/// Scaled entries `m̃ᵢⱼ` of the shell boundary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledEntries {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
    /// `e^{−2k(r₂−r₁)}`, flushed to zero below 1e−300.
    pub weight: f64,
}

impl ScaledEntries {
    /// `m̃₁₁m̃₂₂ − e^{−2k(r₂−r₁)} m̃₂₁m̃₁₂`.
    pub fn determinant(&self) -> f64 {
        let cross = if self.weight == 0.0 { 0.0 } else { self.weight * self.m21 * self.m12 };
        self.m11 * self.m22 - cross
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("k must be positive and finite, got {k}")))
    }
}

fn exp_weight(k: f64, width: f64) -> f64 {
    let w = (-2.0 * k * width).exp();
    if w < EXP_FLUSH {
        0.0
    } else {
        w
    }
}

/// Scaled matrix entries for Robin parameters `alpha_inner` on `r1` and `alpha_outer` on `r2`.
///
/// The derivative combinations `½k(Ĩ_{ν−1} + Ĩ_{ν+1}) − (ν/r)Ĩ_ν` are evaluated
/// through the recurrence as `k Ĩ_{ν+1}` (and likewise for `K̃`), which is the
/// same quantity without the cancellation that occurs for small `kr`.
pub fn scaled_entries(
    k: f64,
    nu: BesselOrder,
    r1: f64,
    r2: f64,
    alpha_inner: f64,
    alpha_outer: f64,
) -> Result<ScaledEntries> {
    check_k(k)?;
    if !(r1 > 0.0 && r2 > r1) {
        return Err(Error::domain(format!("need 0 < r1 < r2, got r1={r1}, r2={r2}")));
    }
    let (z1, z2) = (k * r1, k * r2);
    let up = nu.next();
    let k1 = specfun::scaled_k(nu, z1)?;
    let k1_up = specfun::scaled_k(up, z1)?;
    let i1 = specfun::scaled_i(nu, z1)?;
    let i1_up = specfun::scaled_i(up, z1)?;
    let k2 = specfun::scaled_k(nu, z2)?;
    let k2_up = specfun::scaled_k(up, z2)?;
    let i2 = specfun::scaled_i(nu, z2)?;
    let i2_up = specfun::scaled_i(up, z2)?;
    Ok(ScaledEntries {
        m11: k * k1_up + alpha_inner * k1,
        m12: -k * i1_up + alpha_inner * i1,
        m21: -k * k2_up + alpha_outer * k2,
        m22: k * i2_up + alpha_outer * i2,
        weight: exp_weight(k, r2 - r1),
    })
}

/// Scaled determinant for a Robin shell.
pub fn shell_secular(k: f64, p: &SecularProblem) -> Result<f64> {
    check_k(k)?;
    if p.kind() != ProblemKind::RobinShell {
        return Err(Error::domain("shell_secular needs Robin conditions on both spheres"));
    }
    let g = p.geometry();
    Ok(scaled_entries(k, p.order(), g.r1(), g.r2(), p.alpha(), p.alpha())?.determinant())
}

/// Scaled ball equation `k Ĩ_ν'(kr) − (ν/r) Ĩ_ν(kr) + α Ĩ_ν(kr)`, computed as
/// `k Ĩ_{ν+1}(kr) + α Ĩ_ν(kr)`.
pub fn ball_secular(k: f64, d: u32, r: f64, alpha: f64) -> Result<f64> {
    check_k(k)?;
    if !(r > 0.0) {
        return Err(Error::domain(format!("ball radius must be positive, got {r}")));
    }
    let nu = BesselOrder::for_dimension(d)?;
    let z = k * r;
    Ok(k * specfun::scaled_i(nu.next(), z)? + alpha * specfun::scaled_i(nu, z)?)
}

/// Scaled Neumann–Robin annulus equation (`d = 2`):
///
/// `K̃₁(kr₁)[k Ĩ₁(kr₂) + α Ĩ₀(kr₂)] − e^{−2k(r₂−r₁)} Ĩ₁(kr₁)[k K̃₁(kr₂) − α K̃₀(kr₂)]`.
pub fn annulus_nr_secular(k: f64, r1: f64, r2: f64, alpha: f64) -> Result<f64> {
    check_k(k)?;
    if !(r1 > 0.0 && r2 > r1) {
        return Err(Error::domain(format!("need 0 < r1 < r2, got r1={r1}, r2={r2}")));
    }
    let (z1, z2) = (k * r1, k * r2);
    let (zero, one) = (BesselOrder::ZERO, BesselOrder::ONE);
    let outer_i = k * specfun::scaled_i(one, z2)? + alpha * specfun::scaled_i(zero, z2)?;
    let outer_k = k * specfun::scaled_k(one, z2)? - alpha * specfun::scaled_k(zero, z2)?;
    let lead = specfun::scaled_k(one, z1)? * outer_i;
    let w = exp_weight(k, r2 - r1);
    let tail = if w == 0.0 { 0.0 } else { w * specfun::scaled_i(one, z1)? * outer_k };
    Ok(lead - tail)
}

/// The secular function appropriate to `p`, evaluated at `k`.
pub fn secular_value(k: f64, p: &SecularProblem) -> Result<f64> {
    let g = p.geometry();
    match p.kind() {
        ProblemKind::Ball => ball_secular(k, g.d(), g.r2(), p.alpha()),
        ProblemKind::RobinShell => shell_secular(k, p),
        ProblemKind::NeumannRobinAnnulus => annulus_nr_secular(k, g.r1(), g.r2(), p.alpha()),
    }
}

/// First eigenvalue together with its certification data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub lambda1: f64,
    pub k: f64,
    /// Secular function value at `k`.
    pub residual: f64,
    /// Largest `|secular|` at the ends of the sign-change bracket.
    pub scale: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// Sign changes met by the scan above the initial upper bracket; nonzero
    /// means the large-|α| guess was not above every root.
    pub upper_sign_changes: usize,
}

impl EigenResult {
    fn zero() -> Self {
        EigenResult {
            lambda1: 0.0,
            k: 0.0,
            residual: 0.0,
            scale: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
            upper_sign_changes: 0,
        }
    }

    fn from_k(k: f64, residual: f64, scale: f64, bracket: (f64, f64), iterations: usize) -> Self {
        EigenResult {
            lambda1: -(k * k),
            k,
            residual,
            scale,
            bracket,
            iterations,
            upper_sign_changes: 0,
        }
    }
}

/// Relative step tolerance on `k`.
pub const K_TOLERANCE: f64 = 1e-12;
/// Residual tolerance relative to the bracket scale.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

const UPPER_SCAN_POINTS: usize = 64;
const MAX_EXPANSIONS: usize = 200;
const MAX_WALK: usize = 100_000;

/// Largest positive root `k` of the problem's secular function and `λ₁ = −k²`.
///
/// The search starts above the large-|α| guess, certifies by a log-spaced
/// scan up to `4|α| + 10/w` (`w` the shell width or ball radius) that no
/// sign change lies higher, then walks down to the first sign change. The
/// walk never goes below the variational floor `k² ≥ −α |∂Ω|/|Ω|`.
pub fn solve_lambda1(p: &SecularProblem) -> Result<EigenResult> {
    let alpha = p.alpha();
    if alpha == 0.0 {
        return Ok(EigenResult::zero());
    }
    let g = *p.geometry();
    let f = |k: f64| secular_value(k, p);

    let k_floor = (-p.variational_bound()).sqrt();
    let width = g.width();
    let d1 = f64::from(g.d() - 1);
    // Robin shells carry a second boundary-localised root about
    // (d−1)/2 (1/r₁ + 1/r₂) below the first; the walk must not step over it.
    let max_step = match p.kind() {
        ProblemKind::RobinShell => 0.125 * (0.5 * d1 * (1.0 / g.r1() + 1.0 / g.r2())).max(0.1 / width),
        _ => f64::INFINITY,
    };

    let mut k_hi = p.predicted_k().max(k_floor) * 1.01 + d1 / g.r2() + 1.0 / width;
    let mut f_hi = f(k_hi)?;
    let mut expansions = 0;
    while f_hi <= 0.0 {
        expansions += 1;
        if expansions > MAX_EXPANSIONS || !f_hi.is_finite() {
            return Err(Error::Bracket(format!(
                "secular function not positive above k = {k_hi} for alpha = {alpha}"
            )));
        }
        k_hi = 1.5 * k_hi + 1.0;
        f_hi = f(k_hi)?;
    }

    // certification scan above k_hi
    let k_cap = 4.0 * (-alpha) + 10.0 / width;
    let mut upper_sign_changes = 0;
    if k_cap > k_hi {
        let ratio = (k_cap / k_hi).powf(1.0 / UPPER_SCAN_POINTS as f64);
        let mut prev = f_hi;
        let mut kk = k_hi;
        let mut highest_nonpositive: Option<f64> = None;
        for _ in 0..UPPER_SCAN_POINTS {
            kk *= ratio;
            let v = f(kk)?;
            if (v <= 0.0) != (prev <= 0.0) {
                upper_sign_changes += 1;
            }
            if v <= 0.0 {
                highest_nonpositive = Some(kk);
            }
            prev = v;
        }
        if let Some(kn) = highest_nonpositive {
            // restart above the highest non-positive sample
            k_hi = kn * ratio;
            f_hi = f(k_hi)?;
            while f_hi <= 0.0 {
                k_hi *= ratio;
                f_hi = f(k_hi)?;
            }
        }
    }

    // walk down to the first sign change
    let lower_limit = k_floor * (1.0 - 1e-9);
    let mut upper = k_hi;
    let mut f_upper = f_hi;
    let mut lower = None;
    for _ in 0..MAX_WALK {
        let step = (0.02 * upper).min(max_step);
        let mut candidate = upper - step;
        let last = candidate <= lower_limit;
        if last {
            candidate = lower_limit;
        }
        if !(candidate > 0.0) {
            break;
        }
        let v = f(candidate)?;
        if v <= 0.0 {
            lower = Some((candidate, v));
            break;
        }
        upper = candidate;
        f_upper = v;
        if last {
            break;
        }
    }
    let (k_lo, f_lo) = lower.ok_or_else(|| {
        Error::Bracket(format!(
            "no sign change between the variational floor {k_floor} and {k_hi} (alpha = {alpha})"
        ))
    })?;

    let scale = f_lo.abs().max(f_upper.abs());
    let polished = polish(&f, k_lo, upper, scale)?;
    let mut result = EigenResult::from_k(
        polished.x,
        polished.fx,
        scale,
        (k_lo, upper),
        polished.iterations,
    );
    result.upper_sign_changes = upper_sign_changes;
    Ok(result)
}

/// Bisection until the bracket is small, then bracketed secant to full precision.
fn polish<F>(f: &F, lo: f64, hi: f64, scale: f64) -> Result<roots::Root>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut failure = None;
    let mut eval = |k: f64| match f(k) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let coarse_tol = 1e-6 * hi.max(1.0);
    let coarse = roots::bisect(&mut eval, lo, hi, coarse_tol, 200)?;
    let (a, b) = (
        (coarse.x - coarse_tol).max(lo),
        (coarse.x + coarse_tol).min(hi),
    );
    let (a, b) = if (eval(a) <= 0.0) != (eval(b) <= 0.0) { (a, b) } else { (lo, hi) };
    let xtol = K_TOLERANCE * coarse.x.max(1.0);
    let ftol = RESIDUAL_TOLERANCE * scale;
    let fine = roots::illinois(&mut eval, a, b, xtol, ftol, 200)?;
    if let Some(e) = failure {
        return Err(e);
    }
    if fine.fx.abs() > ftol {
        return Err(Error::Convergence { routine: "solve_lambda1", iterations: fine.iterations });
    }
    Ok(roots::Root { iterations: coarse.iterations + fine.iterations, ..fine })
}
