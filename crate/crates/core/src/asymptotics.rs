//! Two-term predictions of `λ₁` for large and small `|α|`, the large-`k`
//! expansion of `f(k, α) = m̃₁₁ m̃₂₂`, and the convergence diagnostics used to
//! follow the root `k(α)` as `α → −∞`.

use crate::error::{Error, Result};
use crate::geometry::ShellGeometry;
use crate::secular::{ProblemKind, SecularProblem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    LargeNegAlpha,
    SmallAlpha,
}

/// `λ_pred = a₂ α² + a₁ α` with `leading_terms = (a₂, a₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub lambda_pred: f64,
    pub regime: Regime,
    pub leading_terms: (f64, f64),
}

impl AsymptoticPrediction {
    fn new(regime: Regime, quadratic: f64, linear: f64, alpha: f64) -> Self {
        AsymptoticPrediction {
            lambda_pred: quadratic * alpha * alpha + linear * alpha,
            regime,
            leading_terms: (quadratic, linear),
        }
    }

    /// Coefficient of `α` (the boundary-curvature term or the slope at zero).
    pub fn linear_coefficient(&self) -> f64 {
        self.leading_terms.1
    }
}

/// `λ₁ ≈ −α² + c α` as `α → −∞`, with `c = (d−1)/r₂` for Robin shells and
/// balls (`1/r` for disks) and `c = 1/r₂` for Neumann–Robin annuli.
pub fn predict_large_alpha(p: &SecularProblem, alpha: f64) -> Result<AsymptoticPrediction> {
    if !(alpha < 0.0) {
        return Err(Error::domain(format!("large-|alpha| prediction needs alpha < 0, got {alpha}")));
    }
    let g = p.geometry();
    let c = match p.kind() {
        ProblemKind::Ball | ProblemKind::RobinShell => f64::from(g.d() - 1) / g.r2(),
        ProblemKind::NeumannRobinAnnulus => 1.0 / g.r2(),
    };
    Ok(AsymptoticPrediction::new(Regime::LargeNegAlpha, -1.0, c, alpha))
}

/// `λ₁ ≈ α |∂Ω_Robin| / |Ω|` as `α → 0`: `2α/r₃` for a disk and
/// `2α r₂/(r₂² − r₁²)` for a Neumann–Robin annulus.
pub fn predict_small_alpha(p: &SecularProblem, alpha: f64) -> Result<AsymptoticPrediction> {
    if !(alpha <= 0.0) {
        return Err(Error::domain(format!("small-alpha prediction needs alpha <= 0, got {alpha}")));
    }
    Ok(AsymptoticPrediction::new(Regime::SmallAlpha, 0.0, p.surface_to_volume(), alpha))
}

/// Truncation depth for [`eval_f_expansion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExpansionOrder {
    /// Group leaders only.
    Leading,
    /// Leaders and their `1/k` corrections.
    First,
    /// Every term kept in the expansion (up to `1/k²` inside the brackets).
    Second,
}

/// Integer polynomials in `d` appearing in the expansion.
#[derive(Debug, Clone, Copy)]
struct DimensionCoefficients {
    /// d² − 4d + 7
    a7: i64,
    /// d² − 4d + 5
    a5: i64,
    /// d² − 4d + 3
    a3: i64,
    /// d⁴ − 8d³ + 38d² − 88d + 57
    p_kk: i64,
    /// d⁴ − 8d³ + 14d² + 8d − 15
    p_aa: i64,
}

impl DimensionCoefficients {
    fn new(d: u32) -> Self {
        let d = i64::from(d);
        let d2 = d * d;
        DimensionCoefficients {
            a7: d2 - 4 * d + 7,
            a5: d2 - 4 * d + 5,
            a3: d2 - 4 * d + 3,
            p_kk: d2 * d2 - 8 * d2 * d + 38 * d2 - 88 * d + 57,
            p_aa: d2 * d2 - 8 * d2 * d + 14 * d2 + 8 * d - 15,
        }
    }
}

/// Large-`k` expansion of `f(k, α) = m̃₁₁ m̃₂₂` for a Robin shell, summed group by group
/// (`k²`, `2kα`, `α²`, `νk`, `−ν²/(r₁r₂)`, `να`).
pub fn eval_f_expansion(
    k: f64,
    alpha: f64,
    r1: f64,
    r2: f64,
    d: u32,
    order: ExpansionOrder,
) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::domain(format!("k must be positive, got {k}")));
    }
    if !(r1 > 0.0) {
        return Err(Error::domain(format!("inner radius must be positive, got {r1}")));
    }
    let geometry = ShellGeometry::new(d, r1, r2)?;
    let c = DimensionCoefficients::new(geometry.d());
    let nu = f64::from(d - 2) / 2.0;
    let diff = 1.0 / r1 - 1.0 / r2;
    let sum_sq = 1.0 / (r1 * r1) + 1.0 / (r2 * r2);
    let prod = r1 * r2;
    let (a7, a5, a3) = (c.a7 as f64, c.a5 as f64, c.a3 as f64);

    let first = order >= ExpansionOrder::First;
    let second = order >= ExpansionOrder::Second;
    let on = |flag: bool, v: f64| if flag { v } else { 0.0 };

    let kk = 1.0
        + on(first, a7 / (8.0 * k) * diff)
        + on(
            second,
            -(a7 * a7) / (64.0 * k * k * prod) + c.p_kk as f64 / (128.0 * k * k) * sum_sq,
        );
    let ka = 1.0
        + on(first, a5 / (8.0 * k) * diff)
        + on(second, a7 * a3 / (128.0 * k * k) * diff * diff);
    let aa = 1.0
        + on(first, a3 / (8.0 * k) * diff)
        + on(
            second,
            -(a3 * a3) / (64.0 * k * k * prod) + c.p_aa as f64 / (128.0 * k * k) * sum_sq,
        );
    let nu_k = diff + on(first, -a7 / (4.0 * k * prod) + a3 / (8.0 * k) * sum_sq);
    let nu_nu = -1.0 / prod;
    let nu_a = diff + on(first, a3 / (8.0 * k) * diff * diff);

    Ok(k * k * kk
        + 2.0 * k * alpha * ka
        + alpha * alpha * aa
        + nu * k * nu_k
        + nu * nu * nu_nu
        + nu * alpha * nu_a)
}

/// Quantities that tend to zero along the first root as `α → −∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    /// α/k²
    pub alpha_over_k2: f64,
    /// α²/k³
    pub alpha2_over_k3: f64,
    /// 1 + α/k
    pub one_plus_alpha_over_k: f64,
    /// (k+α)²/k
    pub shifted_square_over_k: f64,
    /// k + α − (d−1)/(2r₂)
    pub boundary_gap: f64,
}

impl StepDiagnostics {
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.alpha_over_k2,
            self.alpha2_over_k3,
            self.one_plus_alpha_over_k,
            self.shifted_square_over_k,
            self.boundary_gap,
        ]
    }
}

/// Evaluate the five step quantities at `(k, α)` for a problem of dimension `d`
/// and outer radius `r2`.
pub fn step_diagnostics(k: f64, alpha: f64, d: u32, r2: f64) -> Result<StepDiagnostics> {
    if !(k > 0.0) || !(alpha < 0.0) {
        return Err(Error::domain(format!("need k > 0 and alpha < 0, got k={k}, alpha={alpha}")));
    }
    let shifted = k + alpha;
    Ok(StepDiagnostics {
        alpha_over_k2: alpha / (k * k),
        alpha2_over_k3: alpha * alpha / (k * k * k),
        one_plus_alpha_over_k: 1.0 + alpha / k,
        shifted_square_over_k: shifted * shifted / k,
        boundary_gap: shifted - f64::from(d - 1) / (2.0 * r2),
    })
}
