//! Modified Bessel functions `I_ν`, `K_ν` of integer and half-integer order.
//!
//! Besides the plain functions this module exposes the exponentially scaled
//! variants
//!
//! ```text
//! I_ν(z) = e^z   Ĩ_ν(z) / √(2πz)
//! K_ν(z) = e^-z  K̃_ν(z) · √(π/(2z))
//! ```
//!
//! which stay O(1) for all positive arguments. Everything downstream of this
//! module (secular functions, intersection curves) works with the scaled
//! values so that arguments of several thousand never overflow.
//!
//! Evaluation paths:
//!
//! * `I_ν`, `z ≤ 30`: power series (all terms positive).
//! * `I_ν`, `z > 30`: large-argument series for `Ĩ_ν`, falling back to the
//!   Wronskian combined with the continued fraction for `I_ν'/I_ν` when the
//!   series does not reach full precision.
//! * `K_n`, integer order: series for `z ≤ 2`, Steed's continued fraction
//!   otherwise, then forward recurrence in the order.
//! * `K_{n+1/2}`: the terminating elementary form.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Crossover between the power series and the large-argument path for `I_ν`.
pub const SERIES_CROSSOVER: f64 = 30.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const K_SERIES_LIMIT: f64 = 2.0;
const MAX_ITER: usize = 100_000;

/// Order of a modified Bessel function, restricted to non-negative multiples of ½.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BesselOrder {
    twice: u32,
}

impl BesselOrder {
    pub const ZERO: BesselOrder = BesselOrder { twice: 0 };
    pub const HALF: BesselOrder = BesselOrder { twice: 1 };
    pub const ONE: BesselOrder = BesselOrder { twice: 2 };

    pub fn new(nu: f64) -> Result<Self> {
        let twice = 2.0 * nu;
        if !twice.is_finite() || twice < 0.0 || twice.fract() != 0.0 || twice > 1.0e6 {
            return Err(Error::domain(format!(
                "unsupported Bessel order {nu}: must be a non-negative multiple of 1/2"
            )));
        }
        Ok(BesselOrder { twice: twice as u32 })
    }

    pub const fn from_twice(twice: u32) -> Self {
        BesselOrder { twice }
    }

    /// The order `ν = (d − 2)/2` attached to the radial Laplacian in dimension `d`.
    pub fn for_dimension(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("dimension must be at least 2, got {d}")));
        }
        Ok(BesselOrder { twice: d - 2 })
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub fn is_half_integer(self) -> bool {
        self.twice % 2 == 1
    }

    /// `ν + 1`.
    pub fn next(self) -> Self {
        BesselOrder { twice: self.twice + 2 }
    }
}

/// Scaled pair `(Ĩ_ν(z), K̃_ν(z))` at a common argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledBesselValue {
    pub tilde_i: f64,
    pub tilde_k: f64,
    pub z: f64,
}

impl ScaledBesselValue {
    /// Reconstruct `I_ν(z)`; overflows to infinity beyond `z ≈ 709`.
    pub fn unscaled_i(&self) -> f64 {
        self.tilde_i * (self.z - 0.5 * (2.0 * PI * self.z).ln()).exp()
    }

    /// Reconstruct `K_ν(z)`; underflows to zero beyond `z ≈ 745`.
    pub fn unscaled_k(&self) -> f64 {
        self.tilde_k * (0.5 * (PI / (2.0 * self.z)).ln() - self.z).exp()
    }
}

fn check_positive(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("argument must be positive and finite, got {z}")))
    }
}

// ---------------------------------------------------------------------------
// Public API

/// `I_ν(z)` for `z ≥ 0`.
pub fn bessel_i(nu: BesselOrder, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(if nu.twice == 0 { 1.0 } else { 0.0 });
    }
    check_positive(z)?;
    Ok(i_unscaled(nu, z))
}

/// `K_ν(z)` for `z > 0`.
pub fn bessel_k(nu: BesselOrder, z: f64) -> Result<f64> {
    check_positive(z)?;
    Ok(k_unscaled(nu, z))
}

/// `I_ν'(z) = ½(I_{ν−1}(z) + I_{ν+1}(z))`.
pub fn bessel_i_prime(nu: BesselOrder, z: f64) -> Result<f64> {
    check_positive(z)?;
    let below = i_unscaled_signed(nu.twice as i64 - 2, z);
    let above = i_unscaled(nu.next(), z);
    Ok(0.5 * (below + above))
}

/// `K_ν'(z) = −½(K_{ν−1}(z) + K_{ν+1}(z))`.
pub fn bessel_k_prime(nu: BesselOrder, z: f64) -> Result<f64> {
    check_positive(z)?;
    let below = k_unscaled(fold(nu.twice as i64 - 2), z);
    let above = k_unscaled(nu.next(), z);
    Ok(-0.5 * (below + above))
}

/// Both scaled functions at `z`.
pub fn bessel_scaled(nu: BesselOrder, z: f64) -> Result<ScaledBesselValue> {
    check_positive(z)?;
    Ok(ScaledBesselValue { tilde_i: i_scaled(nu, z), tilde_k: k_scaled(nu, z), z })
}

/// `Ĩ_ν(z)`.
pub fn scaled_i(nu: BesselOrder, z: f64) -> Result<f64> {
    check_positive(z)?;
    Ok(i_scaled(nu, z))
}

/// `K̃_ν(z)`.
pub fn scaled_k(nu: BesselOrder, z: f64) -> Result<f64> {
    check_positive(z)?;
    Ok(k_scaled(nu, z))
}

/// Scaled derivative `½(Ĩ_{ν−1}(z) + Ĩ_{ν+1}(z))`, i.e. `I_ν'(z)` with the
/// factor `e^z/√(2πz)` removed.
pub fn scaled_i_prime(nu: BesselOrder, z: f64) -> Result<f64> {
    check_positive(z)?;
    Ok(0.5 * (i_scaled_signed(nu.twice as i64 - 2, z) + i_scaled(nu.next(), z)))
}

/// Scaled derivative `−½(K̃_{ν−1}(z) + K̃_{ν+1}(z))`.
pub fn scaled_k_prime(nu: BesselOrder, z: f64) -> Result<f64> {
    check_positive(z)?;
    Ok(-0.5 * (k_scaled(fold(nu.twice as i64 - 2), z) + k_scaled(nu.next(), z)))
}

/// Truncated large-argument series for `(Ĩ_ν, K̃_ν)` keeping `terms ∈ {1, 2, 3}` terms:
/// `1 ∓ (4ν²−1)/(8z) + (4ν²−1)(4ν²−9)/(2(8z)²)`.
pub fn tilde_series(nu: BesselOrder, z: f64, terms: u32) -> Result<(f64, f64)> {
    check_positive(z)?;
    if !(1..=3).contains(&terms) {
        return Err(Error::domain(format!("series truncation must be 1, 2 or 3, got {terms}")));
    }
    let four_mu2 = f64::from(nu.twice * nu.twice);
    let first = (four_mu2 - 1.0) / (8.0 * z);
    let second = (four_mu2 - 1.0) * (four_mu2 - 9.0) / (2.0 * (8.0 * z).powi(2));
    let (mut ti, mut tk) = (1.0, 1.0);
    if terms >= 2 {
        ti -= first;
        tk += first;
    }
    if terms >= 3 {
        ti += second;
        tk += second;
    }
    Ok((ti, tk))
}

// ---------------------------------------------------------------------------
// I_ν

fn i_unscaled(nu: BesselOrder, z: f64) -> f64 {
    if z <= SERIES_CROSSOVER {
        i_series(nu, z)
    } else {
        i_scaled(nu, z) * (z - 0.5 * (2.0 * PI * z).ln()).exp()
    }
}

fn i_scaled(nu: BesselOrder, z: f64) -> f64 {
    if z <= SERIES_CROSSOVER {
        i_series(nu, z) * (0.5 * (2.0 * PI * z).ln() - z).exp()
    } else {
        i_scaled_large(nu, z)
    }
}

/// Order given as `2ν` with `ν ≥ −1`, as produced by the derivative identity.
fn i_scaled_signed(twice: i64, z: f64) -> f64 {
    if twice >= 0 || twice % 2 == 0 {
        return i_scaled(fold(twice), z);
    }
    // I_{−μ} = I_μ + (2/π) sin(μπ) K_μ for half-integer μ = n + 1/2
    let mu = fold(twice);
    let n = (mu.twice - 1) / 2;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    i_scaled(mu, z) + sign * 2.0 * (-2.0 * z).exp() * k_scaled(mu, z)
}

fn i_unscaled_signed(twice: i64, z: f64) -> f64 {
    if twice >= 0 || twice % 2 == 0 {
        return i_unscaled(fold(twice), z);
    }
    let mu = fold(twice);
    let n = (mu.twice - 1) / 2;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    i_unscaled(mu, z) + sign * (2.0 / PI) * k_unscaled(mu, z)
}

fn fold(twice: i64) -> BesselOrder {
    BesselOrder { twice: twice.unsigned_abs() as u32 }
}

/// `(z/2)^ν / Γ(ν + 1)` as a running product.
fn series_lead(nu: BesselOrder, z: f64) -> f64 {
    let half = 0.5 * z;
    let whole = nu.twice / 2;
    if nu.is_half_integer() {
        // Γ(3/2) = √π/2
        let mut t = half.sqrt() * 2.0 / PI.sqrt();
        for j in 1..=whole {
            t *= half / (f64::from(j) + 0.5);
        }
        t
    } else {
        let mut t = 1.0;
        for j in 1..=whole {
            t *= half / f64::from(j);
        }
        t
    }
}

/// `I_ν(z) = Σ (z/2)^{2k+ν} / (k! Γ(k+ν+1))`.
pub(crate) fn i_series(nu: BesselOrder, z: f64) -> f64 {
    let nu_val = nu.value();
    let q = 0.25 * z * z;
    let mut term = series_lead(nu, z);
    let mut sum = term;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= q / (kf * (kf + nu_val));
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Large-argument evaluation of `Ĩ_ν`.
fn i_scaled_large(nu: BesselOrder, z: f64) -> f64 {
    match i_scaled_asymptotic(nu, z) {
        Some(v) => v,
        None => i_scaled_wronskian(nu, z),
    }
}

/// `Ĩ_ν(z) ~ Σ (−1)^k a_k(ν) / z^k`, stopped at the smallest term.
/// Returns `None` when the smallest term is not below double precision.
/// The exponentially small companion series (relative size `e^{−2z}`) is dropped.
fn i_scaled_asymptotic(nu: BesselOrder, z: f64) -> Option<f64> {
    let four_mu2 = f64::from(nu.twice) * f64::from(nu.twice);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (four_mu2 - odd * odd) / (8.0 * k as f64 * z);
        if next == 0.0 {
            return Some(sum);
        }
        if next.abs() > term.abs() {
            break;
        }
        sum += next;
        term = next;
        if term.abs() < 1e-17 * sum.abs() {
            return Some(sum);
        }
    }
    if term.abs() < 1e-15 * sum.abs() {
        Some(sum)
    } else {
        None
    }
}

/// `Ĩ_ν = 2 / (f K̃_ν − K̃_ν')` with `f = I_ν'/I_ν` from the continued fraction.
pub(crate) fn i_scaled_wronskian(nu: BesselOrder, z: f64) -> f64 {
    let f = i_log_derivative(nu, z);
    let k_nu = k_scaled(nu, z);
    let k_prime = -k_scaled(nu.next(), z) + nu.value() / z * k_nu;
    2.0 / (f * k_nu - k_prime)
}

/// `I_ν'(z)/I_ν(z) = ν/z + 1/(2(ν+1)/z + 1/(2(ν+2)/z + …))`, modified Lentz.
fn i_log_derivative(nu: BesselOrder, z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let inv = 1.0 / z;
    let nu_val = nu.value();
    let mut h = (nu_val * inv).max(TINY);
    let mut b = 2.0 * nu_val * inv;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAX_ITER {
        b += 2.0 * inv;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

// ---------------------------------------------------------------------------
// K_ν

fn k_unscaled(nu: BesselOrder, z: f64) -> f64 {
    if !nu.is_half_integer() && z <= K_SERIES_LIMIT {
        let (k0, k1) = k01_series(z);
        return recur_k(nu.twice / 2, k0, k1, z);
    }
    k_scaled(nu, z) * (0.5 * (PI / (2.0 * z)).ln() - z).exp()
}

fn k_scaled(nu: BesselOrder, z: f64) -> f64 {
    if nu.is_half_integer() {
        return k_scaled_half_integer(nu, z);
    }
    let n = nu.twice / 2;
    if z <= K_SERIES_LIMIT {
        let (k0, k1) = k01_series(z);
        let scale = (0.5 * (2.0 * z / PI).ln() + z).exp();
        recur_k(n, k0 * scale, k1 * scale, z)
    } else {
        let (k0, k1) = k01_scaled_cf2(z);
        recur_k(n, k0, k1, z)
    }
}

/// Forward recurrence `K_{n+1} = K_{n−1} + (2n/z) K_n`; stable for `K`.
fn recur_k(n: u32, k0: f64, k1: f64, z: f64) -> f64 {
    match n {
        0 => k0,
        1 => k1,
        _ => {
            let (mut prev, mut cur) = (k0, k1);
            for j in 1..n {
                let next = prev + 2.0 * f64::from(j) / z * cur;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `K̃_{n+1/2}(z) = Σ_{j=0}^{n} (n+j)! / (j! (n−j)!) (2z)^{−j}`.
pub(crate) fn k_scaled_half_integer(nu: BesselOrder, z: f64) -> f64 {
    let n = (nu.twice - 1) / 2;
    let mut coeff = 1.0;
    let mut sum = 1.0;
    let inv = 1.0 / (2.0 * z);
    let mut power = 1.0;
    for j in 1..=n {
        // c_j = c_{j−1} (n+j)(n−j+1)/j
        coeff *= f64::from(n + j) * f64::from(n - j + 1) / f64::from(j);
        power *= inv;
        sum += coeff * power;
    }
    sum
}

/// Small-argument series for `K_0` and `K_1`.
fn k01_series(z: f64) -> (f64, f64) {
    let q = 0.25 * z * z;
    let log_half = (0.5 * z).ln();

    // K_0 = −(ln(z/2) + γ) I_0 + Σ_{k≥1} q^k/(k!)² H_k
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut tail0 = 0.0;
    // K_1 = 1/z + ln(z/2) I_1 − (z/4) Σ_{k≥0} (ψ(k+1)+ψ(k+2)) q^k/(k!(k+1)!)
    let mut term1 = 1.0;
    let mut tail1 = 1.0 - 2.0 * EULER_GAMMA; // ψ(1) + ψ(2) at k = 0
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        tail0 += term * harmonic;
        term1 *= q / (kf * (kf + 1.0));
        let psi_sum = -2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (kf + 1.0);
        tail1 += term1 * psi_sum;
        if term < 1e-18 && term1 < 1e-18 {
            break;
        }
    }
    let i0 = i_series(BesselOrder::ZERO, z);
    let i1 = i_series(BesselOrder::ONE, z);
    let k0 = -(log_half + EULER_GAMMA) * i0 + tail0;
    let k1 = 1.0 / z + log_half * i1 - 0.25 * z * tail1;
    (k0, k1)
}

/// Steed's continued fraction for `(K̃_0, K̃_1)`, valid for `z ≳ 2`.
fn k01_scaled_cf2(z: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = 1.0 / s;
    let k1 = k0 * (z + 0.5 - h) / z;
    (k0, k1)
}
