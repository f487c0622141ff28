//! Finite-volume discretisation of the radial problem
//! `−r^{1−d}(r^{d−1}ψ′)′ = λψ`, independent of any Bessel evaluation.
//!
//! Unknowns live at cell centres. Robin ends are folded into the last diagonal
//! entry by eliminating a ghost boundary value, so the pencil `(K, M)` stays
//! symmetric and `M^{-1/2} K M^{-1/2}` can be handled by Sturm counting.

use crate::error::{Error, Result};
use crate::secular::{InnerBoundary, SecularProblem};

/// Smallest grid accepted by [`fd_lambda1`].
pub const MIN_CELLS: usize = 64;

const MAX_BISECTIONS: usize = 400;

/// Uniform cell-centred grid on `[r1, r2]`; for balls `r1 = 0` and the first
/// node sits at `h/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    n: usize,
    r1: f64,
    h: f64,
}

impl RadialGrid {
    pub fn new(r1: f64, r2: f64, n: usize) -> Result<Self> {
        if n < MIN_CELLS {
            return Err(Error::domain(format!("grid needs at least {MIN_CELLS} cells, got {n}")));
        }
        if !(r1 >= 0.0 && r2 > r1 && r2.is_finite()) {
            return Err(Error::domain(format!("need 0 <= r1 < r2, got r1={r1}, r2={r2}")));
        }
        Ok(RadialGrid { n, r1, h: (r2 - r1) / n as f64 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Position of face `i`, `0 ≤ i ≤ n`.
    pub fn face(&self, i: usize) -> f64 {
        self.r1 + i as f64 * self.h
    }

    /// Cell centre `i`, `0 ≤ i < n`.
    pub fn node(&self, i: usize) -> f64 {
        self.r1 + (i as f64 + 0.5) * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.node(i))
    }
}

/// Symmetric tridiagonal matrix: `diag[i]`, `off[i]` couples `i` and `i+1`.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] / q };
            q = self.diag[i] - x - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn norm_bound(&self) -> f64 {
        let d = self.diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let o = self.off.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        d + 2.0 * o
    }

    fn gershgorin_lower(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i] - left - right
            })
            .fold(f64::INFINITY, f64::min)
    }
}

struct Pencil {
    matrix: Tridiagonal,
    /// Rayleigh quotient of the constant function, an upper bound for `λ₁`.
    constant_quotient: f64,
}

fn assemble(p: &SecularProblem, n: usize) -> Result<Pencil> {
    let g = p.geometry();
    let grid = RadialGrid::new(g.r1(), g.r2(), n)?;
    let h = grid.spacing();
    let d = g.d() as i32;
    let alpha = p.alpha();
    let weight = |r: f64| r.powi(d - 1);

    let robin = |r: f64| {
        let denom = 1.0 + 0.5 * alpha * h;
        if denom <= 0.0 {
            Err(Error::domain(format!("grid too coarse for alpha={alpha}: need |alpha| h < 2, h={h}")))
        } else {
            Ok(alpha * weight(r) / denom)
        }
    };

    let mass: Vec<f64> = (0..n)
        .map(|i| (grid.face(i + 1).powi(d) - grid.face(i).powi(d)) / f64::from(g.d()))
        .collect();
    let mut stiff_diag = vec![0.0; n];
    let mut stiff_off = vec![0.0; n - 1];
    for i in 1..n {
        let w = weight(grid.face(i)) / h;
        stiff_diag[i - 1] += w;
        stiff_diag[i] += w;
        stiff_off[i - 1] = -w;
    }
    let outer = robin(g.r2())?;
    stiff_diag[n - 1] += outer;
    let mut boundary = outer;
    if p.inner() == InnerBoundary::Robin {
        let inner = robin(g.r1())?;
        stiff_diag[0] += inner;
        boundary += inner;
    }

    let scale: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let diag = (0..n).map(|i| stiff_diag[i] * scale[i] * scale[i]).collect();
    let off = (0..n - 1).map(|i| stiff_off[i] * scale[i] * scale[i + 1]).collect();
    let total_mass: f64 = mass.iter().sum();
    Ok(Pencil { matrix: Tridiagonal { diag, off }, constant_quotient: boundary / total_mass })
}

/// Smallest eigenvalue of the finite-volume pencil with `n` cells.
pub fn fd_lambda1(p: &SecularProblem, n: usize) -> Result<f64> {
    let pencil = assemble(p, n)?;
    let t = &pencil.matrix;
    let mut lo = t.gershgorin_lower().min(pencil.constant_quotient);
    let mut hi = pencil.constant_quotient;
    // lift the constant-vector bound above the rounding level of the Sturm counts
    let mut slack = 64.0 * f64::EPSILON * t.norm_bound();
    let mut widenings = 0;
    while t.count_below(hi + slack) == 0 {
        widenings += 1;
        if widenings > 32 {
            return Err(Error::Convergence { routine: "fd_lambda1", iterations: widenings });
        }
        slack *= 2.0;
    }
    hi += slack;
    let abs_tol = f64::EPSILON * lo.abs().max(1.0);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if t.count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= (2.0 * f64::EPSILON * hi.abs().max(lo.abs())).max(abs_tol) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Convergence { routine: "fd_lambda1", iterations: MAX_BISECTIONS })
}

/// Second-order extrapolation `(4λ_{2n} − λ_n)/3`.
pub fn richardson(lambda_n: f64, lambda_2n: f64) -> f64 {
    (4.0 * lambda_2n - lambda_n) / 3.0
}

/// Extrapolated `λ₁` from grids with `n` and `2n` cells.
pub fn fd_lambda1_extrapolated(p: &SecularProblem, n: usize) -> Result<f64> {
    Ok(richardson(fd_lambda1(p, n)?, fd_lambda1(p, 2 * n)?))
}

/// A cell count giving `|α| h ≤ 1/64` and at least `MIN_CELLS * 4` cells,
/// rounded up to a power of two.
pub fn suggested_cells(p: &SecularProblem) -> usize {
    let width = p.geometry().width();
    let needed = (64.0 * p.alpha().abs() * width).ceil() as usize;
    needed.max(4 * MIN_CELLS).next_power_of_two()
}
