//! Balls, spherical shells and the planar radii maps.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Ball (`r1 = 0`) or spherical shell `{r1 < |x| < r2}` in `R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellGeometry {
    d: u32,
    r1: f64,
    r2: f64,
}

impl ShellGeometry {
    pub fn new(d: u32, r1: f64, r2: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("dimension must be at least 2, got {d}")));
        }
        if !(r1.is_finite() && r2.is_finite()) || r1 < 0.0 || r2 <= r1 {
            return Err(Error::domain(format!("radii must satisfy 0 <= r1 < r2, got r1={r1}, r2={r2}")));
        }
        Ok(ShellGeometry { d, r1, r2 })
    }

    pub fn ball(d: u32, r: f64) -> Result<Self> {
        Self::new(d, 0.0, r)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn is_ball(&self) -> bool {
        self.r1 == 0.0
    }

    pub fn width(&self) -> f64 {
        self.r2 - self.r1
    }

    /// Lebesgue measure `ω_d (r2^d − r1^d)`.
    pub fn volume(&self) -> f64 {
        let d = self.d as i32;
        unit_ball_volume(self.d) * (self.r2.powi(d) - self.r1.powi(d))
    }

    /// Boundary measure `d ω_d (r2^{d−1} + r1^{d−1})`; the inner sphere is absent for balls.
    pub fn surface(&self) -> f64 {
        let inner = if self.is_ball() { 0.0 } else { self.sphere_area(self.r1) };
        self.sphere_area(self.r2) + inner
    }

    /// Measure of the outer sphere alone.
    pub fn outer_surface(&self) -> f64 {
        self.sphere_area(self.r2)
    }

    fn sphere_area(&self, r: f64) -> f64 {
        f64::from(self.d) * unit_ball_volume(self.d) * r.powi(self.d as i32 - 1)
    }

    /// Radius of the ball with the same volume.
    pub fn equal_volume_ball_radius(&self) -> f64 {
        let d = self.d as i32;
        (self.r2.powi(d) - self.r1.powi(d)).powf(1.0 / f64::from(self.d))
    }
}

/// Volume of the unit ball, `π^{d/2} / Γ(d/2 + 1)`.
pub fn unit_ball_volume(d: u32) -> f64 {
    let m = d / 2;
    if d % 2 == 0 {
        // π^m / m!
        (1..=m).fold(1.0, |acc, j| acc * PI / f64::from(j))
    } else {
        // 2^{m+1} π^m / (2m+1)!!
        (1..=m).fold(2.0, |acc, j| acc * 2.0 * PI / f64::from(2 * j + 1))
    }
}

/// Shell with inner radius `r1` and the same volume as the ball of radius `r_ball`.
pub fn match_shell_to_ball(d: u32, r_ball: f64, r1: f64) -> Result<ShellGeometry> {
    if !(r_ball > 0.0 && r1 > 0.0) || !r_ball.is_finite() || !r1.is_finite() {
        return Err(Error::domain(format!(
            "ball radius and inner radius must be positive, got r_ball={r_ball}, r1={r1}"
        )));
    }
    let di = d as i32;
    let r2 = (r1.powi(di) + r_ball.powi(di)).powf(1.0 / f64::from(d));
    ShellGeometry::new(d, r1, r2)
}

/// Outer perimeter `L0` and area `A0` of a planar domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarSummary {
    outer_perimeter: f64,
    area: f64,
}

impl PlanarSummary {
    pub fn new(outer_perimeter: f64, area: f64) -> Result<Self> {
        if !(outer_perimeter > 0.0 && area > 0.0) || !outer_perimeter.is_finite() || !area.is_finite() {
            return Err(Error::domain(format!(
                "perimeter and area must be positive, got L0={outer_perimeter}, A0={area}"
            )));
        }
        let s = PlanarSummary { outer_perimeter, area };
        if s.deficit() < 0.0 {
            return Err(Error::domain(format!(
                "isoperimetric inequality violated: L0^2 = {} < 4 pi A0 = {}",
                outer_perimeter * outer_perimeter,
                4.0 * PI * area
            )));
        }
        Ok(s)
    }

    pub fn outer_perimeter(&self) -> f64 {
        self.outer_perimeter
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// `L0² − 4πA0`, snapped to zero within rounding of the two products.
    fn deficit(&self) -> f64 {
        let lhs = self.outer_perimeter * self.outer_perimeter;
        let rhs = 4.0 * PI * self.area;
        let diff = lhs - rhs;
        if diff.abs() <= 8.0 * f64::EPSILON * lhs.max(rhs) {
            0.0
        } else {
            diff
        }
    }
}

/// Annulus radii `r1 = √(L0² − 4πA0)/(2π)`, `r2 = L0/(2π)` with the same area `A0`.
pub fn radii_from_summary(s: &PlanarSummary) -> (f64, f64) {
    let r1 = s.deficit().sqrt() / (2.0 * PI);
    let r2 = s.outer_perimeter / (2.0 * PI);
    (r1, r2)
}

/// Radius of the disk with area `A0`.
pub fn disk_radius_from_area(area: f64) -> Result<f64> {
    if !(area > 0.0) || !area.is_finite() {
        return Err(Error::domain(format!("area must be positive, got {area}")));
    }
    Ok((area / PI).sqrt())
}
