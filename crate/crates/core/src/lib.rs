//! First Robin eigenvalues of balls, spherical shells and Neumann–Robin annuli
//! from modified-Bessel secular equations, with asymptotic predictors and an
//! independent finite-volume check.

pub mod asymptotics;
pub mod error;
pub mod explorer;
pub mod geometry;
pub mod oracle;
pub mod roots;
pub mod secular;
pub mod specfun;

pub use asymptotics::{AsymptoticPrediction, Regime};
pub use error::{Error, Result};
pub use explorer::{CrossingReport, IntersectionPoint, SweepRow, SweepTable};
pub use geometry::{PlanarSummary, ShellGeometry};
pub use secular::{solve_lambda1, EigenResult, InnerBoundary, ProblemKind, SecularProblem};
pub use specfun::BesselOrder;
