use crate::args::Suite;
use crate::output::OutputRecord;
use crate::CliError;
use robin_core::asymptotics::{predict_large_alpha, predict_small_alpha, step_diagnostics};
use robin_core::explorer::{
    a0_sign_changes, alpha_limit, find_y0_by, intersection_curve, intersection_eigenvalues, RootMethod,
};
use robin_core::secular::{solve_lambda1, SecularProblem, K_TOLERANCE};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: Value,
}

fn check(name: impl Into<String>, passed: bool, measured: Value) -> Check {
    Check { name: name.into(), passed, measured }
}

const LARGE_DECADES: [f64; 3] = [-1e2, -1e3, -1e4];
const SMALL_DECADES: [f64; 3] = [-1e-2, -1e-3, -1e-4];
const BOUND_GRID: [f64; 8] = [0.0, -1e-4, -1e-2, -0.5, -2.0, -10.0, -100.0, -1000.0];
const EPSILONS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

fn default_problems() -> Vec<(String, SecularProblem)> {
    let s2 = 2f64.sqrt();
    let mut out = vec![
        ("disk r=1".to_string(), SecularProblem::ball(2, 1.0, 0.0)),
        ("ball d=3 r=1".to_string(), SecularProblem::ball(3, 1.0, 0.0)),
    ];
    for d in [2u32, 3] {
        for (r1, r2) in [(1.0, 2.0), (1.0, s2)] {
            out.push((format!("shell d={d} ({r1},{r2})"), SecularProblem::robin_shell(d, r1, r2, 0.0)));
        }
    }
    for (r1, r2) in [(1.0, 2.0), (1.0, s2)] {
        out.push((format!("annulus-nr ({r1},{r2})"), SecularProblem::neumann_robin_annulus(r1, r2, 0.0)));
    }
    out.into_iter().map(|(n, p)| (n, p.expect("default problems are valid"))).collect()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1].abs() < w[0].abs())
}

/// Like [`strictly_decreasing`], but entries already below the solver's resolution
/// on `k` (`K_TOLERANCE · |α|` at that α) count as converged.
fn decreasing_to_resolution(v: &[f64], alphas: &[f64]) -> bool {
    v.windows(2)
        .zip(alphas.windows(2))
        .all(|(w, a)| w[1].abs() < w[0].abs() || w[1].abs() <= 10.0 * K_TOLERANCE * a[1].abs())
}

fn lambda_at(p: &SecularProblem, alpha: f64) -> robin_core::Result<f64> {
    Ok(solve_lambda1(&p.with_alpha(alpha)?)?.lambda1)
}

fn asymptotics_suite() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for (name, p) in default_problems() {
        let g = *p.geometry();
        let mut remainders = Vec::new();
        let mut diagnostics = Vec::new();
        for alpha in LARGE_DECADES {
            let q = p.with_alpha(alpha)?;
            let sol = solve_lambda1(&q)?;
            let c1 = predict_large_alpha(&q, alpha)?.linear_coefficient();
            remainders.push((sol.lambda1 + alpha * alpha) / alpha - c1);
            diagnostics.push(step_diagnostics(sol.k, alpha, g.d(), g.r2())?.as_array());
        }
        checks.push(check(
            format!("{name}: large-alpha remainder decreases"),
            strictly_decreasing(&remainders),
            json!({ "alpha": LARGE_DECADES, "remainder": remainders }),
        ));
        let columns: Vec<Vec<f64>> = (0..5).map(|j| diagnostics.iter().map(|s| s[j]).collect()).collect();
        checks.push(check(
            format!("{name}: step diagnostics decrease"),
            columns.iter().all(|c| decreasing_to_resolution(c, &LARGE_DECADES)),
            json!({ "alpha": LARGE_DECADES, "diagnostics": diagnostics }),
        ));

        let mut slopes = Vec::new();
        for alpha in SMALL_DECADES {
            let s = predict_small_alpha(&p.with_alpha(alpha)?, alpha)?.linear_coefficient();
            slopes.push(lambda_at(&p, alpha)? / alpha - s);
        }
        checks.push(check(
            format!("{name}: small-alpha slope remainder decreases"),
            strictly_decreasing(&slopes),
            json!({ "alpha": SMALL_DECADES, "remainder": slopes }),
        ));
    }
    Ok(checks)
}

fn bounds_suite() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for (name, p) in default_problems() {
        let mut worst = f64::NEG_INFINITY;
        let mut violations = 0;
        for alpha in BOUND_GRID {
            let q = p.with_alpha(alpha)?;
            let lambda = solve_lambda1(&q)?.lambda1;
            let bound = q.variational_bound();
            // λ₁ − bound, relative; must be ≤ 0 up to rounding
            let excess = (lambda - bound) / bound.abs().max(f64::MIN_POSITIVE);
            if alpha != 0.0 {
                worst = worst.max(excess);
            }
            if lambda > bound + 1e-9 * bound.abs() {
                violations += 1;
            }
        }
        checks.push(check(
            format!("{name}: lambda1 <= alpha |boundary|/|volume|"),
            violations == 0,
            json!({ "alpha": BOUND_GRID, "violations": violations, "max_relative_excess": worst }),
        ));
    }
    Ok(checks)
}

fn intersection_suite(r3: f64) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let changes = a0_sign_changes();
    checks.push(check(
        "a0 changes sign exactly once on (0, 50)",
        changes.len() == 1,
        json!({ "brackets": changes }),
    ));
    let y_bisect = find_y0_by(RootMethod::Bisection)?;
    let y_secant = find_y0_by(RootMethod::Secant)?;
    checks.push(check(
        "y0 agrees across bisection and secant",
        (y_bisect - y_secant).abs() <= 1e-10,
        json!({ "bisection": y_bisect, "secant": y_secant }),
    ));
    let points = intersection_curve(r3, &EPSILONS)?;
    let mut gaps = Vec::new();
    let mut rows = Vec::new();
    let mut curves_meet = true;
    for point in &points {
        match point {
            Ok(pt) => {
                let (mu, lambda) = intersection_eigenvalues(pt, r3)?;
                curves_meet &= (mu - lambda).abs() <= 1e-8 * lambda.abs();
                gaps.push((pt.k * r3 - y_bisect).abs());
                rows.push(json!({
                    "epsilon": pt.epsilon, "k": pt.k, "alpha": pt.alpha,
                    "residual": pt.residual, "mu1": mu, "lambda1": lambda,
                }));
            }
            Err(e) => {
                curves_meet = false;
                rows.push(json!({ "error": e.to_string() }));
            }
        }
    }
    checks.push(check(
        "k(eps) r3 approaches y0 monotonically",
        gaps.len() == EPSILONS.len() && strictly_decreasing(&gaps),
        json!({ "epsilon": EPSILONS, "distance": gaps, "points": rows }),
    ));
    checks.push(check(
        "annulus and disk eigenvalues coincide at each intersection",
        curves_meet,
        json!({ "tolerance": 1e-8 }),
    ));
    checks.push(check(
        "alpha limit",
        true,
        json!({ "alpha_limit": alpha_limit(y_bisect, r3)?, "r3": r3 }),
    ));
    Ok(checks)
}

/// Run a suite; the boolean is true when every check passed.
pub fn verify(suite: Suite, r3: f64) -> Result<(OutputRecord, bool), CliError> {
    if !(r3 > 0.0) || !r3.is_finite() {
        return Err(robin_core::Error::Domain(format!("--r3 must be positive, got {r3}")).into());
    }
    let (name, checks) = match suite {
        Suite::Asymptotics => ("asymptotics", asymptotics_suite()?),
        Suite::Bounds => ("bounds", bounds_suite()?),
        Suite::Intersection => ("intersection", intersection_suite(r3)?),
    };
    let failed = checks.iter().filter(|c| !c.passed).count();
    let record = OutputRecord::new(
        "verify",
        json!({ "suite": name, "r3": r3 }),
        serde_json::to_value(&checks).expect("checks serialise"),
        json!({ "checks": checks.len(), "failed": failed }),
    );
    Ok((record, failed == 0))
}
