use crate::args::{CrossingArgs, EigArgs, Format, GeometryArgs, Kind, Partner, SweepArgs};
use crate::output::{sweep_csv, OutputRecord};
use crate::CliError;
use robin_core::explorer::{find_crossing, linear_grid, sweep};
use robin_core::geometry::{disk_radius_from_area, match_shell_to_ball, radii_from_summary, PlanarSummary};
use robin_core::secular::{solve_lambda1, ProblemKind, SecularProblem, K_TOLERANCE, RESIDUAL_TOLERANCE};
use robin_core::Error;
use serde_json::{json, Value};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn planar(g: &GeometryArgs, d: u32) -> Result<Option<PlanarSummary>, CliError> {
    match (g.area, g.outer_perimeter) {
        (None, None) => Ok(None),
        (Some(_), Some(_)) if d != 2 => Err(usage("--area/--outer-perimeter need --d 2")),
        (Some(a), Some(l)) => Ok(Some(PlanarSummary::new(l, a)?)),
        _ => Err(usage("--area and --outer-perimeter must be given together")),
    }
}

fn ball_radius(g: &GeometryArgs, d: u32, default: Option<f64>) -> Result<f64, CliError> {
    match (g.r, g.area) {
        (Some(_), Some(_)) => Err(usage("give either --r or --area for the ball, not both")),
        (Some(r), None) => Ok(r),
        (None, Some(a)) if d == 2 => Ok(disk_radius_from_area(a)?),
        (None, Some(_)) => Err(usage("--area needs --d 2")),
        (None, None) => default.ok_or_else(|| usage("ball radius missing: pass --r or --area")),
    }
}

fn annulus_radii(g: &GeometryArgs, d: u32) -> Result<Option<(f64, f64)>, CliError> {
    if let Some(summary) = planar(g, d)? {
        if g.r1.is_some() || g.r2.is_some() {
            return Err(usage("give radii either directly or through --area/--outer-perimeter"));
        }
        return Ok(Some(radii_from_summary(&summary)));
    }
    match (g.r1, g.r2) {
        (Some(r1), Some(r2)) => Ok(Some((r1, r2))),
        _ => Ok(None),
    }
}

fn build_problem(args: &EigArgs) -> Result<SecularProblem, CliError> {
    let g = &args.geometry;
    let p = match args.kind {
        Kind::Ball => {
            if g.outer_perimeter.is_some() || g.r1.is_some() || g.r2.is_some() {
                return Err(usage("a ball takes --r or --area only"));
            }
            SecularProblem::ball(args.d, ball_radius(g, args.d, None)?, args.alpha)?
        }
        Kind::Shell | Kind::AnnulusNr => {
            if g.r.is_some() {
                return Err(usage("--r applies to balls; use --r1/--r2"));
            }
            let (r1, r2) = annulus_radii(g, args.d)?
                .ok_or_else(|| usage("need --r1 and --r2, or --area with --outer-perimeter"))?;
            if args.kind == Kind::Shell {
                SecularProblem::robin_shell(args.d, r1, r2, args.alpha)?
            } else {
                if args.d != 2 {
                    return Err(Error::Domain("Neumann-Robin annuli are only supported for d = 2".into()).into());
                }
                SecularProblem::neumann_robin_annulus(r1, r2, args.alpha)?
            }
        }
    };
    Ok(p)
}

fn kind_name(kind: ProblemKind) -> &'static str {
    match kind {
        ProblemKind::Ball => "ball",
        ProblemKind::RobinShell => "shell",
        ProblemKind::NeumannRobinAnnulus => "annulus-nr",
    }
}

fn problem_json(p: &SecularProblem) -> Value {
    let g = p.geometry();
    json!({
        "kind": kind_name(p.kind()),
        "d": g.d(),
        "r1": g.r1(),
        "r2": g.r2(),
        "alpha": p.alpha(),
    })
}

pub fn eig(args: &EigArgs) -> Result<OutputRecord, CliError> {
    let p = build_problem(args)?;
    let sol = solve_lambda1(&p)?;
    Ok(OutputRecord::new(
        "eig",
        problem_json(&p),
        json!({ "lambda1": sol.lambda1, "k": sol.k }),
        json!({
            "residual": sol.residual,
            "scale": sol.scale,
            "bracket": [sol.bracket.0, sol.bracket.1],
            "iterations": sol.iterations,
            "upper_sign_changes": sol.upper_sign_changes,
            "k_tolerance": K_TOLERANCE,
            "residual_tolerance": RESIDUAL_TOLERANCE,
            "variational_bound": p.variational_bound(),
        }),
    ))
}

fn sweep_pair(args: &SweepArgs) -> Result<(SecularProblem, SecularProblem), CliError> {
    let g = &args.geometry;
    let d = args.d;
    if args.partner == Partner::AnnulusNr && d != 2 {
        return Err(Error::Domain("Neumann-Robin annuli are only supported for d = 2".into()).into());
    }
    let (r_ball, radii) = match planar(g, d)? {
        Some(summary) => {
            if g.r.is_some() || g.r1.is_some() || g.r2.is_some() {
                return Err(usage("give radii either directly or through --area/--outer-perimeter"));
            }
            (disk_radius_from_area(summary.area())?, radii_from_summary(&summary))
        }
        None => {
            let r_ball = ball_radius(g, d, Some(1.0))?;
            let r1 = g.r1.ok_or_else(|| usage("partner needs --r1 (and optionally --r2)"))?;
            let r2 = match g.r2 {
                Some(r2) => r2,
                None => match_shell_to_ball(d, r_ball, r1)?.r2(),
            };
            (r_ball, (r1, r2))
        }
    };
    let ball = SecularProblem::ball(d, r_ball, 0.0)?;
    let partner = match args.partner {
        Partner::Shell => SecularProblem::robin_shell(d, radii.0, radii.1, 0.0)?,
        Partner::AnnulusNr => SecularProblem::neumann_robin_annulus(radii.0, radii.1, 0.0)?,
    };
    Ok((ball, partner))
}

/// Sweep output: the record (JSON) or the CSV text, plus per-row diagnostics for stderr.
pub enum SweepOutput {
    Json(OutputRecord),
    Csv { text: String, notes: Vec<String> },
}

pub fn sweep_cmd(args: &SweepArgs) -> Result<SweepOutput, CliError> {
    if args.steps < 2 {
        return Err(usage(format!("--steps must be at least 2, got {}", args.steps)));
    }
    let (ball, partner) = sweep_pair(args)?;
    let grid = linear_grid(args.alpha_end, args.alpha_start, args.steps);
    let table = sweep(&ball, &partner, &grid)?;
    let bound_violations = table.rows.iter().filter(|r| !r.bound_ok).count();
    match args.format {
        Format::Csv => {
            let mut notes: Vec<String> = table
                .rows
                .iter()
                .filter_map(|r| r.error.as_ref().map(|e| format!("alpha={:e}: {e}", r.alpha)))
                .collect();
            if bound_violations > 0 {
                notes.push(format!("{bound_violations} rows violate the variational bound"));
            }
            Ok(SweepOutput::Csv { text: sweep_csv(&table), notes })
        }
        Format::Json => Ok(SweepOutput::Json(OutputRecord::new(
            "sweep",
            json!({
                "ball": problem_json(&ball),
                "partner": problem_json(&partner),
                "alpha_start": args.alpha_start,
                "alpha_end": args.alpha_end,
                "steps": args.steps,
            }),
            serde_json::to_value(&table.rows).expect("rows serialise"),
            json!({
                "sign_changes": table.sign_changes().len(),
                "failures": table.failures(),
                "bound_violations": bound_violations,
                "k_tolerance": K_TOLERANCE,
                "residual_tolerance": RESIDUAL_TOLERANCE,
            }),
        ))),
    }
}

pub fn crossing(args: &CrossingArgs) -> Result<OutputRecord, CliError> {
    if !(args.alpha_lo < args.alpha_hi) {
        return Err(usage(format!(
            "need --alpha-lo < --alpha-hi, got {} and {}",
            args.alpha_lo, args.alpha_hi
        )));
    }
    if args.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let report = find_crossing(args.d, args.r_ball, args.r1, (args.alpha_lo, args.alpha_hi), args.samples)?;
    let shell = match_shell_to_ball(args.d, args.r_ball, args.r1)?;
    Ok(OutputRecord::new(
        "crossing",
        json!({
            "d": args.d,
            "r_ball": args.r_ball,
            "r1": args.r1,
            "r2": shell.r2(),
            "alpha_lo": args.alpha_lo,
            "alpha_hi": args.alpha_hi,
            "samples": args.samples,
        }),
        json!({
            "alpha_cross": report.alpha_cross,
            "certified": report.certified,
            "bracket": report.bracket.map(|(a, b)| [a, b]),
        }),
        json!({
            "sign_changes": report.sign_changes,
            "alpha_tolerance": robin_core::explorer::CROSSING_TOLERANCE,
            "failures": report.samples.failures(),
        }),
    ))
}
