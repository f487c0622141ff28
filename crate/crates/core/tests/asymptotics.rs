use robin_core::asymptotics::{
    eval_f_expansion, predict_large_alpha, predict_small_alpha, step_diagnostics, ExpansionOrder,
};
use robin_core::secular::{scaled_entries, solve_lambda1, SecularProblem};
use robin_core::specfun::BesselOrder;

fn direct_f(k: f64, alpha: f64, r1: f64, r2: f64, d: u32) -> f64 {
    let e = scaled_entries(k, BesselOrder::for_dimension(d).unwrap(), r1, r2, alpha, alpha).unwrap();
    e.m11 * e.m22
}

#[test]
fn expansion_tracks_direct_product() {
    for d in [2u32, 3, 4] {
        for &(r1, r2) in &[(1.0, 2.0), (1.0, 2f64.sqrt())] {
            let mut errs = Vec::new();
            for k in [1e2, 1e3, 1e4] {
                let alpha = -k + 0.7;
                let exact = direct_f(k, alpha, r1, r2, d);
                let approx = eval_f_expansion(k, alpha, r1, r2, d, ExpansionOrder::Second).unwrap();
                let scale = (k + alpha).powi(2).max(1.0);
                let err = (exact - approx).abs() / scale;
                println!("d={d} r=({r1},{r2}) k={k}: exact={exact:.12e} approx={approx:.12e} err={err:.3e}");
                assert!(err < 5.0 / k, "d={d} k={k}: err {err}");
                errs.push(err);
            }
            // for odd d the half-integer series terminate and only rounding is left
            let roundoff = 1e4 * 1e4 * f64::EPSILON;
            assert!(errs[2] < errs[0] || errs[0] < roundoff, "{errs:?}");
        }
    }
}

#[test]
fn truncation_orders_improve_along_diagonal_free_path() {
    // away from α ≈ −k each extra order should cut the relative error
    let (r1, r2, d) = (1.0, 2.0, 3);
    let k = 200.0;
    let alpha = -0.3 * k;
    let exact = direct_f(k, alpha, r1, r2, d);
    let errs: Vec<f64> = [ExpansionOrder::Leading, ExpansionOrder::First, ExpansionOrder::Second]
        .iter()
        .map(|&o| ((eval_f_expansion(k, alpha, r1, r2, d, o).unwrap() - exact) / exact).abs())
        .collect();
    println!("{errs:?}");
    assert!(errs[1] < errs[0] && errs[2] < errs[1]);
}

#[test]
fn factorised_form_agrees() {
    for d in [2u32, 3] {
        let (r1, r2) = (1.0, 2.0);
        let mut prev = f64::INFINITY;
        for k in [1e2, 1e3, 1e4] {
            let alpha = -k + 0.4;
            let nd = f64::from(d - 1);
            let fact = (k + alpha - nd / (2.0 * r2)) * (k + alpha + nd / (2.0 * r1));
            let exp = eval_f_expansion(k, alpha, r1, r2, d, ExpansionOrder::Second).unwrap();
            let gap = (fact - exp).abs();
            println!("d={d} k={k}: factorised={fact:.6e} expansion={exp:.6e} gap={gap:.3e}");
            assert!(gap < prev || gap < 16.0 * k * k * f64::EPSILON, "gap {gap} after {prev}");
            prev = gap;
        }
        assert!(prev < 1e-2);
    }
}

#[test]
fn step_diagnostics_decrease() {
    let r2 = 2f64.sqrt();
    let p = SecularProblem::robin_shell(2, 1.0, r2, -1.0).unwrap();
    let mut prev: Option<[f64; 5]> = None;
    for alpha in [-1e2, -1e3, -1e4] {
        let sol = solve_lambda1(&p.with_alpha(alpha).unwrap()).unwrap();
        let s = step_diagnostics(sol.k, alpha, 2, r2).unwrap().as_array();
        if alpha == -1e3 {
            assert!(s[2].abs() <= 1e-3);
        }
        if let Some(prev) = prev {
            for (a, b) in s.iter().zip(prev.iter()) {
                assert!(a.abs() < b.abs(), "{s:?} vs {prev:?}");
            }
        }
        prev = Some(s);
    }
}

fn problems() -> Vec<SecularProblem> {
    vec![
        SecularProblem::ball(2, 1.0, -1.0).unwrap(),
        SecularProblem::ball(3, 1.0, -1.0).unwrap(),
        SecularProblem::robin_shell(2, 1.0, 2.0, -1.0).unwrap(),
        SecularProblem::robin_shell(2, 1.0, 2f64.sqrt(), -1.0).unwrap(),
        SecularProblem::robin_shell(3, 1.0, 2.0, -1.0).unwrap(),
        SecularProblem::robin_shell(3, 1.0, 2f64.sqrt(), -1.0).unwrap(),
        SecularProblem::neumann_robin_annulus(1.0, 2.0, -1.0).unwrap(),
        SecularProblem::neumann_robin_annulus(1.0, 2f64.sqrt(), -1.0).unwrap(),
    ]
}

#[test]
fn large_alpha_remainder_decreases() {
    for p in problems() {
        let mut prev = f64::INFINITY;
        for alpha in [-1e2, -1e3, -1e4] {
            let q = p.with_alpha(alpha).unwrap();
            let lambda = solve_lambda1(&q).unwrap().lambda1;
            let c1 = predict_large_alpha(&q, alpha).unwrap().linear_coefficient();
            let rem = ((lambda + alpha * alpha) / alpha - c1).abs();
            assert!(rem < prev, "{:?} alpha={alpha}: {rem} !< {prev}", q.kind());
            prev = rem;
        }
    }
}

#[test]
fn small_alpha_remainder_decreases() {
    for p in problems() {
        let mut prev = f64::INFINITY;
        for alpha in [-1e-2, -1e-3, -1e-4] {
            let q = p.with_alpha(alpha).unwrap();
            let lambda = solve_lambda1(&q).unwrap().lambda1;
            let s = predict_small_alpha(&q, alpha).unwrap().linear_coefficient();
            let rem = (lambda / alpha - s).abs();
            assert!(rem < prev, "{:?} alpha={alpha}: {rem} !< {prev}", q.kind());
            prev = rem;
        }
    }
}
