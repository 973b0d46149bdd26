use polycast::bounds::*;

/// Newton iteration on a polynomial given by value and derivative closures.
fn newton(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, mut x: f64) -> f64 {
    for _ in 0..100 {
        let step = f(x) / df(x);
        x -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    x
}

#[test]
fn volume_cases_match_newton_roots() {
    for (cb, rhs) in [(solve_case_i(), 4.0 / 3.0), (solve_case_iia(), 2.0 / 3.0), (solve_case_iib_pos(), 2.0 / 3.0)] {
        let r = newton(|r| 2.0 * r * r * r - 2.0 * r - rhs, |r| 6.0 * r * r - 2.0, 1.5);
        assert!((cb.root - r).abs() < 1e-12, "{:?}", cb.case);
        assert!(cb.trace.residual < 1e-10);
        assert!(cb.root > 1.0 && cb.root < 2.0);
        assert!((cb.cross_check.unwrap() - cb.root).abs() < 1e-9);
        assert!(cb.matches_reference);
    }
    assert!((solve_case_i().root - 1.240011810).abs() < 1e-8);
    assert!((solve_case_iia().root - 1.137158043).abs() < 1e-8);
}

#[test]
fn volume_residuals_are_monotone() {
    for rhs in [4.0 / 3.0, 2.0 / 3.0] {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=10_000 {
            let r = 1.0 + i as f64 * 1e-4;
            let v = volume_residual(r, rhs);
            assert!(v > prev);
            prev = v;
        }
    }
    for form in [BallCapForm::Exact, BallCapForm::CubeTerm] {
        for k in 0..=20 {
            let z = -(k as f64) / 20.0;
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=2_000 {
                let r = 1.0 + i as f64 * 5e-4;
                let v = iib_neg_residual(r, z, form);
                assert!(v >= prev, "z {z} r {r}");
                prev = v;
            }
        }
    }
}

/// Brute-force minimum of the effective IIb-neg bound over 10^6 + 1 values of z.
fn dense_grid(form: BallCapForm) -> (f64, f64) {
    let n = 1_000_000;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..=n {
        let z = -1.0 + i as f64 / n as f64;
        let g = iib_neg_effective(z, form);
        if g < best.0 {
            best = (g, z);
        }
    }
    best
}

#[test]
fn iib_neg_against_dense_grid_and_closed_form() {
    let cb = solve_case_iib_neg();
    let z0 = cb.z0.unwrap();
    assert!((cb.root - 1.07218989).abs() < 1e-6);
    assert!(cb.trace.residual < 1e-10);

    let (g, gz) = dense_grid(BallCapForm::Exact);
    assert!((g - cb.root).abs() < 1e-6, "grid {g} vs {}", cb.root);
    assert!(cb.root <= g + 1e-12);
    assert!((gz - z0).abs() < 1e-5);

    // At the minimum sqrt(R^2 - z^2) = 1, so R^2 = 1 + z^2 and the equality
    // becomes 2 z^2 = 2/3 + z - z^3/3, i.e. z^3/3 + 2 z^2 - z - 2/3 = 0.
    let zc = newton(
        |z| z * z * z / 3.0 + 2.0 * z * z - z - 2.0 / 3.0,
        |z| z * z + 4.0 * z - 1.0,
        -0.4,
    );
    assert!((zc - z0).abs() < 1e-9, "{zc} vs {z0}");
    assert!(((1.0 + zc * zc).sqrt() - cb.root).abs() < 1e-12);
}

#[test]
fn cube_term_variant_does_not_reproduce() {
    let cmp = compare_iib_neg_forms();
    assert_eq!(cmp.reproducing, Some(BallCapForm::Exact));
    let (g, _) = dense_grid(BallCapForm::CubeTerm);
    assert!((g - cmp.cube_term.root).abs() < 1e-6);
    assert!((cmp.cube_term.root - 1.07218989).abs() > 1e-3);
}

#[test]
fn coarse_grid_minimum_is_close() {
    let cb = solve_case_iib_neg();
    let coarse = (0..=10_000)
        .map(|i| iib_neg_effective(-1.0 + i as f64 * Z_GRID_STEP, BallCapForm::Exact))
        .fold(f64::INFINITY, f64::min);
    assert!(coarse >= cb.root - 1e-12);
    assert!(coarse - cb.root < 1e-4);
}

#[test]
fn iib_neg_surface_is_continuous() {
    let mut prev = iib_neg_root_at(-1.0, BallCapForm::Exact);
    for i in 1..=100_000 {
        let z = -1.0 + i as f64 * 1e-5;
        let r = iib_neg_root_at(z, BallCapForm::Exact);
        assert!((r - prev).abs() < 1e-3, "jump at z {z}");
        prev = r;
    }
}

#[test]
fn chain_and_theorem() {
    let c = chain_bound();
    assert!((c.root - 1.25f64.sqrt()).abs() < 1e-15);
    assert!((c.root - 1.118033989).abs() < 1e-9);
    let table = BoundsTable::compute();
    assert_eq!(table.cases.len(), 5);
    assert!(table.all_match());
    let neg = table.cases.iter().find(|c| c.case == CaseId::IIbNeg).unwrap();
    assert_eq!(table.theorem.root, neg.root);
    for c in table.cases.iter().filter(|c| c.case != CaseId::IIbNeg) {
        assert!(c.root > table.theorem.root);
    }
}
