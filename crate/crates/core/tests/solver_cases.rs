use ensemble_verify::analytic::{build_oblique_case, project_to_grid};
use ensemble_verify::gas::DEFAULT_GAMMA;
use ensemble_verify::grid::GridSpec;
use ensemble_verify::par::Exec;
use ensemble_verify::solver::{solve_steady, verify_order, AvKind, Manufactured, Problem, SchemeConfig, SchemeId, Solver};

#[test]
fn cir1_matches_oblique_shock_away_from_the_shock() {
    let grid = GridSpec::unit(100, 100).unwrap();
    let case = build_oblique_case(4.0, 20.0, DEFAULT_GAMMA, &grid).unwrap();
    let exact = project_to_grid(&case, &grid);
    let r = solve_steady(&SchemeConfig::new(SchemeId::Cir1), &case, &grid).unwrap();
    assert!(r.converged);
    let shock = &case.discontinuities[0];
    let (s, c) = shock.angle_deg.to_radians().sin_cos();
    let band = 6.0 * grid.hx();
    let mut checked = 0;
    let mut worst = 0.0f64;
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let (x, y) = (grid.x(i as isize), grid.y(j as isize));
            if ((x - shock.origin[0]) * s - (y - shock.origin[1]) * c).abs() < band {
                continue;
            }
            let e = exact.at(i, j)[0];
            worst = worst.max((r.field.at(i, j)[0] - e).abs() / e);
            checked += 1;
        }
    }
    assert!(checked > 7000, "{checked}");
    assert!(worst < 0.05, "{worst}");
}

#[test]
fn manufactured_residual_decays_monotonically_after_transient() {
    let m = Manufactured::default();
    let grid = GridSpec::unit(21, 21).unwrap();
    let problem: Problem = m.problem(&grid);
    let r = Solver::new(&SchemeConfig::new(SchemeId::Cir1), &problem, Exec::Sequential).unwrap().run().unwrap();
    assert!(r.converged);
    let h = &r.residual_history;
    let start = h.len() / 5;
    let bumps = h[start..].windows(2).filter(|w| w[1] > w[0] * (1.0 + 1e-9)).count();
    assert_eq!(bumps, 0, "{bumps} increases after iteration {start} of {}", h.len());
}

#[test]
fn first_and_second_order_schemes_hit_nominal_order() {
    let m = Manufactured::default();
    for cfg in [
        SchemeConfig::new(SchemeId::Cir1),
        SchemeConfig::new(SchemeId::Maccormack).with_av(AvKind::None, 0.0),
        SchemeConfig::new(SchemeId::Maccormack).with_av(AvKind::Fourth, 0.01),
    ] {
        let r = verify_order(&cfg, &m, &[21, 41, 81], Exec::best()).unwrap();
        let p = r.order.unwrap();
        assert!((p - cfg.order() as f64).abs() <= 0.3, "{}: {p}", cfg.label());
    }
}
