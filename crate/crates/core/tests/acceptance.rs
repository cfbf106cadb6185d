use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use ensemble_verify::analytic::{build_edney1, build_edney6, AnalyticField, RampConvention};
use ensemble_verify::concentration::{mc_orthogonality, McParams};
use ensemble_verify::estimators::{angle_bound, hypercircle_estimate, AngleConstant};
use ensemble_verify::gas::{
    oblique_shock, prandtl_meyer_max, prandtl_meyer_nu, rankine_hugoniot_residual, shock_jump, theta_beta_m,
    theta_beta_m_residual, FlowState, ShockBranch, Turn, DEFAULT_GAMMA,
};
use ensemble_verify::geometry::GridVector;
use ensemble_verify::grid::GridSpec;
use ensemble_verify::harness::{run_experiment, ExperimentConfig, ExperimentOutput};
use ensemble_verify::par::Exec;
use ensemble_verify::solver::{verify_order, Manufactured, Problem, SchemeConfig, SchemeId, Solver};
use ensemble_verify::truncation::stencil_d1_sixth;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} {id:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }

    fn info(&self, id: &str, detail: String) {
        println!("INFO {id:>2} {detail}");
    }
}

fn gasdynamics(r: &mut Report) {
    let t = Instant::now();
    let g = DEFAULT_GAMMA;
    let mut tbm = 0.0f64;
    let mut rh = 0.0f64;
    for &m in &[1.5, 2.0, 3.0, 4.0, 6.0, 10.0] {
        for &theta in &[2.0, 5.0, 10.0, 15.0, 20.0] {
            let Ok(beta) = theta_beta_m(m, theta, ShockBranch::Weak, g) else { continue };
            tbm = tbm.max(theta_beta_m_residual(m, theta.to_radians(), beta.to_radians(), g).abs());
            let up = FlowState::freestream(m, g);
            let s = oblique_shock(&up, beta, Turn::Ccw).unwrap();
            rh = rh.max(rankine_hugoniot_residual(&up, &s.downstream, beta.to_radians()));
        }
    }
    let up = FlowState::freestream(2.0, g);
    let ratio = shock_jump(&up, std::f64::consts::FRAC_PI_2).unwrap().p / up.p;
    let nu1 = prandtl_meyer_nu(1.0, g).unwrap();
    let nu_max = prandtl_meyer_max(g);
    let closed = 90.0 * (6.0f64.sqrt() - 1.0);
    let nu_far = prandtl_meyer_nu(1e9, g).unwrap();
    let ok = tbm < 1e-12
        && rh < 1e-10
        && (ratio - 4.5).abs() <= 1e-10
        && nu1.abs() < 1e-14
        && (nu_max - closed).abs() < 1e-12
        && (nu_max - nu_far).abs() < 1e-6;
    r.line(
        "1",
        "gas-dynamics exactness",
        ok,
        format!(
            "theta-beta-M residual {tbm:.1e} (< 1e-12), RH residual {rh:.1e} (< 1e-10), normal-shock p2/p1 at M=2 {ratio:.15} (4.5 +- 1e-10), nu(1) = {nu1:.1e}, nu_max {nu_max:.12} deg vs 90(sqrt6-1) {closed:.12}, nu(1e9) gap {:.1e}, {:.3}s",
            nu_max - nu_far,
            t.elapsed().as_secs_f64()
        ),
    );
}

fn stencil(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let weights = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0];
    for degree in 0..=6 {
        for _ in 0..20 {
            let coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-3.0..3.0)).collect();
            let h = rng.random_range(0.01..0.5);
            let x0 = rng.random_range(-2.0..2.0);
            let xs: Vec<f64> = (0..13).map(|k| x0 + k as f64 * h).collect();
            let f: Vec<f64> = xs.iter().map(|&x| coeffs.iter().rev().fold(0.0, |a, c| a * x + c)).collect();
            for k in 3..10 {
                let exact: f64 = coeffs.iter().enumerate().skip(1).map(|(p, c)| p as f64 * c * xs[k].powi(p as i32 - 1)).sum();
                let scale = weights.iter().zip(&f[k - 3..=k + 3]).map(|(w, v)| (w * v).abs()).sum::<f64>() / (60.0 * h);
                let got = stencil_d1_sixth(&f, k, h).unwrap();
                worst = worst.max((got - exact).abs() / scale.max(exact.abs()).max(1e-300));
            }
        }
    }
    let err = |n: usize| {
        let h = 1.0 / n as f64;
        let f: Vec<f64> = (0..=n + 6).map(|k| (k as f64 * h).sin()).collect();
        (3..=n + 3)
            .map(|k| (stencil_d1_sixth(&f, k, h).unwrap() - (k as f64 * h).cos()).abs())
            .fold(0.0, f64::max)
    };
    let ratio = err(16) / err(32);
    let ok = worst < 1e-12 && (ratio - 64.0).abs() <= 6.4;
    r.line(
        "2",
        "sixth-order stencil",
        ok,
        format!(
            "scaled polynomial error through degree 6 {worst:.1e} (< 1e-12), sin error ratio h=1/16 -> 1/32 {ratio:.2} (64 +- 6.4), {:.3}s",
            t.elapsed().as_secs_f64()
        ),
    );
}

fn references(r: &mut Report) {
    let t = Instant::now();
    let grid = GridSpec::unit(100, 100).unwrap();
    let e1 = build_edney1(4.0, 20.0, 15.0, DEFAULT_GAMMA, &grid);
    let e6 = build_edney6(3.5, 15.0, 25.0, RampConvention::Absolute, DEFAULT_GAMMA, &grid);
    let describe = |f: &Result<AnalyticField, ensemble_verify::Error>| match f {
        Ok(f) => {
            let m = f.residuals;
            (
                m.slip_pressure < 1e-10 && m.slip_direction_rad < 1e-10 && m.rankine_hugoniot_max < 1e-10,
                format!(
                    "slip dp {:.1e}, slip dtheta {:.1e}, RH {:.1e}, {} regions",
                    m.slip_pressure,
                    m.slip_direction_rad,
                    m.rankine_hugoniot_max,
                    f.regions.len()
                ),
            )
        }
        Err(e) => (false, format!("build failed: {e}")),
    };
    let (ok1, d1) = describe(&e1);
    let (ok6, d6) = describe(&e6);
    r.line(
        "3",
        "analytic references",
        ok1 && ok6,
        format!(
            "Edney-I M=4 20/15: {d1}; Edney-VI M=3.5 15/25: {d6} (all < 1e-10), {:.3}s",
            t.elapsed().as_secs_f64()
        ),
    );
}

fn solver_sanity(r: &mut Report) {
    let t = Instant::now();
    let grid = GridSpec::unit(20, 20).unwrap();
    let case = AnalyticField::uniform("uniform", FlowState::freestream(3.0, DEFAULT_GAMMA));
    let problem = Problem::from_case(&case, &grid).unwrap();
    let mut fs = Vec::new();
    let mut fs_ok = true;
    for id in SchemeId::ALL {
        let cfg = SchemeConfig::new(id);
        let mut s = Solver::new(&cfg, &problem, Exec::best()).unwrap();
        for _ in 0..25 {
            s.step().unwrap();
        }
        let d = s.field().max_abs_diff(&problem.initial);
        fs_ok &= d <= 1e-12;
        fs.push(format!("{} {d:.1e}", id.name()));
    }
    let m = Manufactured::default();
    let mut orders = Vec::new();
    let mut ord_ok = true;
    for id in SchemeId::ALL {
        let cfg = SchemeConfig::new(id);
        match verify_order(&cfg, &m, &[21, 41, 81], Exec::best()) {
            Ok(res) => {
                let p = res.order.unwrap_or(f64::NAN);
                ord_ok &= (p - cfg.order() as f64).abs() <= 0.3;
                orders.push(format!("{} {p:.2}/{}", cfg.label(), cfg.order()));
            }
            Err(e) => {
                ord_ok = false;
                orders.push(format!("{} failed: {e}", cfg.label()));
            }
        }
    }
    r.line(
        "4",
        "solver sanity",
        fs_ok && ord_ok,
        format!(
            "freestream drift after 25 steps [{}] (<= 1e-12); observed/nominal order on 21/41/81 [{}] (+- 0.3), {:.1}s",
            fs.join(", "),
            orders.join(", "),
            t.elapsed().as_secs_f64()
        ),
    );
}

fn ensemble(r: &mut Report, out: &Path) -> Option<ExperimentOutput> {
    let t = Instant::now();
    let cfg = ExperimentConfig {
        out: out.to_path_buf(),
        ..Default::default()
    };
    let res = match run_experiment(&cfg, Exec::best()) {
        Ok(res) => res,
        Err(e) => {
            r.line("5", "Edney-I ensemble", false, format!("pipeline failed: {e}"));
            return None;
        }
    };
    let secs = t.elapsed().as_secs_f64();
    let s = &res.report.summary;
    let k = res.report.ids.len();
    let dk = s.dk_max_effectivity.unwrap();
    let w = s.width_effectivity.unwrap();
    let unconverged = res.summary.members.iter().filter(|m| !m.converged).count();
    let ok = k >= 5 && s.dk_max_holds_all && dk.min >= 1.0 && dk.max <= 3.0 && w.min >= 1.0 && w.max <= 3.0 && secs <= 900.0;
    r.line(
        "5",
        "Edney-I ensemble 100x100",
        ok,
        format!(
            "{k} members ({unconverged} unconverged), dk_max >= true norm for all: {}, dk_max I_eff [{:.3}, {:.3}] and width I_eff [{:.3}, {:.3}] (within [1, 3]), {secs:.1}s (<= 900s)",
            s.dk_max_holds_all, dk.min, dk.max, w.min, w.max
        ),
    );
    let (a, b) = (s.alpha.unwrap(), s.beta.unwrap());
    let frac = s.alpha_ge_beta_third_fraction.unwrap();
    let soft = (50.0..=70.0).contains(&b.mean) && (20.0..=55.0).contains(&a.mean) && frac >= 0.9;
    r.line(
        "5s",
        "Edney-I soft targets",
        soft,
        format!(
            "mean beta {:.2} deg (50-70), mean alpha {:.2} deg (20-55), alpha >= beta/3 for {:.1}% of {} pairs (>= 90%)",
            b.mean,
            a.mean,
            100.0 * frac,
            a.count
        ),
    );
    Some(res)
}

fn angle_bound_check(r: &mut Report, res: Option<&ExperimentOutput>) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    let n = 100_000;
    for _ in 0..n {
        let r1: f64 = rng.random_range(1e-3..10.0);
        let r2: f64 = rng.random_range(1e-3..10.0);
        let alpha: f64 = rng.random_range(1e-3..180.0);
        let a = alpha.to_radians();
        let d = ((r1 - r2 * a.cos()).powi(2) + (r2 * a.sin()).powi(2)).sqrt();
        let bound = angle_bound(d, alpha, AngleConstant::Exact).unwrap();
        let big = r1.max(r2);
        if bound < big {
            violations += 1;
        }
        tightest = tightest.min(bound / big);
    }
    let (ok_cfd, cfd) = match res {
        Some(res) => {
            let eff: Vec<f64> = res.report.solutions.iter().filter_map(|s| s.angle_bound_beta_effectivity).collect();
            let lo = eff.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = eff.iter().cloned().fold(0.0, f64::max);
            let pairs: Vec<f64> = res.report.pairs.iter().filter_map(|p| p.angle_beta.as_ref()?.effectivity).collect();
            let inside = pairs.iter().filter(|v| (0.7..=6.0).contains(*v)).count();
            r.info(
                "6",
                format!(
                    "per-pair beta/3 effectivity [{:.3}, {:.3}], {inside} of {} pairs within [0.7, 6]",
                    pairs.iter().cloned().fold(f64::INFINITY, f64::min),
                    pairs.iter().cloned().fold(0.0, f64::max),
                    pairs.len()
                ),
            );
            (
                eff.len() == res.report.ids.len() && lo >= 0.7 && hi <= 6.0,
                format!("per-member beta/3 effectivity [{lo:.3}, {hi:.3}] (within [0.7, 6])"),
            )
        }
        None => (false, "no ensemble available".to_string()),
    };
    r.line(
        "6",
        "angle-based bound",
        violations == 0 && ok_cfd,
        format!(
            "{violations} violations over {n} random planar pairs with sqrt(5)/2 (min bound/norm {tightest:.4}); {cfd}, {:.2}s",
            t.elapsed().as_secs_f64()
        ),
    );
}

fn hypercircle(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let dim = rng.random_range(2..200);
        let a: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut b: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let aa: f64 = a.iter().map(|x| x * x).sum();
        let ab: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        for (y, x) in b.iter_mut().zip(&a) {
            *y -= ab / aa * x;
        }
        let scale = rng.random_range(0.1..10.0);
        let (ga, gb) = (GridVector::from_values(a), GridVector::from_values(b).scaled(scale));
        let d = ga.sub(&gb).unwrap().norm();
        let mid = ga.sub(&gb.scaled(-1.0)).unwrap().scaled(0.5).norm();
        worst = worst.max((hypercircle_estimate(d) - mid).abs());
    }
    r.line(
        "7",
        "hypercircle",
        worst < 1e-12,
        format!(
            "max |d/2 - midpoint error| over 1000 orthogonal pairs {worst:.1e} (< 1e-12), {:.3}s",
            t.elapsed().as_secs_f64()
        ),
    );
}

fn concentration(r: &mut Report) {
    let t = Instant::now();
    let mut ok = true;
    let mut rows = Vec::new();
    for &dim in &[100, 1_000, 10_000] {
        for &delta in &[0.01, 0.05, 0.1] {
            let res = mc_orthogonality(&McParams::new(dim, 1_000_000, delta, 2024), Exec::best()).unwrap();
            ok &= res.within_three_sigma;
            rows.push(format!("N={dim} d={delta}: {:.3e}<={:.3e}", res.empirical, res.bound));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    r.line(
        "8",
        "measure concentration",
        ok && secs < 60.0,
        format!("10^6 samples each, empirical within bound + 3 sigma [{}], {secs:.1}s (< 60s)", rows.join(", ")),
    );
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().display().to_string(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn determinism(r: &mut Report, out: &Path, first_ok: bool) {
    let t = Instant::now();
    if !first_ok {
        r.line("9", "determinism", false, "first ensemble run failed".into());
        return;
    }
    let before = snapshot(out);
    let cfg = ExperimentConfig {
        out: out.to_path_buf(),
        ..Default::default()
    };
    let again = run_experiment(&cfg, Exec::best());
    let after = snapshot(out);
    let differing: Vec<&String> = before.keys().filter(|k| before.get(*k) != after.get(*k)).collect();
    let p = McParams::new(1_000, 100_000, 0.05, 99);
    let (m1, m2) = (mc_orthogonality(&p, Exec::Parallel).unwrap(), mc_orthogonality(&p, Exec::Sequential).unwrap());
    let ok = again.is_ok() && differing.is_empty() && before.len() == after.len() && m1 == m2;
    r.line(
        "9",
        "determinism",
        ok,
        format!(
            "rerun of the ensemble reproduced {} of {} files byte for byte; seeded MC identical across modes: {}, {:.1}s",
            before.len() - differing.len(),
            before.len(),
            m1 == m2,
            t.elapsed().as_secs_f64()
        ),
    );
}

fn main() {
    let mut r = Report { failed: 0 };
    let dir = tempfile::tempdir().unwrap();
    gasdynamics(&mut r);
    stencil(&mut r);
    references(&mut r);
    hypercircle(&mut r);
    concentration(&mut r);
    solver_sanity(&mut r);
    let res = ensemble(&mut r, dir.path());
    angle_bound_check(&mut r, res.as_ref());
    determinism(&mut r, dir.path(), res.is_some());
    println!("{} criteria failed", r.failed);
    if r.failed > 0 {
        std::process::exit(1);
    }
}
