//! Oblique-shock relations: the theta-beta-M relation, detachment limit and
//! exact Rankine-Hugoniot jumps.

use serde::{Deserialize, Serialize};

use super::state::FlowState;
use crate::error::{Error, Result};
use crate::roots::{bracketed_root, MAX_ITER, RESIDUAL_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShockBranch {
    #[default]
    Weak,
    Strong,
}

/// Sense in which the shock turns the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    /// Counter-clockwise, the shock lies at `flow angle + beta`.
    Ccw,
    /// Clockwise, the shock lies at `flow angle - beta`.
    Cw,
}

impl Turn {
    pub fn sign(self) -> f64 {
        match self {
            Turn::Ccw => 1.0,
            Turn::Cw => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObliqueShockSolution {
    pub upstream: FlowState,
    pub deflection_deg: f64,
    pub shock_angle_deg: f64,
    pub downstream: FlowState,
}

fn tbm_rhs(mach: f64, beta: f64, gamma: f64) -> f64 {
    let m2 = mach * mach;
    let s = beta.sin();
    2.0 / beta.tan() * (m2 * s * s - 1.0) / (m2 * (gamma + (2.0 * beta).cos()) + 2.0)
}

/// Deflection theta(beta) in radians for wave angle `beta` (radians).
pub fn deflection_angle(mach: f64, beta: f64, gamma: f64) -> f64 {
    tbm_rhs(mach, beta, gamma).atan()
}

/// Residual `tan(theta) - 2 cot(beta) (M^2 sin^2 beta - 1) / (M^2 (gamma + cos 2 beta) + 2)`.
pub fn theta_beta_m_residual(mach: f64, theta: f64, beta: f64, gamma: f64) -> f64 {
    theta.tan() - tbm_rhs(mach, beta, gamma)
}

/// Wave angle of maximum deflection and the detachment angle, both in radians.
pub fn max_deflection(mach: f64, gamma: f64) -> (f64, f64) {
    let m2 = mach * mach;
    let gp = gamma + 1.0;
    let disc = gp * (1.0 + 0.5 * (gamma - 1.0) * m2 + gp * m2 * m2 / 16.0);
    let sin2 = (0.25 * gp * m2 - 1.0 + disc.sqrt()) / (gamma * m2);
    let beta = sin2.sqrt().asin();
    (deflection_angle(mach, beta, gamma), beta)
}

/// Wave angle (degrees) of the attached oblique shock turning a Mach `mach`
/// stream by `theta_deg`.
pub fn theta_beta_m(mach: f64, theta_deg: f64, branch: ShockBranch, gamma: f64) -> Result<f64> {
    if !(mach > 1.0) {
        return Err(Error::SubsonicInput { mach });
    }
    if !(theta_deg >= 0.0) {
        return Err(Error::InvalidParams(format!("deflection {theta_deg} deg must be >= 0")));
    }
    let (theta_max, beta_max) = max_deflection(mach, gamma);
    let theta = theta_deg.to_radians();
    if theta >= theta_max {
        return Err(Error::DetachedShock {
            mach,
            theta_deg,
            theta_max_deg: theta_max.to_degrees(),
        });
    }
    let mu = (1.0 / mach).asin();
    if theta == 0.0 {
        return Ok(match branch {
            ShockBranch::Weak => mu.to_degrees(),
            ShockBranch::Strong => 90.0,
        });
    }
    let (lo, hi) = match branch {
        ShockBranch::Weak => (mu, beta_max),
        ShockBranch::Strong => (beta_max, std::f64::consts::FRAC_PI_2),
    };
    let f = |b: f64| theta_beta_m_residual(mach, theta, b, gamma);
    let beta = bracketed_root(f, lo, hi, RESIDUAL_TOL, MAX_ITER).ok_or_else(|| {
        Error::NoRegularSolution(format!("theta-beta-M bracket failed at M = {mach}, theta = {theta_deg}"))
    })?;
    Ok(beta.to_degrees())
}

/// Lab-frame unit normal of a shock line at angle `psi`, oriented along the
/// upstream velocity.
fn shock_normal(up: &FlowState, psi: f64) -> ([f64; 2], [f64; 2]) {
    let t = [psi.cos(), psi.sin()];
    let mut n = [psi.sin(), -psi.cos()];
    if up.u * n[0] + up.v * n[1] < 0.0 {
        n = [-n[0], -n[1]];
    }
    (t, n)
}

/// Downstream state behind a shock whose line makes lab angle `psi` (radians).
pub fn shock_jump(up: &FlowState, psi: f64) -> Result<FlowState> {
    let (t, n) = shock_normal(up, psi);
    let wn = up.u * n[0] + up.v * n[1];
    let wt = up.u * t[0] + up.v * t[1];
    let mn = wn / up.sound_speed();
    if !(mn > 1.0) {
        return Err(Error::SubsonicNormalMach { normal_mach: mn });
    }
    let g = up.gamma;
    let mn2 = mn * mn;
    let density_ratio = (g + 1.0) * mn2 / ((g - 1.0) * mn2 + 2.0);
    let pressure_ratio = 1.0 + 2.0 * g / (g + 1.0) * (mn2 - 1.0);
    let wn2 = wn / density_ratio;
    Ok(FlowState {
        rho: up.rho * density_ratio,
        u: wt * t[0] + wn2 * n[0],
        v: wt * t[1] + wn2 * n[1],
        p: up.p * pressure_ratio,
        gamma: g,
    })
}

/// Oblique shock at wave angle `shock_angle_deg` measured from the upstream
/// flow direction, turning the flow counter-clockwise.
pub fn oblique_shock_downstream(upstream: &FlowState, shock_angle_deg: f64) -> Result<ObliqueShockSolution> {
    oblique_shock(upstream, shock_angle_deg, Turn::Ccw)
}

pub fn oblique_shock(upstream: &FlowState, shock_angle_deg: f64, turn: Turn) -> Result<ObliqueShockSolution> {
    upstream.validate()?;
    let psi = upstream.flow_angle() + turn.sign() * shock_angle_deg.to_radians();
    let downstream = shock_jump(upstream, psi)?;
    let deflection = (downstream.flow_angle() - upstream.flow_angle()) * turn.sign();
    Ok(ObliqueShockSolution {
        upstream: *upstream,
        deflection_deg: deflection.to_degrees(),
        shock_angle_deg,
        downstream,
    })
}

/// Oblique shock turning `upstream` by `deflection_deg` in sense `turn`
/// (weak branch). Returns the solution and the shock line's lab angle (radians).
pub fn shock_for_deflection(upstream: &FlowState, deflection_deg: f64, turn: Turn) -> Result<(ObliqueShockSolution, f64)> {
    let beta = theta_beta_m(upstream.mach(), deflection_deg, ShockBranch::Weak, upstream.gamma)?;
    let sol = oblique_shock(upstream, beta, turn)?;
    let psi = upstream.flow_angle() + turn.sign() * beta.to_radians();
    Ok((sol, psi))
}

/// Largest relative Rankine-Hugoniot residual (mass, normal momentum,
/// tangential velocity, total enthalpy) across a line at lab angle `psi`.
pub fn rankine_hugoniot_residual(up: &FlowState, down: &FlowState, psi: f64) -> f64 {
    let (t, n) = shock_normal(up, psi);
    let wn1 = up.u * n[0] + up.v * n[1];
    let wn2 = down.u * n[0] + down.v * n[1];
    let wt1 = up.u * t[0] + up.v * t[1];
    let wt2 = down.u * t[0] + down.v * t[1];
    let mass1 = up.rho * wn1;
    let mass = (mass1 - down.rho * wn2).abs() / mass1.abs();
    let mom1 = up.rho * wn1 * wn1 + up.p;
    let mom = (mom1 - (down.rho * wn2 * wn2 + down.p)).abs() / mom1;
    let tang = (wt1 - wt2).abs() / up.speed();
    let h0 = (up.total_enthalpy() - down.total_enthalpy()).abs() / up.total_enthalpy();
    mass.max(mom).max(tang).max(h0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: f64 = 1.4;

    /// Plain bisection over the weak branch, independent of the safeguarded solver.
    fn bisect_beta(mach: f64, theta: f64) -> f64 {
        let mut lo = (1.0 / mach).asin();
        let mut hi = max_deflection(mach, G).1;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if deflection_angle(mach, mid, G) < theta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Detachment angle by scanning theta(beta) on a fine grid.
    fn scan_theta_max(mach: f64) -> f64 {
        let mu = (1.0 / mach).asin();
        let n = 200_000;
        (0..=n)
            .map(|k| mu + (std::f64::consts::FRAC_PI_2 - mu) * k as f64 / n as f64)
            .map(|b| deflection_angle(mach, b, G))
            .fold(f64::MIN, f64::max)
    }

    #[test]
    fn zero_deflection_is_mach_angle() {
        let b = theta_beta_m(2.0, 0.0, ShockBranch::Weak, G).unwrap();
        assert!((b - 30.0).abs() < 1e-12);
    }

    #[test]
    fn m4_theta20_matches_bisection() {
        let b = theta_beta_m(4.0, 20.0, ShockBranch::Weak, G).unwrap();
        let oracle = bisect_beta(4.0, 20f64.to_radians()).to_degrees();
        assert!((b - oracle).abs() < 1e-9, "{b} vs {oracle}");
        let r = theta_beta_m_residual(4.0, 20f64.to_radians(), b.to_radians(), G);
        assert!(r.abs() < 1e-12, "residual {r}");
    }

    #[test]
    fn strong_branch_is_larger() {
        let w = theta_beta_m(3.0, 15.0, ShockBranch::Weak, G).unwrap();
        let s = theta_beta_m(3.0, 15.0, ShockBranch::Strong, G).unwrap();
        assert!(s > w);
        assert!(theta_beta_m_residual(3.0, 15f64.to_radians(), s.to_radians(), G).abs() < 1e-12);
    }

    #[test]
    fn detachment_matches_scan() {
        for &m in &[1.5, 2.0, 3.5, 4.0] {
            let (tm, _) = max_deflection(m, G);
            assert!((tm - scan_theta_max(m)).abs() < 1e-9);
        }
        let err = theta_beta_m(2.0, 50.0, ShockBranch::Weak, G).unwrap_err();
        assert!(matches!(err, Error::DetachedShock { .. }));
        assert!(scan_theta_max(2.0).to_degrees() < 50.0);
    }

    #[test]
    fn normal_shock_pressure_ratio() {
        let up = FlowState::freestream(2.0, G);
        let sol = oblique_shock_downstream(&up, 90.0).unwrap();
        let m2 = 4.0;
        let closed = (2.0 * G * m2 - (G - 1.0)) / (G + 1.0);
        assert!((closed - 4.5).abs() < 1e-14);
        assert!((sol.downstream.p / up.p - closed).abs() < 1e-10);
        assert!(sol.downstream.v.abs() < 1e-14);
    }

    #[test]
    fn vanishing_strength_limit() {
        let up = FlowState::freestream(3.0, G);
        let mu = (1.0f64 / 3.0).asin().to_degrees();
        let sol = oblique_shock_downstream(&up, mu + 1e-7).unwrap();
        assert!((sol.downstream.p / up.p - 1.0).abs() < 1e-6);
        assert!((sol.downstream.rho / up.rho - 1.0).abs() < 1e-6);
        assert!(matches!(
            oblique_shock_downstream(&up, mu - 1e-3),
            Err(Error::SubsonicNormalMach { .. })
        ));
    }

    #[test]
    fn requested_deflection_reproduced() {
        let up = FlowState::freestream(4.0, G);
        let b = theta_beta_m(4.0, 20.0, ShockBranch::Weak, G).unwrap();
        let sol = oblique_shock_downstream(&up, b).unwrap();
        let defl = sol.downstream.v.atan2(sol.downstream.u).to_degrees();
        assert!((defl - 20.0).abs() < 1e-10, "{defl}");
        assert!(sol.downstream.p > up.p);
        assert!(sol.downstream.entropy() > up.entropy());
        let psi = b.to_radians();
        assert!(rankine_hugoniot_residual(&up, &sol.downstream, psi) < 1e-10);
        // Downstream normal Mach below one.
        let n = [psi.sin(), -psi.cos()];
        let d = sol.downstream;
        let mn2 = (d.u * n[0] + d.v * n[1]) / d.sound_speed();
        assert!(mn2 < 1.0 && 4.0 * psi.sin() > 1.0);
    }

    #[test]
    fn clockwise_turn_in_rotated_frame() {
        let up = FlowState::freestream(3.0, G).with_velocity(3.0, 0.3);
        let (sol, psi) = shock_for_deflection(&up, 12.0, Turn::Cw).unwrap();
        let turned = (sol.downstream.flow_angle() - up.flow_angle()).to_degrees();
        assert!((turned + 12.0).abs() < 1e-10);
        assert!(rankine_hugoniot_residual(&up, &sol.downstream, psi) < 1e-10);
    }
}
