//! Prandtl-Meyer function and isentropic simple-wave turning.

use super::state::FlowState;
use crate::error::{Error, Result};
use crate::roots::{bracketed_root, MAX_ITER};

fn nu_rad(mach: f64, gamma: f64) -> f64 {
    let k = ((gamma + 1.0) / (gamma - 1.0)).sqrt();
    let m = (mach * mach - 1.0).max(0.0);
    k * (m / (k * k)).sqrt().atan() - m.sqrt().atan()
}

/// Prandtl-Meyer angle in degrees.
pub fn prandtl_meyer_nu(mach: f64, gamma: f64) -> Result<f64> {
    if !(mach >= 1.0) {
        return Err(Error::SubsonicInput { mach });
    }
    Ok(nu_rad(mach, gamma).to_degrees())
}

/// Limit of nu as M -> infinity, in degrees.
pub fn prandtl_meyer_max(gamma: f64) -> f64 {
    (std::f64::consts::FRAC_PI_2 * (((gamma + 1.0) / (gamma - 1.0)).sqrt() - 1.0)).to_degrees()
}

/// Mach number whose Prandtl-Meyer angle is `nu_deg`.
pub fn inverse_prandtl_meyer(nu_deg: f64, gamma: f64) -> Result<f64> {
    let nu_max = prandtl_meyer_max(gamma);
    if !(nu_deg >= 0.0 && nu_deg < nu_max) {
        return Err(Error::InvalidParams(format!(
            "Prandtl-Meyer angle {nu_deg} deg outside [0, {nu_max})"
        )));
    }
    if nu_deg == 0.0 {
        return Ok(1.0);
    }
    let target = nu_deg.to_radians();
    let mut hi = 2.0;
    while nu_rad(hi, gamma) < target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::InvalidParams(format!("Prandtl-Meyer inverse diverged for {nu_deg}")));
        }
    }
    bracketed_root(|m| nu_rad(m, gamma) - target, 1.0, hi, 1e-15, MAX_ITER)
        .ok_or_else(|| Error::InvalidParams(format!("Prandtl-Meyer inverse failed for {nu_deg}")))
}

/// Isentropic state of the same stagnation conditions at Mach `mach`, moving
/// in direction `angle` (radians).
pub fn isentropic_state(up: &FlowState, mach: f64, angle: f64) -> FlowState {
    let g = up.gamma;
    let m1 = up.mach();
    let t_ratio = (1.0 + 0.5 * (g - 1.0) * m1 * m1) / (1.0 + 0.5 * (g - 1.0) * mach * mach);
    let rho = up.rho * t_ratio.powf(1.0 / (g - 1.0));
    let p = up.p * t_ratio.powf(g / (g - 1.0));
    let a = (g * p / rho).sqrt();
    FlowState {
        rho,
        u: 0.0,
        v: 0.0,
        p,
        gamma: g,
    }
    .with_velocity(mach * a, angle)
}

/// Isentropic expansion turning `up` by `turn_deg` (> 0) in either sense.
/// `ccw` selects the sense of rotation of the velocity vector.
pub fn expand(up: &FlowState, turn_deg: f64, ccw: bool) -> Result<FlowState> {
    let nu1 = prandtl_meyer_nu(up.mach(), up.gamma)?;
    let m2 = inverse_prandtl_meyer(nu1 + turn_deg, up.gamma)?;
    let sign = if ccw { 1.0 } else { -1.0 };
    Ok(isentropic_state(up, m2, up.flow_angle() + sign * turn_deg.to_radians()))
}
