use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GAMMA: f64 = 1.4;

/// Conservative variables (rho, rho*u, rho*v, rho*E).
pub type Conserved = [f64; 4];

/// Primitive state of a calorically perfect gas.
///
/// Nondimensional throughout: the freestream has unit density and pressure
/// `1/gamma`, hence unit sound speed, and its speed equals its Mach number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub gamma: f64,
}

impl FlowState {
    pub fn new(rho: f64, u: f64, v: f64, p: f64, gamma: f64) -> Result<Self> {
        let s = FlowState { rho, u, v, p, gamma };
        s.validate()?;
        Ok(s)
    }

    /// Freestream at `mach` flowing along +x.
    pub fn freestream(mach: f64, gamma: f64) -> Self {
        FlowState {
            rho: 1.0,
            u: mach,
            v: 0.0,
            p: 1.0 / gamma,
            gamma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rho > 0.0
            && self.p > 0.0
            && self.gamma > 1.0
            && self.u.is_finite()
            && self.v.is_finite()
            && self.rho.is_finite()
            && self.p.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::NonPhysicalState {
                node: None,
                reason: format!(
                    "rho = {}, p = {}, gamma = {}, u = {}, v = {}",
                    self.rho, self.p, self.gamma, self.u, self.v
                ),
            })
        }
    }

    pub fn sound_speed(&self) -> f64 {
        (self.gamma * self.p / self.rho).sqrt()
    }

    pub fn speed(&self) -> f64 {
        self.u.hypot(self.v)
    }

    pub fn mach(&self) -> f64 {
        self.speed() / self.sound_speed()
    }

    /// Flow direction in radians, counter-clockwise from +x.
    pub fn flow_angle(&self) -> f64 {
        self.v.atan2(self.u)
    }

    /// Specific internal energy e = p / (rho (gamma - 1)).
    pub fn internal_energy(&self) -> f64 {
        self.p / (self.rho * (self.gamma - 1.0))
    }

    /// Specific enthalpy h = gamma e.
    pub fn enthalpy(&self) -> f64 {
        self.gamma * self.internal_energy()
    }

    /// Total enthalpy h0 = h + |V|^2 / 2.
    pub fn total_enthalpy(&self) -> f64 {
        self.enthalpy() + 0.5 * (self.u * self.u + self.v * self.v)
    }

    /// Specific total energy E = e + |V|^2 / 2.
    pub fn total_energy(&self) -> f64 {
        self.internal_energy() + 0.5 * (self.u * self.u + self.v * self.v)
    }

    /// Entropy up to an additive constant, s / c_v = ln(p / rho^gamma).
    pub fn entropy(&self) -> f64 {
        (self.p / self.rho.powf(self.gamma)).ln()
    }

    /// Same thermodynamic state moving at `speed` in direction `angle` (radians).
    pub fn with_velocity(&self, speed: f64, angle: f64) -> Self {
        FlowState {
            u: speed * angle.cos(),
            v: speed * angle.sin(),
            ..*self
        }
    }

    pub fn to_conserved(&self) -> Conserved {
        primitive_to_conserved(self)
    }
}

pub fn primitive_to_conserved(s: &FlowState) -> Conserved {
    let ke = 0.5 * (s.u * s.u + s.v * s.v);
    let rho_e = s.p / (s.gamma - 1.0) + s.rho * ke;
    [s.rho, s.rho * s.u, s.rho * s.v, rho_e]
}

pub fn conserved_to_primitive(q: &Conserved, gamma: f64) -> Result<FlowState> {
    let rho = q[0];
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::NonPhysicalState {
            node: None,
            reason: format!("density {rho}"),
        });
    }
    let u = q[1] / rho;
    let v = q[2] / rho;
    let p = (gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v));
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::NonPhysicalState {
            node: None,
            reason: format!("pressure {p}"),
        });
    }
    Ok(FlowState { rho, u, v, p, gamma })
}

/// Pressure from conservative variables without validation.
#[inline]
pub fn pressure(q: &Conserved, gamma: f64) -> f64 {
    (gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn conserved_examples() {
        let s = FlowState::new(1.0, 0.0, 0.0, 1.0, 1.4).unwrap();
        let close = |a: Conserved, b: Conserved| a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-14);
        assert!(close(primitive_to_conserved(&s), [1.0, 0.0, 0.0, 2.5]));
        let s = FlowState::new(1.0, 1.0, 0.0, 1.0, 1.4).unwrap();
        assert!(close(primitive_to_conserved(&s), [1.0, 1.0, 0.0, 3.0]));
    }

    #[test]
    fn primitive_examples() {
        let s = conserved_to_primitive(&[1.0, 0.0, 0.0, 2.5], 1.4).unwrap();
        assert_eq!((s.rho, s.u, s.v), (1.0, 0.0, 0.0));
        assert!((s.p - 1.0).abs() < 1e-15);
        let s = conserved_to_primitive(&[1.0, 1.0, 0.0, 3.0], 1.4).unwrap();
        assert!((s.u - 1.0).abs() < 1e-15 && (s.p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn negative_energy_rejected() {
        assert!(matches!(
            conserved_to_primitive(&[1.0, 0.0, 0.0, -1.0], 1.4),
            Err(Error::NonPhysicalState { .. })
        ));
        assert!(conserved_to_primitive(&[0.0, 0.0, 0.0, 1.0], 1.4).is_err());
    }

    #[test]
    fn freestream_has_unit_sound_speed() {
        let s = FlowState::freestream(4.0, 1.4);
        assert!((s.sound_speed() - 1.0).abs() < 1e-15);
        assert!((s.mach() - 4.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn round_trip(rho in 0.01f64..50.0, u in -10.0f64..10.0, v in -10.0f64..10.0,
                      p in 0.01f64..50.0, gamma in 1.05f64..1.8) {
            let s = FlowState::new(rho, u, v, p, gamma).unwrap();
            let back = conserved_to_primitive(&primitive_to_conserved(&s), gamma).unwrap();
            let rel = |a: f64, b: f64, scale: f64| (a - b).abs() / scale;
            let vscale = s.speed().max(s.sound_speed());
            prop_assert!(rel(back.rho, rho, rho) < 1e-14);
            prop_assert!(rel(back.u, u, vscale) < 1e-14);
            prop_assert!(rel(back.v, v, vscale) < 1e-14);
            // Pressure is recovered by cancellation against kinetic energy.
            let e_scale = p + 0.5 * rho * (u * u + v * v) * (gamma - 1.0);
            prop_assert!(rel(back.p, p, e_scale) < 1e-14);
        }
    }
}
