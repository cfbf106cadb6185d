//! Builders for the oblique-shock, Edney-I and Edney-VI reference fields.

use serde::{Deserialize, Serialize};

use super::field::{AnalyticField, Discontinuity, DiscontinuityKind, HalfPlane, MatchResiduals, Region, RegionState};
use crate::error::{Error, Result};
use crate::gas::{rankine_hugoniot_residual, shock_for_deflection, shock_polar_match, FlowState, Turn, WaveKind};
use crate::grid::GridSpec;

/// How the second Edney-VI ramp angle is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RampConvention {
    /// `alpha2` is the total turn of the second ramp from the freestream.
    #[default]
    Absolute,
    /// `alpha2` is added to `alpha1`.
    Relative,
}

fn unit(deg: f64) -> [f64; 2] {
    let a = deg.to_radians();
    [a.cos(), a.sin()]
}

fn norm360(deg: f64) -> f64 {
    deg.rem_euclid(360.0)
}

/// A ray leaving the apex; `owner_ccw` says which neighbouring wedge keeps
/// points lying exactly on it.
struct Ray {
    angle: f64,
    kind: DiscontinuityKind,
    owner_ccw: bool,
}

/// Partition of the plane into wedges around `apex`. `rays` are in
/// counter-clockwise order; `wedge_regions[k]` is the region index of the
/// wedge between `rays[k]` and `rays[k + 1]`.
fn wedge_partition(
    apex: [f64; 2],
    rays: &[Ray],
    wedge_regions: &[usize],
    states: Vec<(String, RegionState)>,
) -> Result<(Vec<Region>, Vec<Discontinuity>)> {
    let n = rays.len();
    debug_assert_eq!(wedge_regions.len(), n);
    let mut regions: Vec<Region> = states
        .into_iter()
        .map(|(name, state)| Region {
            name,
            bounds: Vec::new(),
            state,
        })
        .collect();
    let mut discs = Vec::with_capacity(n);
    for k in 0..n {
        let a = &rays[k];
        let b = &rays[(k + 1) % n];
        let open = norm360(b.angle - a.angle);
        if !(open > 0.0 && open < 180.0) {
            return Err(Error::NoRegularSolution(format!(
                "wave pattern produced a wedge of {open:.3} deg between rays at {:.3} and {:.3} deg",
                a.angle, b.angle
            )));
        }
        let (ua, ub) = (unit(a.angle), unit(b.angle));
        let r = &mut regions[wedge_regions[k]];
        // Counter-clockwise side of ray a.
        r.bounds.push(HalfPlane {
            point: apex,
            normal: [-ua[1], ua[0]],
            inclusive: a.owner_ccw,
        });
        // Clockwise side of ray b.
        r.bounds.push(HalfPlane {
            point: apex,
            normal: [ub[1], -ub[0]],
            inclusive: !b.owner_ccw,
        });
    }
    for k in 0..n {
        let r = &rays[k];
        discs.push(Discontinuity {
            kind: r.kind,
            origin: apex,
            angle_deg: r.angle,
            ccw_region: wedge_regions[k],
            cw_region: wedge_regions[(k + n - 1) % n],
            downstream_ccw: r.owner_ccw,
            full_line: false,
        });
    }
    Ok((regions, discs))
}

fn finish(mut field: AnalyticField) -> AnalyticField {
    let mut rh: f64 = 0.0;
    for d in &field.discontinuities {
        if d.kind != DiscontinuityKind::Shock {
            continue;
        }
        let (up, down) = if d.downstream_ccw {
            (d.cw_region, d.ccw_region)
        } else {
            (d.ccw_region, d.cw_region)
        };
        let su = field.regions[up].state.representative();
        let sd = field.regions[down].state.representative();
        rh = rh.max(rankine_hugoniot_residual(&su, &sd, d.angle_deg.to_radians()));
    }
    field.residuals.rankine_hugoniot_max = rh;
    field
}

/// Single oblique shock turning the freestream by `theta_deg`, anchored at the
/// domain centre.
pub fn build_oblique_case(mach: f64, theta_deg: f64, gamma: f64, geometry: &GridSpec) -> Result<AnalyticField> {
    build_oblique_case_at(mach, theta_deg, gamma, geometry.center())
}

/// Single oblique shock through `anchor`. The post-shock state lies below the
/// shock line (compression ramp on the lower side).
pub fn build_oblique_case_at(mach: f64, theta_deg: f64, gamma: f64, anchor: [f64; 2]) -> Result<AnalyticField> {
    let free = FlowState::freestream(mach, gamma);
    if theta_deg == 0.0 {
        return Ok(AnalyticField::uniform("oblique", free));
    }
    let (sol, psi) = shock_for_deflection(&free, theta_deg, Turn::Ccw)?;
    let t = [psi.cos(), psi.sin()];
    let above = [-t[1], t[0]];
    let regions = vec![
        Region {
            name: "freestream".into(),
            bounds: vec![HalfPlane {
                point: anchor,
                normal: above,
                inclusive: false,
            }],
            state: RegionState::Uniform(free),
        },
        Region {
            name: "post-shock".into(),
            bounds: vec![HalfPlane {
                point: anchor,
                normal: [-above[0], -above[1]],
                inclusive: true,
            }],
            state: RegionState::Uniform(sol.downstream),
        },
    ];
    let discontinuities = vec![Discontinuity {
        kind: DiscontinuityKind::Shock,
        origin: anchor,
        angle_deg: psi.to_degrees(),
        ccw_region: 0,
        cw_region: 1,
        downstream_ccw: false,
        full_line: true,
    }];
    Ok(finish(AnalyticField {
        case: "oblique".into(),
        gamma,
        regions,
        discontinuities,
        residuals: MatchResiduals::default(),
        fallback: 1,
    }))
}

/// Regular crossing of two opposite-family shocks at the domain centre.
///
/// The lower wedge turns the freestream by `alpha_lower_deg` counter-clockwise,
/// the upper one by `alpha_upper_deg` clockwise. Behind the crossing two
/// transmitted shocks and a slip line separate the refracted streams.
pub fn build_edney1(mach: f64, alpha_lower_deg: f64, alpha_upper_deg: f64, gamma: f64, geometry: &GridSpec) -> Result<AnalyticField> {
    if !(alpha_lower_deg > 0.0 && alpha_upper_deg > 0.0) {
        return Err(Error::InvalidParams("Edney-I needs two positive deflections".into()));
    }
    let free = FlowState::freestream(mach, gamma);
    let m = shock_polar_match(&free, &free, (alpha_lower_deg, alpha_upper_deg))?;
    let (il, iu) = match (m.incident_lower, m.incident_upper) {
        (Some(a), Some(b)) => (a, b),
        _ => unreachable!("both deflections are positive"),
    };
    for w in [&m.lower, &m.upper] {
        if w.kind != WaveKind::Shock {
            return Err(Error::NoRegularSolution(
                "crossing requires compression on both transmitted waves".into(),
            ));
        }
    }
    let apex = geometry.center();
    use DiscontinuityKind::*;
    // 0 freestream, 1 behind lower incident, 2 behind upper incident,
    // 3 lower refracted, 4 upper refracted.
    let rays = [
        Ray { angle: norm360(m.slip_angle_deg), kind: SlipLine, owner_ccw: true },
        Ray { angle: norm360(m.upper.leading_deg), kind: Shock, owner_ccw: false },
        Ray { angle: norm360(iu.leading_deg + 180.0), kind: Shock, owner_ccw: false },
        Ray { angle: norm360(il.leading_deg + 180.0), kind: Shock, owner_ccw: true },
        Ray { angle: norm360(m.lower.leading_deg), kind: Shock, owner_ccw: true },
    ];
    let wedges = [4, 2, 0, 1, 3];
    let states = vec![
        ("freestream".to_string(), RegionState::Uniform(free)),
        ("incident-lower".to_string(), RegionState::Uniform(il.downstream)),
        ("incident-upper".to_string(), RegionState::Uniform(iu.downstream)),
        ("refracted-lower".to_string(), RegionState::Uniform(m.lower.downstream)),
        ("refracted-upper".to_string(), RegionState::Uniform(m.upper.downstream)),
    ];
    let (regions, discontinuities) = wedge_partition(apex, &rays, &wedges, states)?;
    Ok(finish(AnalyticField {
        case: "edney1".into(),
        gamma,
        regions,
        discontinuities,
        residuals: MatchResiduals {
            slip_pressure: m.pressure_residual,
            slip_direction_rad: m.direction_residual,
            rankine_hugoniot_max: 0.0,
        },
        fallback: 3,
    }))
}

/// Two same-family shocks from consecutive ramps merging at the domain centre.
///
/// Behind the merge point a single stronger shock, a slip line and a matching
/// wave (expansion fan or weak shock, chosen by the pressure balance) bring the
/// two streams to a common pressure and direction.
pub fn build_edney6(
    mach: f64,
    alpha1_deg: f64,
    alpha2_deg: f64,
    convention: RampConvention,
    gamma: f64,
    geometry: &GridSpec,
) -> Result<AnalyticField> {
    if alpha2_deg == 0.0 {
        let mut f = build_oblique_case(mach, alpha1_deg, gamma, geometry)?;
        f.case = "edney6".into();
        return Ok(f);
    }
    if !(alpha1_deg > 0.0) {
        return Err(Error::InvalidParams("Edney-VI needs a positive first ramp angle".into()));
    }
    let second_turn = match convention {
        RampConvention::Absolute => alpha2_deg - alpha1_deg,
        RampConvention::Relative => alpha2_deg,
    };
    if !(second_turn > 0.0) {
        return Err(Error::InvalidParams(format!(
            "second ramp must turn further than the first (extra turn {second_turn} deg)"
        )));
    }
    let free = FlowState::freestream(mach, gamma);
    let (s1, psi1) = shock_for_deflection(&free, alpha1_deg, Turn::Ccw)?;
    let (s2, psi2) = shock_for_deflection(&s1.downstream, second_turn, Turn::Ccw)?;
    let m = shock_polar_match(&s2.downstream, &free, (0.0, 0.0))?;
    if m.upper.kind != WaveKind::Shock {
        return Err(Error::NoRegularSolution("merged wave is not a shock".into()));
    }
    let apex = geometry.center();
    use DiscontinuityKind::*;
    // 0 freestream, 1 between shocks, 2 behind both shocks, 3 behind merged
    // shock, 4 behind the matching wave, 5 fan interior (if any).
    let mut rays = vec![
        Ray { angle: norm360(m.slip_angle_deg), kind: SlipLine, owner_ccw: true },
        Ray { angle: norm360(m.upper.leading_deg), kind: Shock, owner_ccw: false },
        Ray { angle: norm360(psi1.to_degrees() + 180.0), kind: Shock, owner_ccw: true },
        Ray { angle: norm360(psi2.to_degrees() + 180.0), kind: Shock, owner_ccw: true },
    ];
    let mut wedges = vec![3, 0, 1, 2];
    let mut states = vec![
        ("freestream".to_string(), RegionState::Uniform(free)),
        ("behind-first-shock".to_string(), RegionState::Uniform(s1.downstream)),
        ("behind-second-shock".to_string(), RegionState::Uniform(s2.downstream)),
        ("behind-merged-shock".to_string(), RegionState::Uniform(m.upper.downstream)),
        ("behind-matching-wave".to_string(), RegionState::Uniform(m.lower.downstream)),
    ];
    match m.lower.kind {
        WaveKind::Expansion => {
            rays.push(Ray { angle: norm360(m.lower.leading_deg), kind: FanHead, owner_ccw: true });
            rays.push(Ray { angle: norm360(m.lower.trailing_deg), kind: FanTail, owner_ccw: true });
            wedges.push(5);
            wedges.push(4);
            states.push((
                "expansion-fan".to_string(),
                RegionState::Fan { apex, wave: m.lower },
            ));
        }
        WaveKind::Shock => {
            rays.push(Ray { angle: norm360(m.lower.leading_deg), kind: Shock, owner_ccw: true });
            wedges.push(4);
        }
        WaveKind::None => {
            // Slip line continues from the second-shock region directly.
            wedges.pop();
            wedges.push(4);
            states[4].1 = RegionState::Uniform(s2.downstream);
        }
    }
    let (regions, discontinuities) = wedge_partition(apex, &rays, &wedges, states)?;
    Ok(finish(AnalyticField {
        case: "edney6".into(),
        gamma,
        regions,
        discontinuities,
        residuals: MatchResiduals {
            slip_pressure: m.pressure_residual,
            slip_direction_rad: m.direction_residual,
            rankine_hugoniot_max: 0.0,
        },
        fallback: 3,
    }))
}
