//! Exact piecewise-uniform reference fields and their projection to grids.

mod cases;
mod field;

pub use cases::{build_edney1, build_edney6, build_oblique_case, build_oblique_case_at, RampConvention};
pub use field::{
    project_to_grid, AnalyticField, Discontinuity, DiscontinuityKind, HalfPlane, MatchResiduals, Region, RegionState,
};

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RegionSummary {
    pub name: String,
    pub kind: &'static str,
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub mach: f64,
    pub flow_angle_deg: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldSummary {
    pub case: String,
    pub gamma: f64,
    pub regions: Vec<RegionSummary>,
    pub discontinuities: Vec<Discontinuity>,
    pub residuals: MatchResiduals,
}

impl AnalyticField {
    /// Region states (fans by their downstream state) and wave geometry.
    pub fn summary(&self) -> FieldSummary {
        let regions = self
            .regions
            .iter()
            .map(|r| {
                let s = r.state.representative();
                RegionSummary {
                    name: r.name.clone(),
                    kind: match r.state {
                        RegionState::Uniform(_) => "uniform",
                        RegionState::Fan { .. } => "fan",
                    },
                    rho: s.rho,
                    u: s.u,
                    v: s.v,
                    p: s.p,
                    mach: s.mach(),
                    flow_angle_deg: s.flow_angle().to_degrees(),
                    entropy: s.entropy(),
                }
            })
            .collect();
        FieldSummary {
            case: self.case.clone(),
            gamma: self.gamma,
            regions,
            discontinuities: self.discontinuities.clone(),
            residuals: self.residuals,
        }
    }
}
