use serde::{Deserialize, Serialize};

use crate::gas::{FlowState, Wave};
use crate::grid::{ConservedField, GridSpec};

/// `normal . (x - point) > 0`, or `>= 0` when `inclusive`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub point: [f64; 2],
    pub normal: [f64; 2],
    pub inclusive: bool,
}

impl HalfPlane {
    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let s = self.normal[0] * (x - self.point[0]) + self.normal[1] * (y - self.point[1]);
        if self.inclusive {
            s >= 0.0
        } else {
            s > 0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegionState {
    Uniform(FlowState),
    /// Centred expansion fan; the state depends on the ray angle from `apex`.
    Fan { apex: [f64; 2], wave: Wave },
}

impl RegionState {
    pub fn eval(&self, x: f64, y: f64) -> FlowState {
        match self {
            RegionState::Uniform(s) => *s,
            RegionState::Fan { apex, wave } => wave.fan_state((y - apex[1]).atan2(x - apex[0])),
        }
    }

    pub fn representative(&self) -> FlowState {
        match self {
            RegionState::Uniform(s) => *s,
            RegionState::Fan { wave, .. } => wave.downstream,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub name: String,
    pub bounds: Vec<HalfPlane>,
    pub state: RegionState,
}

impl Region {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.bounds.iter().all(|h| h.contains(x, y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscontinuityKind {
    Shock,
    SlipLine,
    FanHead,
    FanTail,
}

/// Straight ray from `origin` at lab angle `angle_deg`, separating two regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discontinuity {
    pub kind: DiscontinuityKind,
    pub origin: [f64; 2],
    pub angle_deg: f64,
    /// Region index on the counter-clockwise side of the ray.
    pub ccw_region: usize,
    /// Region index on the clockwise side of the ray.
    pub cw_region: usize,
    /// Side that receives flow crossing the ray and keeps points lying on it.
    pub downstream_ccw: bool,
    /// True when the ray is a full line through `origin` rather than a half-line.
    pub full_line: bool,
}

/// Wave-matching diagnostics kept for reporting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchResiduals {
    pub slip_pressure: f64,
    pub slip_direction_rad: f64,
    pub rankine_hugoniot_max: f64,
}

/// Exact piecewise-uniform flow: ordered regions (first match wins) bounded by
/// straight discontinuities.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticField {
    pub case: String,
    pub gamma: f64,
    pub regions: Vec<Region>,
    pub discontinuities: Vec<Discontinuity>,
    pub residuals: MatchResiduals,
    /// Region assigned to points no predicate claims (only ray apices).
    pub fallback: usize,
}

impl AnalyticField {
    pub fn uniform(case: &str, state: FlowState) -> Self {
        AnalyticField {
            case: case.to_string(),
            gamma: state.gamma,
            regions: vec![Region {
                name: "freestream".into(),
                bounds: Vec::new(),
                state: RegionState::Uniform(state),
            }],
            discontinuities: Vec::new(),
            residuals: MatchResiduals::default(),
            fallback: 0,
        }
    }

    pub fn region_index_at(&self, x: f64, y: f64) -> usize {
        self.regions
            .iter()
            .position(|r| r.contains(x, y))
            .unwrap_or(self.fallback)
    }

    /// Number of regions whose predicate holds at a point.
    pub fn match_count(&self, x: f64, y: f64) -> usize {
        self.regions.iter().filter(|r| r.contains(x, y)).count()
    }

    pub fn state_at(&self, x: f64, y: f64) -> FlowState {
        self.regions[self.region_index_at(x, y)].state.eval(x, y)
    }

    pub fn freestream(&self) -> FlowState {
        self.regions[0].state.representative()
    }
}

/// Node-wise sampling of the analytic state in conservative variables.
pub fn project_to_grid(field: &AnalyticField, grid: &GridSpec) -> ConservedField {
    ConservedField::from_fn(*grid, field.gamma, |x, y| field.state_at(x, y).to_conserved())
}
