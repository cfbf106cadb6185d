//! Exact inviscid gas-dynamic relations used to build analytic references.

mod expansion;
mod polar;
mod shock;
mod state;

pub use expansion::{expand, inverse_prandtl_meyer, isentropic_state, prandtl_meyer_max, prandtl_meyer_nu};
pub use polar::{fan_tail_mach, shock_polar_match, turn_stream, PolarMatch, Side, Wave, WaveKind};
pub use shock::{
    deflection_angle, max_deflection, oblique_shock, oblique_shock_downstream, rankine_hugoniot_residual,
    shock_for_deflection, shock_jump, theta_beta_m, theta_beta_m_residual, ObliqueShockSolution, ShockBranch,
    Turn,
};
pub use state::{conserved_to_primitive, pressure, primitive_to_conserved, Conserved, FlowState, DEFAULT_GAMMA};
