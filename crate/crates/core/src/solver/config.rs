use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeId {
    Cir1,
    Maccormack,
    LaxWendroff2,
    MusclHllc2,
    Weno3,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [
        SchemeId::Cir1,
        SchemeId::Maccormack,
        SchemeId::LaxWendroff2,
        SchemeId::MusclHllc2,
        SchemeId::Weno3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Cir1 => "cir1",
            SchemeId::Maccormack => "maccormack",
            SchemeId::LaxWendroff2 => "lax_wendroff2",
            SchemeId::MusclHllc2 => "muscl_hllc2",
            SchemeId::Weno3 => "weno3",
        }
    }

    pub fn nominal_order(self) -> u32 {
        match self {
            SchemeId::Cir1 => 1,
            SchemeId::Weno3 => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for SchemeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AvKind {
    #[default]
    None,
    Second,
    Fourth,
}

/// Nonlinear weights of the WENO reconstruction.
/// Dissipation coefficient of the Lax-Friedrichs flux splitting (WENO only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    /// Largest spectral radius over the whole grid and both directions.
    #[default]
    Global,
    /// Largest spectral radius over the face stencil.
    Local,
}

/// How `weno_eps` enters the smoothness-indicator regularization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsScaling {
    /// `weno_eps` is used as is.
    Fixed,
    /// `weno_eps * h^2` with the spacing of the sweep direction.
    #[default]
    MeshSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WenoWeights {
    /// Classical inverse-smoothness weights.
    #[default]
    Js,
    /// Weights built from the difference of the two smoothness indicators.
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Limiter {
    #[default]
    Minmod,
    Vanleer,
}

/// One ensemble member: scheme kernel plus its numerical parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    /// Label used in reports; defaults to the scheme name.
    #[serde(default)]
    pub label: Option<String>,
    pub scheme: SchemeId,
    #[serde(default)]
    pub nominal_order: Option<u32>,
    #[serde(default)]
    pub av_kind: AvKind,
    #[serde(default)]
    pub av_mu: f64,
    #[serde(default)]
    pub limiter: Limiter,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_conv_tol")]
    pub conv_tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// Smoothness-indicator regularization (WENO only).
    #[serde(default = "default_weno_eps")]
    pub weno_eps: f64,
    #[serde(default)]
    pub weno_weights: WenoWeights,
    #[serde(default)]
    pub weno_eps_scaling: EpsScaling,
    #[serde(default)]
    pub weno_splitting: Splitting,
}

fn default_cfl() -> f64 {
    0.5
}
fn default_conv_tol() -> f64 {
    1e-8
}
fn default_max_iters() -> usize {
    200_000
}
fn default_weno_eps() -> f64 {
    1.0
}

impl SchemeConfig {
    pub fn new(scheme: SchemeId) -> Self {
        SchemeConfig {
            label: None,
            scheme,
            nominal_order: None,
            av_kind: AvKind::None,
            av_mu: 0.0,
            limiter: Limiter::Minmod,
            cfl: default_cfl(),
            conv_tol: default_conv_tol(),
            max_iters: default_max_iters(),
            weno_eps: default_weno_eps(),
            weno_weights: WenoWeights::Js,
            weno_eps_scaling: EpsScaling::MeshSquared,
            weno_splitting: Splitting::Global,
        }
    }

    pub fn with_av(mut self, kind: AvKind, mu: f64) -> Self {
        self.av_kind = kind;
        self.av_mu = mu;
        self
    }

    pub fn with_limiter(mut self, limiter: Limiter) -> Self {
        self.limiter = limiter;
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    /// Explicit label, or the scheme name with its non-default options.
    pub fn label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let mut s = self.scheme.name().to_string();
        match self.scheme {
            SchemeId::MusclHllc2 => s.push_str(match self.limiter {
                Limiter::Minmod => "_minmod",
                Limiter::Vanleer => "_vanleer",
            }),
            SchemeId::Weno3 => s.push_str(match self.weno_weights {
                WenoWeights::Js => "_js",
                WenoWeights::Z => "_z",
            }),
            _ => {}
        }
        match self.av_kind {
            AvKind::None => {}
            AvKind::Second => s.push_str(&format!("_av2_{}", self.av_mu)),
            AvKind::Fourth => s.push_str(&format!("_av4_{}", self.av_mu)),
        }
        s
    }

    pub fn order(&self) -> u32 {
        self.nominal_order.unwrap_or_else(|| self.scheme.nominal_order())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.av_mu >= 0.0 && self.av_mu.is_finite()) {
            return Err(Error::InvalidConfig(format!("av_mu must be >= 0, got {}", self.av_mu)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidConfig(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.conv_tol > 0.0) {
            return Err(Error::InvalidConfig(format!("conv_tol must be positive, got {}", self.conv_tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        if !(self.weno_eps > 0.0) {
            return Err(Error::InvalidConfig("weno_eps must be positive".into()));
        }
        Ok(())
    }
}
