//! Configuration-driven pipeline: reference field, solver ensemble, error and
//! truncation vectors, estimators and report files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::{build_edney1, build_edney6, build_oblique_case, project_to_grid, AnalyticField, FieldSummary, RampConvention};
use crate::concentration::{mc_orthogonality, McParams, McResult, Sampler};
use crate::error::{Error, Result};
use crate::estimators::{evaluate, EnsembleReport, EstimatorSummary};
use crate::geometry::{error_vector, solution_vector, GridVector, Variables, VectorSpec};
use crate::grid::{ConservedField, GridSpec};
use crate::io;
use crate::par::Exec;
use crate::solver::{solve_steady_with, AvKind, SchemeConfig, SchemeId, SolveResult, WenoWeights};
use crate::truncation::high_order_residual_with;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Oblique,
    #[default]
    Edney1,
    Edney6,
}

/// Monte Carlo sweep run by the `mc-orthogonality` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub sampler: Sampler,
}

fn default_dims() -> Vec<usize> {
    vec![100, 1_000, 10_000]
}
fn default_deltas() -> Vec<f64> {
    vec![0.01, 0.05, 0.1]
}
fn default_samples() -> u64 {
    1_000_000
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            dims: default_dims(),
            deltas: default_deltas(),
            samples: default_samples(),
            sampler: Sampler::default(),
        }
    }
}

/// Experiment definition read from a TOML file. Every field has a default.
///
/// `angles` holds the case parameters in degrees: the deflection for
/// `oblique`, the lower and upper wedge deflections for `edney1`, and the two
/// ramp angles for `edney6`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub case: CaseKind,
    #[serde(default = "default_mach")]
    pub mach: f64,
    #[serde(default)]
    pub angles: Option<Vec<f64>>,
    #[serde(default)]
    pub convention: RampConvention,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_n")]
    pub nx: usize,
    #[serde(default = "default_n")]
    pub ny: usize,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<SchemeConfig>,
    #[serde(default)]
    pub error_variables: Variables,
    /// Boundary nodes excluded from every vector; at least the stencil half-width.
    #[serde(default = "default_margin")]
    pub margin: usize,
    /// Mean-centred cosine instead of the plain one.
    #[serde(default)]
    pub centered_angles: bool,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    #[serde(default)]
    pub jobs: usize,
    /// Write per-member VTK and raw binary fields.
    #[serde(default = "default_true")]
    pub write_fields: bool,
    #[serde(default)]
    pub mc: McConfig,
}

fn default_mach() -> f64 {
    4.0
}
fn default_gamma() -> f64 {
    crate::gas::DEFAULT_GAMMA
}
fn default_n() -> usize {
    100
}
fn default_margin() -> usize {
    3
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}
fn default_seed() -> u64 {
    20_240_601
}
fn default_true() -> bool {
    true
}

/// Ten members of different structure and dissipation, all reaching a steady
/// state on the Edney-I interaction. WENO3 stops at a looser tolerance because
/// its residual levels off along the slip line.
pub fn default_schemes() -> Vec<SchemeConfig> {
    let weno = |w: WenoWeights, tol: f64| {
        let mut c = SchemeConfig::new(SchemeId::Weno3);
        c.weno_weights = w;
        c.conv_tol = tol;
        c
    };
    let mac = |kind: AvKind, mu: f64| SchemeConfig::new(SchemeId::Maccormack).with_av(kind, mu);
    vec![
        SchemeConfig::new(SchemeId::Cir1),
        SchemeConfig::new(SchemeId::MusclHllc2),
        mac(AvKind::Second, 0.001),
        mac(AvKind::Second, 0.002),
        mac(AvKind::Second, 0.01),
        mac(AvKind::Fourth, 0.01),
        mac(AvKind::Second, 0.02),
        SchemeConfig::new(SchemeId::LaxWendroff2).with_av(AvKind::Second, 0.05),
        weno(WenoWeights::Js, 1e-5),
        weno(WenoWeights::Z, 1e-4),
    ]
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config takes every default")
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn angles(&self) -> Vec<f64> {
        self.angles.clone().unwrap_or_else(|| match self.case {
            CaseKind::Oblique => vec![20.0],
            CaseKind::Edney1 => vec![20.0, 15.0],
            CaseKind::Edney6 => vec![15.0, 25.0],
        })
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::unit(self.nx, self.ny)
    }

    pub fn validate(&self) -> Result<()> {
        let want = match self.case {
            CaseKind::Oblique => 1,
            CaseKind::Edney1 | CaseKind::Edney6 => 2,
        };
        if self.angles().len() != want {
            return Err(Error::InvalidConfig(format!("case {:?} takes {want} angle(s)", self.case)));
        }
        if !(self.mach > 1.0) {
            return Err(Error::SubsonicInput { mach: self.mach });
        }
        if !(self.gamma > 1.0) {
            return Err(Error::InvalidConfig(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if self.margin < 3 || 2 * self.margin >= self.nx.min(self.ny) {
            return Err(Error::InvalidConfig(format!(
                "margin {} must be at least 3 and leave interior nodes on a {}x{} grid",
                self.margin, self.nx, self.ny
            )));
        }
        for s in &self.schemes {
            s.validate()?;
        }
        self.grid().map(|_| ())
    }

    pub fn build_case(&self) -> Result<AnalyticField> {
        let grid = self.grid()?;
        let a = self.angles();
        match self.case {
            CaseKind::Oblique => build_oblique_case(self.mach, a[0], self.gamma, &grid),
            CaseKind::Edney1 => build_edney1(self.mach, a[0], a[1], self.gamma, &grid),
            CaseKind::Edney6 => build_edney6(self.mach, a[0], a[1], self.convention, self.gamma, &grid),
        }
    }

    fn vector_spec(&self, case: &AnalyticField) -> VectorSpec {
        VectorSpec::freestream(self.margin, self.error_variables, &case.freestream())
    }

    /// Member labels made unique by numbering repeats.
    pub fn member_ids(&self) -> Vec<String> {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        self.schemes
            .iter()
            .map(|s| {
                let base = s.label();
                let n = seen.entry(base.clone()).or_insert(0);
                *n += 1;
                if *n == 1 {
                    base
                } else {
                    format!("{base}_{n}")
                }
            })
            .collect()
    }
}

/// Analytic reference report: regions, waves and matching residuals.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub config: ExperimentConfig,
    pub grid: GridSpec,
    pub field: FieldSummary,
    /// Node count per region on the configured grid.
    pub node_census: Vec<usize>,
}

pub fn validate_only(cfg: &ExperimentConfig) -> Result<ValidationReport> {
    cfg.validate()?;
    let case = cfg.build_case()?;
    let grid = cfg.grid()?;
    let mut census = vec![0; case.regions.len()];
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            census[case.region_index_at(grid.x(i as isize), grid.y(j as isize))] += 1;
        }
    }
    Ok(ValidationReport {
        config: cfg.clone(),
        grid,
        field: case.summary(),
        node_census: census,
    })
}

/// Outcome of one ensemble member.
#[derive(Debug, Clone, Serialize)]
pub struct MemberRun {
    pub id: String,
    pub config: SchemeConfig,
    pub iters: usize,
    pub converged: bool,
    pub final_relative_residual: f64,
    /// Set when the member failed and is excluded from the analysis.
    pub failure: Option<String>,
}

pub struct Ensemble {
    pub case: AnalyticField,
    pub grid: GridSpec,
    pub exact: ConservedField,
    pub runs: Vec<MemberRun>,
    /// Fields of the members that produced one, aligned with `ids`.
    pub ids: Vec<String>,
    pub fields: Vec<ConservedField>,
}

/// Solves every member, one worker per member.
pub fn solve_ensemble(cfg: &ExperimentConfig, exec: Exec) -> Result<Ensemble> {
    cfg.validate()?;
    let case = cfg.build_case()?;
    let grid = cfg.grid()?;
    let exact = project_to_grid(&case, &grid);
    let ids = cfg.member_ids();
    let results: Vec<Result<SolveResult>> =
        exec.map(cfg.schemes.len(), |k| solve_steady_with(&cfg.schemes[k], &case, &grid, Exec::Sequential));
    let mut runs = Vec::new();
    let (mut kept, mut fields) = (Vec::new(), Vec::new());
    for ((id, scheme), res) in ids.iter().zip(&cfg.schemes).zip(results) {
        match res {
            Ok(r) => {
                if !r.converged {
                    log::warn!("{id} stopped after {} iterations at relative residual {:e}", r.iters, r.final_relative_residual);
                }
                runs.push(MemberRun {
                    id: id.clone(),
                    config: scheme.clone(),
                    iters: r.iters,
                    converged: r.converged,
                    final_relative_residual: r.final_relative_residual,
                    failure: None,
                });
                kept.push(id.clone());
                fields.push(r.field);
            }
            Err(e) => {
                log::warn!("{id} excluded from the ensemble: {e}");
                runs.push(MemberRun {
                    id: id.clone(),
                    config: scheme.clone(),
                    iters: 0,
                    converged: false,
                    final_relative_residual: f64::NAN,
                    failure: Some(e.to_string()),
                });
            }
        }
    }
    Ok(Ensemble {
        case,
        grid,
        exact,
        runs,
        ids: kept,
        fields,
    })
}

/// Everything `summary.json` holds.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub case: String,
    pub grid: GridSpec,
    pub vector_length: usize,
    pub members: Vec<MemberRun>,
    pub analyzed: Vec<String>,
    pub reference_residuals: crate::analytic::MatchResiduals,
    pub estimators: EstimatorSummary,
}

pub struct ExperimentOutput {
    pub ensemble: Ensemble,
    pub report: EnsembleReport,
    pub summary: Summary,
    pub errors: Vec<GridVector>,
    pub truncations: Vec<GridVector>,
}

/// Error, solution and truncation vectors plus every estimator.
pub fn analyze(cfg: &ExperimentConfig, ensemble: Ensemble, exec: Exec) -> Result<ExperimentOutput> {
    if ensemble.fields.len() < 2 {
        return Err(Error::InvalidParams(format!(
            "ensemble analysis needs two surviving members, have {}",
            ensemble.fields.len()
        )));
    }
    let spec = cfg.vector_spec(&ensemble.case);
    let n = ensemble.fields.len();
    let vectors = exec.map(n, |k| -> Result<(GridVector, GridVector, GridVector)> {
        let f = &ensemble.fields[k];
        Ok((
            solution_vector(f, &spec)?,
            error_vector(f, &ensemble.exact, &spec)?,
            high_order_residual_with(f, &spec)?,
        ))
    });
    let (mut sols, mut errs, mut truncs) = (Vec::new(), Vec::new(), Vec::new());
    for v in vectors {
        let (s, e, t) = v?;
        sols.push(s);
        errs.push(e);
        truncs.push(t);
    }
    let report = evaluate(&ensemble.ids, &sols, &errs, &truncs, exec)?;
    let summary = Summary {
        config: cfg.clone(),
        case: ensemble.case.case.clone(),
        grid: ensemble.grid,
        vector_length: sols[0].len(),
        members: ensemble.runs.clone(),
        analyzed: ensemble.ids.clone(),
        reference_residuals: ensemble.case.residuals,
        estimators: report.summary.clone(),
    };
    Ok(ExperimentOutput {
        ensemble,
        report,
        summary,
        errors: errs,
        truncations: truncs,
    })
}

#[derive(Serialize)]
struct ScatterRow<'a> {
    k: &'a str,
    m: &'a str,
    beta_deg: Option<f64>,
    alpha_deg: Option<f64>,
    degenerate: bool,
}

#[derive(Serialize)]
struct EstimatorsFile<'a> {
    members: &'a [MemberRun],
    #[serde(flatten)]
    report: &'a EnsembleReport,
}

fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect()
}

/// Solution fields of the exact reference and every surviving member.
pub fn write_fields(out: &Path, ensemble: &Ensemble) -> Result<()> {
    let dir = out.join("fields");
    io::write_vtk_field(&dir.join("exact.vtk"), &ensemble.exact, &format!("{} exact", ensemble.case.case))?;
    io::write_raw(&dir.join("exact.bin"), &ensemble.exact)?;
    for (id, f) in ensemble.ids.iter().zip(&ensemble.fields) {
        let stem = file_stem(id);
        io::write_vtk_field(&dir.join(format!("{stem}.vtk")), f, id)?;
        io::write_raw(&dir.join(format!("{stem}.bin")), f)?;
    }
    Ok(())
}

pub fn write_outputs(out: &Path, result: &ExperimentOutput) -> Result<()> {
    let cfg = &result.summary.config;
    let ids = &result.report.ids;
    if cfg.write_fields {
        write_fields(out, &result.ensemble)?;
        for (k, id) in ids.iter().enumerate() {
            let stem = file_stem(id);
            io::write_vtk_grid_vector(&out.join("errors").join(format!("{stem}.vtk")), &result.errors[k], id)?;
            io::write_vtk_grid_vector(&out.join("truncation").join(format!("{stem}.vtk")), &result.truncations[k], id)?;
        }
    }
    let r = &result.report;
    io::write_matrix_csv(&out.join("angles_alpha.csv"), ids, &r.alpha)?;
    io::write_matrix_csv(&out.join("angles_beta.csv"), ids, &r.beta)?;
    let d: Vec<Vec<Option<f64>>> = r.distances.iter().map(|row| row.iter().map(|v| Some(*v)).collect()).collect();
    io::write_matrix_csv(&out.join("distances.csv"), ids, &d)?;
    let scatter: Vec<ScatterRow> = r
        .pairs
        .iter()
        .map(|p| ScatterRow {
            k: &ids[p.k],
            m: &ids[p.m],
            beta_deg: p.beta_deg,
            alpha_deg: p.alpha_deg,
            degenerate: p.degenerate,
        })
        .collect();
    io::write_rows_csv(&out.join("angle_scatter.csv"), &scatter)?;
    io::write_json(
        &out.join("estimators.json"),
        &EstimatorsFile {
            members: &result.summary.members,
            report: r,
        },
    )?;
    io::write_json(&out.join("summary.json"), &result.summary)?;
    Ok(())
}

/// Full pipeline writing every artifact under `cfg.out`.
pub fn run_experiment(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentOutput> {
    let ensemble = solve_ensemble(cfg, exec)?;
    let result = analyze(cfg, ensemble, exec)?;
    write_outputs(&cfg.out, &result)?;
    Ok(result)
}

/// Monte Carlo sweep over the configured dimensions and thresholds.
pub fn run_mc(cfg: &ExperimentConfig, exec: Exec) -> Result<Vec<McResult>> {
    let mut out = Vec::new();
    for &dim in &cfg.mc.dims {
        for &delta in &cfg.mc.deltas {
            let mut p = McParams::new(dim, cfg.mc.samples, delta, cfg.seed);
            p.sampler = cfg.mc.sampler;
            out.push(mc_orthogonality(&p, exec)?);
        }
    }
    Ok(out)
}

/// Markdown digest of an output directory written by [`run_experiment`].
pub fn render_report(out: &Path) -> Result<String> {
    let read = |name: &str| -> Result<serde_json::Value> {
        let text = std::fs::read_to_string(out.join(name))
            .map_err(|e| Error::Io(format!("{}: {e}", out.join(name).display())))?;
        Ok(serde_json::from_str(&text)?)
    };
    let summary = read("summary.json")?;
    let est = read("estimators.json")?;
    let num = |v: &serde_json::Value| v.as_f64().map_or("-".to_string(), |x| format!("{x:.4}"));
    let mut s = String::new();
    s.push_str(&format!(
        "# Ensemble report: {} on {}x{}\n\n",
        summary["case"].as_str().unwrap_or("?"),
        summary["grid"]["nx"],
        summary["grid"]["ny"]
    ));
    s.push_str("## Members\n\n| id | iterations | converged | relative residual | status |\n|---|---|---|---|---|\n");
    for m in summary["members"].as_array().into_iter().flatten() {
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            m["id"].as_str().unwrap_or("?"),
            m["iters"],
            m["converged"],
            m["final_relative_residual"].as_f64().map_or("-".into(), |x| format!("{x:.3e}")),
            m["failure"].as_str().map_or("analyzed".to_string(), |f| format!("excluded: {f}")),
        ));
    }
    s.push_str("\n## Per-solution estimates\n\n| id | true norm | dk_max | I_eff dk_max | width I_eff | beta/3 bound I_eff | combined | source |\n|---|---|---|---|---|---|---|---|\n");
    for e in est["solutions"].as_array().into_iter().flatten() {
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
            e["id"].as_str().unwrap_or("?"),
            num(&e["true_norm"]),
            num(&e["dk_max"]),
            num(&e["dk_max_effectivity"]),
            num(&e["width_effectivity"]),
            num(&e["angle_bound_beta_effectivity"]),
            num(&e["combined"]),
            e["combined_source"].as_str().unwrap_or("-"),
        ));
    }
    let es = &summary["estimators"];
    s.push_str("\n## Angles\n\n");
    for (name, key) in [("alpha (approximation errors)", "alpha"), ("beta (truncation errors)", "beta")] {
        let a = &es[key];
        s.push_str(&format!(
            "- {name}: mean {} deg, min {} deg, max {} deg over {} pairs\n",
            num(&a["mean"]),
            num(&a["min"]),
            num(&a["max"]),
            a["count"]
        ));
    }
    s.push_str(&format!(
        "- fraction of pairs with alpha >= beta/3: {}\n- degenerate pairs: {}\n",
        num(&es["alpha_ge_beta_third_fraction"]),
        es["degenerate_pairs"]
    ));
    s.push_str("\n## Effectivity ranges\n\n| estimator | min | max |\n|---|---|---|\n");
    for key in [
        "dk_max_effectivity",
        "width_effectivity",
        "pair_bound_effectivity",
        "angle_direct_effectivity",
        "angle_beta_effectivity",
    ] {
        s.push_str(&format!("| {key} | {} | {} |\n", num(&es[key]["min"]), num(&es[key]["max"])));
    }
    Ok(s)
}
