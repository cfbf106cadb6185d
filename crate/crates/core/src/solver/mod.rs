//! Steady Euler solutions by explicit pseudo-time relaxation with a choice
//! of shock-capturing kernels.

mod config;
mod flux;
mod manufactured;
mod padded;
mod schemes;

pub use config::{AvKind, EpsScaling, Limiter, SchemeConfig, SchemeId, Splitting, WenoWeights};
pub use flux::{hllc, physical_flux, steger_warming, Dir};
pub use manufactured::{observed_order, verify_order, Manufactured, OrderResult};
pub use padded::{Boundary, Outflow, Padded, GHOST};
pub use schemes::Faces;

use serde::Serialize;

use crate::analytic::AnalyticField;
use crate::error::{Error, Result};
use crate::gas::Conserved;
use crate::grid::{ConservedField, GridSpec};
use crate::par::Exec;
use schemes::Kernel;

/// Boundary data, initial state and optional steady source for one solve.
#[derive(Debug, Clone)]
pub struct Problem {
    pub grid: GridSpec,
    pub gamma: f64,
    pub boundary: Boundary,
    pub initial: ConservedField,
    pub source: Option<Padded<Conserved>>,
}

impl Problem {
    /// Analytic ghost data on the inflow sides, extrapolated outflow and a
    /// uniform freestream start.
    pub fn from_case(case: &AnalyticField, grid: &GridSpec) -> Result<Self> {
        grid.validate()?;
        let boundary = Boundary::from_fn(grid, Outflow::Extrapolate, |x, y| case.state_at(x, y).to_conserved());
        let initial = ConservedField::uniform(*grid, &case.freestream());
        Ok(Problem {
            grid: *grid,
            gamma: case.gamma,
            boundary,
            initial,
            source: None,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub label: String,
    pub scheme: SchemeId,
    #[serde(skip)]
    pub field: ConservedField,
    pub iters: usize,
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub final_relative_residual: f64,
}

/// Diagnostics of a single pseudo-time step.
#[derive(Debug, Clone)]
pub struct StepInfo {
    pub dt: f64,
    /// L2 norm over nodes of the density rate of change.
    pub density_residual: f64,
    /// Outward flux integrated over the boundary of the node box.
    pub boundary_flux: Conserved,
    pub faces: Faces,
}

/// Marching state of one scheme on one problem.
pub struct Solver<'a> {
    cfg: &'a SchemeConfig,
    problem: &'a Problem,
    exec: Exec,
    q: Padded<Conserved>,
}

impl<'a> Solver<'a> {
    pub fn new(cfg: &'a SchemeConfig, problem: &'a Problem, exec: Exec) -> Result<Self> {
        cfg.validate()?;
        let grid = &problem.grid;
        let mut q = Padded::filled(grid.nx, grid.ny, [0.0; 4]);
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                q.set(i as isize, j as isize, *problem.initial.at(i, j));
            }
        }
        problem.boundary.fill(&mut q);
        Ok(Solver { cfg, problem, exec, q })
    }

    fn kernel(&self) -> Kernel<'_> {
        let grid = &self.problem.grid;
        Kernel {
            cfg: self.cfg,
            gamma: self.problem.gamma,
            hx: grid.hx(),
            hy: grid.hy(),
            nx: grid.nx,
            ny: grid.ny,
            exec: self.exec,
            boundary: &self.problem.boundary,
            source: self.problem.source.as_ref(),
        }
    }

    /// Largest `|u| + |v| + a` over the nodes.
    fn max_signal_speed(&self) -> Result<f64> {
        let grid = &self.problem.grid;
        let g = self.problem.gamma;
        let rows = self.exec.map(grid.nx, |i| {
            let mut m: f64 = 0.0;
            for j in 0..grid.ny {
                let w = flux::to_prim(&self.q.get(i as isize, j as isize), g);
                if !(w[0] > 0.0 && w[3] > 0.0 && w.iter().all(|x| x.is_finite())) {
                    return Err(Error::NonPhysicalState {
                        node: Some((i, j)),
                        reason: format!("rho = {}, p = {}", w[0], w[3]),
                    });
                }
                m = m.max(w[1].abs() + w[2].abs() + (g * w[3] / w[0]).sqrt());
            }
            Ok(m)
        });
        let mut m: f64 = 0.0;
        for r in rows {
            m = m.max(r?);
        }
        Ok(m)
    }

    pub fn step(&mut self) -> Result<StepInfo> {
        let grid = self.problem.grid;
        let smax = self.max_signal_speed()?;
        let dt = self.cfg.cfl * grid.hx().min(grid.hy()) / smax;
        let k = self.kernel();
        let faces = k.step_faces(&self.q, dt, smax);
        let r = k.rhs(&faces);
        let next = k.advance(&self.q, dt, &r);
        let ny = grid.ny;
        let mut ss = 0.0;
        for i in 0..grid.nx {
            let mut row = 0.0;
            for j in 0..ny {
                let d = r[i * ny + j][0];
                row += d * d;
            }
            ss += row;
        }
        let density_residual = (ss / (grid.nx * ny) as f64).sqrt();
        let mut bf = [0.0; 4];
        for j in 0..ny {
            let (e, w) = (faces.x[grid.nx * ny + j], faces.x[j]);
            for c in 0..4 {
                bf[c] += (e[c] - w[c]) * grid.hy();
            }
        }
        for i in 0..grid.nx {
            let (n, s) = (faces.y[i * (ny + 1) + ny], faces.y[i * (ny + 1)]);
            for c in 0..4 {
                bf[c] += (n[c] - s[c]) * grid.hx();
            }
        }
        self.q = next;
        Ok(StepInfo {
            dt,
            density_residual,
            boundary_flux: bf,
            faces,
        })
    }

    pub fn field(&self) -> ConservedField {
        let grid = self.problem.grid;
        ConservedField::from_nodes(grid, self.problem.gamma, |i, j| self.q.get(i as isize, j as isize))
    }

    /// Marches until the relative density residual drops below the tolerance
    /// or the iteration cap is reached.
    pub fn run(mut self) -> Result<SolveResult> {
        let mut history = Vec::new();
        let mut converged = false;
        let mut rel = f64::INFINITY;
        while history.len() < self.cfg.max_iters {
            let info = self.step()?;
            history.push(info.density_residual);
            let r0 = history[0];
            rel = if r0 > 0.0 { info.density_residual / r0 } else { 0.0 };
            if rel <= self.cfg.conv_tol {
                converged = true;
                break;
            }
        }
        let field = self.field();
        field.check_physical()?;
        Ok(SolveResult {
            label: self.cfg.label(),
            scheme: self.cfg.scheme,
            field,
            iters: history.len(),
            residual_history: history,
            converged,
            final_relative_residual: rel,
        })
    }
}

/// Steady solution of the analytic case's boundary-value problem.
pub fn solve_steady(cfg: &SchemeConfig, case: &AnalyticField, grid: &GridSpec) -> Result<SolveResult> {
    solve_steady_with(cfg, case, grid, Exec::best())
}

pub fn solve_steady_with(cfg: &SchemeConfig, case: &AnalyticField, grid: &GridSpec, exec: Exec) -> Result<SolveResult> {
    let problem = Problem::from_case(case, grid)?;
    Solver::new(cfg, &problem, exec)?.run()
}
