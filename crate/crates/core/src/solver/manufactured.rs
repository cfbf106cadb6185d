//! Smooth manufactured steady solution for grid-convergence checks.

use serde::Serialize;

use super::config::SchemeConfig;
use super::padded::{Boundary, Outflow, Padded};
use super::{Problem, Solver};
use crate::error::{Error, Result};
use crate::gas::{Conserved, FlowState};
use crate::grid::{ConservedField, GridSpec};
use crate::par::Exec;

/// Supersonic smooth field `w = (rho, u, v, p)` built from sines and cosines,
/// with the source that makes it an exact steady Euler solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manufactured {
    pub gamma: f64,
}

impl Default for Manufactured {
    fn default() -> Self {
        Manufactured { gamma: crate::gas::DEFAULT_GAMMA }
    }
}

impl Manufactured {
    /// Primitive state and its `x` and `y` derivatives.
    pub fn eval(&self, x: f64, y: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
        let g = self.gamma;
        let (a, ax, ay) = (0.2 + 0.5 * x + 0.4 * y, 0.5, 0.4);
        let (b, bx, by) = (0.3 + 0.5 * x + 0.3 * y, 0.5, 0.3);
        let (c, cx, cy) = (0.1 + 0.4 * x + 0.6 * y, 0.4, 0.6);
        let (d, dx, dy) = (0.2 + 0.3 * x + 0.5 * y, 0.3, 0.5);
        let w = [
            1.0 + 0.15 * a.sin(),
            2.5 + 0.2 * b.cos(),
            0.3 + 0.15 * c.sin(),
            (1.0 + 0.2 * d.cos()) / g,
        ];
        let dw = |ex: f64, fx: f64, gx: f64, hx: f64| {
            [
                0.15 * a.cos() * ex,
                -0.2 * b.sin() * fx,
                0.15 * c.cos() * gx,
                -0.2 * d.sin() * hx / g,
            ]
        };
        (w, dw(ax, bx, cx, dx), dw(ay, by, cy, dy))
    }

    pub fn state(&self, x: f64, y: f64) -> FlowState {
        let (w, _, _) = self.eval(x, y);
        FlowState {
            rho: w[0],
            u: w[1],
            v: w[2],
            p: w[3],
            gamma: self.gamma,
        }
    }

    /// `dF/dx + dG/dy` of the exact field.
    pub fn source(&self, x: f64, y: f64) -> Conserved {
        let g = self.gamma;
        let (w, wx, wy) = self.eval(x, y);
        let (r, u, v, p) = (w[0], w[1], w[2], w[3]);
        let e = p / (g - 1.0) + 0.5 * r * (u * u + v * v);
        let de = |d: &[f64; 4]| d[3] / (g - 1.0) + 0.5 * d[0] * (u * u + v * v) + r * (u * d[1] + v * d[2]);
        let (ex, ey) = (de(&wx), de(&wy));
        let fx = [
            wx[0] * u + r * wx[1],
            wx[0] * u * u + 2.0 * r * u * wx[1] + wx[3],
            wx[0] * u * v + r * wx[1] * v + r * u * wx[2],
            wx[1] * (e + p) + u * (ex + wx[3]),
        ];
        let gy = [
            wy[0] * v + r * wy[2],
            wy[0] * u * v + r * wy[1] * v + r * u * wy[2],
            wy[0] * v * v + 2.0 * r * v * wy[2] + wy[3],
            wy[2] * (e + p) + v * (ey + wy[3]),
        ];
        std::array::from_fn(|k| fx[k] + gy[k])
    }

    pub fn exact(&self, grid: &GridSpec) -> ConservedField {
        ConservedField::from_fn(*grid, self.gamma, |x, y| self.state(x, y).to_conserved())
    }

    /// Exact data on every ghost node, the source on the padded grid and a
    /// uniform start at the centre state.
    pub fn problem(&self, grid: &GridSpec) -> Problem {
        let boundary = Boundary::from_fn(grid, Outflow::Dirichlet, |x, y| self.state(x, y).to_conserved());
        let source = Padded::from_fn(grid.nx, grid.ny, [0.0; 4], |i, j| self.source(grid.x(i), grid.y(j)));
        Problem {
            grid: *grid,
            gamma: self.gamma,
            boundary,
            initial: ConservedField::uniform(*grid, &self.state(grid.x0 + 0.5 * grid.lx, grid.y0 + 0.5 * grid.ly)),
            source: Some(source),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderResult {
    pub sizes: Vec<usize>,
    pub spacing: Vec<f64>,
    /// Node-RMS density error on each grid.
    pub errors: Vec<f64>,
    pub iters: Vec<usize>,
    /// Least-squares slope of `log(error)` against `log(h)`; `None` when an
    /// error vanishes.
    pub order: Option<f64>,
}

/// Least-squares slope in log-log coordinates.
pub fn observed_order(h: &[f64], err: &[f64]) -> Option<f64> {
    if err.iter().any(|e| !(*e > 0.0)) || h.len() < 2 {
        return None;
    }
    let n = h.len() as f64;
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

fn rms_density_error(a: &ConservedField, b: &ConservedField) -> f64 {
    let s: f64 = a.data.iter().zip(&b.data).map(|(p, q)| (p[0] - q[0]).powi(2)).sum();
    (s / a.data.len() as f64).sqrt()
}

/// Steady solutions on unit-square grids of the given node counts and the
/// observed order of the density error.
pub fn verify_order(cfg: &SchemeConfig, case: &Manufactured, sizes: &[usize], exec: Exec) -> Result<OrderResult> {
    let mut spacing = Vec::new();
    let mut errors = Vec::new();
    let mut iters = Vec::new();
    for &n in sizes {
        let grid = GridSpec::unit(n, n)?;
        let problem = case.problem(&grid);
        let r = Solver::new(cfg, &problem, exec)?.run()?;
        if !r.converged {
            return Err(Error::NotConverged {
                label: cfg.label(),
                iters: r.iters,
                residual: r.final_relative_residual,
            });
        }
        spacing.push(grid.hx());
        errors.push(rms_density_error(&r.field, &case.exact(&grid)));
        iters.push(r.iters);
    }
    Ok(OrderResult {
        sizes: sizes.to_vec(),
        order: observed_order(&spacing, &errors),
        spacing,
        errors,
        iters,
    })
}
