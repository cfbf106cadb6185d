//! Uniform node grids and conservative grid functions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{conserved_to_primitive, Conserved, FlowState};

/// Uniform node grid `nx x ny` over `[x0, x0 + lx] x [y0, y0 + ly]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub lx: f64,
    pub ly: f64,
}

impl GridSpec {
    /// Unit square `[0, 1]^2`.
    pub fn unit(nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx, ny, 0.0, 0.0, 1.0, 1.0)
    }

    pub fn new(nx: usize, ny: usize, x0: f64, y0: f64, lx: f64, ly: f64) -> Result<Self> {
        let g = GridSpec { nx, ny, x0, y0, lx, ly };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 8 || self.ny < 8 {
            return Err(Error::InvalidParams(format!(
                "grid needs at least 8 nodes per direction, got {}x{}",
                self.nx, self.ny
            )));
        }
        if !(self.lx > 0.0 && self.ly > 0.0) {
            return Err(Error::InvalidParams("grid extents must be positive".into()));
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        self.lx / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        self.ly / (self.ny - 1) as f64
    }

    /// Node abscissa; accepts indices outside the grid for ghost nodes.
    pub fn x(&self, i: isize) -> f64 {
        self.x0 + self.lx * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: isize) -> f64 {
        self.y0 + self.ly * j as f64 / (self.ny - 1) as f64
    }

    pub fn center(&self) -> [f64; 2] {
        [self.x0 + 0.5 * self.lx, self.y0 + 0.5 * self.ly]
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of node `(i, j)`; `i` is the slow index.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }
}

/// Conservative variables (rho, rho u, rho v, rho E) at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedField {
    pub grid: GridSpec,
    pub gamma: f64,
    /// `nx * ny` entries, node `(i, j)` at `grid.index(i, j)`.
    pub data: Vec<Conserved>,
}

impl ConservedField {
    pub fn uniform(grid: GridSpec, state: &FlowState) -> Self {
        ConservedField {
            grid,
            gamma: state.gamma,
            data: vec![state.to_conserved(); grid.len()],
        }
    }

    pub fn from_fn<F: Fn(f64, f64) -> Conserved>(grid: GridSpec, gamma: f64, f: F) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                data.push(f(grid.x(i as isize), grid.y(j as isize)));
            }
        }
        ConservedField { grid, gamma, data }
    }

    /// Field from node indices.
    pub fn from_nodes<F: FnMut(usize, usize) -> Conserved>(grid: GridSpec, gamma: f64, mut f: F) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                data.push(f(i, j));
            }
        }
        ConservedField { grid, gamma, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Conserved {
        &self.data[self.grid.index(i, j)]
    }

    pub fn state(&self, i: usize, j: usize) -> Result<FlowState> {
        conserved_to_primitive(self.at(i, j), self.gamma).map_err(|e| match e {
            Error::NonPhysicalState { reason, .. } => Error::NonPhysicalState {
                node: Some((i, j)),
                reason,
            },
            other => other,
        })
    }

    /// First node that does not decode to a valid state.
    pub fn check_physical(&self) -> Result<()> {
        for i in 0..self.grid.nx {
            for j in 0..self.grid.ny {
                self.state(i, j)?;
            }
        }
        Ok(())
    }

    pub fn same_grid(&self, other: &ConservedField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &ConservedField) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .flat_map(|(a, b)| (0..4).map(move |k| (a[k] - b[k]).abs()))
            .fold(0.0, f64::max)
    }
}
