//! Node arrays with a ring of ghost nodes and their boundary fill.

use crate::gas::Conserved;
use crate::grid::GridSpec;

pub const GHOST: usize = 3;

/// Row-major (`i` outer) array over `[-3, nx + 3) x [-3, ny + 3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Padded<T> {
    pub nx: usize,
    pub ny: usize,
    pub stride: usize,
    pub data: Vec<T>,
}

impl<T: Copy> Padded<T> {
    pub fn filled(nx: usize, ny: usize, value: T) -> Self {
        let stride = ny + 2 * GHOST;
        Padded {
            nx,
            ny,
            stride,
            data: vec![value; (nx + 2 * GHOST) * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.nx + 2 * GHOST
    }

    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        (i + GHOST as isize) as usize * self.stride + (j + GHOST as isize) as usize
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> T {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, v: T) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn is_ghost(&self, i: isize, j: isize) -> bool {
        i < 0 || j < 0 || i >= self.nx as isize || j >= self.ny as isize
    }

    pub fn from_fn<F: FnMut(isize, isize) -> T>(nx: usize, ny: usize, fill: T, mut f: F) -> Self {
        let mut p = Self::filled(nx, ny, fill);
        let g = GHOST as isize;
        for i in -g..nx as isize + g {
            for j in -g..ny as isize + g {
                p.set(i, j, f(i, j));
            }
        }
        p
    }
}

/// Treatment of the ghost columns beyond the last `x` node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outflow {
    /// Copy of the last node column.
    Extrapolate,
    /// Fixed values from the template.
    Dirichlet,
}

/// Ghost values held fixed (left, bottom, top and optionally right) plus
/// the outflow rule.
#[derive(Debug, Clone)]
pub struct Boundary {
    template: Padded<Conserved>,
    ghosts: Vec<usize>,
    pub outflow: Outflow,
}

impl Boundary {
    /// Ghost values sampled from `f(x, y)` at the ghost-node coordinates.
    pub fn from_fn<F: Fn(f64, f64) -> Conserved>(grid: &GridSpec, outflow: Outflow, f: F) -> Self {
        let template = Padded::from_fn(grid.nx, grid.ny, [0.0; 4], |i, j| {
            if i < 0 || j < 0 || i >= grid.nx as isize || j >= grid.ny as isize {
                f(grid.x(i), grid.y(j))
            } else {
                [0.0; 4]
            }
        });
        let g = GHOST as isize;
        let mut ghosts = Vec::new();
        for i in -g..grid.nx as isize + g {
            for j in -g..grid.ny as isize + g {
                if template.is_ghost(i, j) {
                    ghosts.push(template.idx(i, j));
                }
            }
        }
        Boundary { template, ghosts, outflow }
    }

    pub fn fill(&self, q: &mut Padded<Conserved>) {
        for &k in &self.ghosts {
            q.data[k] = self.template.data[k];
        }
        if self.outflow == Outflow::Extrapolate {
            let g = GHOST as isize;
            let last = q.nx as isize - 1;
            for i in q.nx as isize..q.nx as isize + g {
                for j in -g..q.ny as isize + g {
                    let v = q.get(last, j);
                    q.set(i, j, v);
                }
            }
        }
    }
}
