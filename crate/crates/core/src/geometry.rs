//! Grid functions as vectors in `R^N`: masks, normalization, inner products
//! and angles between error vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::FlowState;
use crate::grid::{ConservedField, GridSpec};
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variables {
    #[default]
    All,
    Density,
}

impl Variables {
    pub fn indices(self) -> &'static [usize] {
        match self {
            Variables::All => &[0, 1, 2, 3],
            Variables::Density => &[0],
        }
    }
}

/// How a conservative grid function is flattened into a vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorSpec {
    /// Nodes dropped at every boundary.
    pub margin: usize,
    pub variables: Variables,
    /// Divisors applied per conservative variable.
    pub normalization: [f64; 4],
}

impl VectorSpec {
    pub fn new(margin: usize, variables: Variables) -> Self {
        VectorSpec {
            margin,
            variables,
            normalization: [1.0; 4],
        }
    }

    /// Freestream scales `(rho, rho a, rho a, rho a^2)`.
    pub fn freestream(margin: usize, variables: Variables, free: &FlowState) -> Self {
        let a = free.sound_speed();
        VectorSpec {
            margin,
            variables,
            normalization: [free.rho, free.rho * a, free.rho * a, free.rho * a * a],
        }
    }
}

/// Interior node box surviving the margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mask {
    pub grid: GridSpec,
    pub margin: usize,
}

impl Mask {
    pub fn i_range(&self) -> std::ops::Range<usize> {
        self.margin..self.grid.nx.saturating_sub(self.margin)
    }

    pub fn j_range(&self) -> std::ops::Range<usize> {
        self.margin..self.grid.ny.saturating_sub(self.margin)
    }

    pub fn len(&self) -> usize {
        self.i_range().len() * self.j_range().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.i_range().contains(&i) && self.j_range().contains(&j)
    }
}

/// Flattened grid function: masked nodes (i outer, j inner), then the
/// selected variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridVector {
    pub values: Vec<f64>,
    pub mask: Option<Mask>,
    pub variables: Variables,
    pub normalization: [f64; 4],
    /// Quadrature weight `hx * hy` applied to reported norms.
    pub cell_area: f64,
}

impl GridVector {
    /// Plain vector without grid metadata (unit weight).
    pub fn from_values(values: Vec<f64>) -> Self {
        GridVector {
            values,
            mask: None,
            variables: Variables::All,
            normalization: [1.0; 4],
            cell_area: 1.0,
        }
    }

    /// Samples `f(i, j)` over the masked nodes.
    pub fn from_nodes<F: Fn(usize, usize) -> [f64; 4]>(grid: &GridSpec, spec: &VectorSpec, f: F) -> Result<Self> {
        let mask = Mask { grid: *grid, margin: spec.margin };
        if mask.is_empty() {
            return Err(Error::GridMismatch(format!(
                "margin {} leaves no interior nodes on a {}x{} grid",
                spec.margin, grid.nx, grid.ny
            )));
        }
        let vars = spec.variables.indices();
        let mut values = Vec::with_capacity(mask.len() * vars.len());
        for i in mask.i_range() {
            for j in mask.j_range() {
                let v = f(i, j);
                for &c in vars {
                    values.push(v[c] / spec.normalization[c]);
                }
            }
        }
        Ok(GridVector {
            values,
            mask: Some(mask),
            variables: spec.variables,
            normalization: spec.normalization,
            cell_area: grid.hx() * grid.hy(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_compatible(&self, other: &GridVector) -> Result<()> {
        if self.mask != other.mask
            || self.variables != other.variables
            || self.normalization != other.normalization
            || self.values.len() != other.values.len()
        {
            return Err(Error::MetadataMismatch(format!(
                "vectors of length {} and {} with different masks, variables or scales",
                self.values.len(),
                other.values.len()
            )));
        }
        Ok(())
    }

    pub fn sub(&self, other: &GridVector) -> Result<GridVector> {
        self.check_compatible(other)?;
        Ok(GridVector {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            ..self.clone()
        })
    }

    pub fn scaled(&self, c: f64) -> GridVector {
        GridVector {
            values: self.values.iter().map(|v| c * v).collect(),
            ..self.clone()
        }
    }

    /// Unweighted Euclidean norm.
    pub fn euclidean_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Discrete `L2` norm with the cell-area weight.
    pub fn norm(&self) -> f64 {
        self.cell_area.sqrt() * self.euclidean_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// `numerical - exact`, scaled and flattened.
pub fn error_vector(numerical: &ConservedField, exact: &ConservedField, spec: &VectorSpec) -> Result<GridVector> {
    numerical.same_grid(exact)?;
    GridVector::from_nodes(&numerical.grid, spec, |i, j| {
        let (a, b) = (numerical.at(i, j), exact.at(i, j));
        std::array::from_fn(|c| a[c] - b[c])
    })
}

/// The solution itself, scaled and flattened.
pub fn solution_vector(field: &ConservedField, spec: &VectorSpec) -> Result<GridVector> {
    GridVector::from_nodes(&field.grid, spec, |i, j| *field.at(i, j))
}

/// Unweighted sum of products.
pub fn inner_product(a: &GridVector, b: &GridVector) -> Result<f64> {
    a.check_compatible(b)?;
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum())
}

/// Angle in degrees from the uncentered cosine.
pub fn angle_between(a: &GridVector, b: &GridVector) -> Result<f64> {
    angle_between_with(a, b, false)
}

/// Angle in degrees; `centered` subtracts each vector's mean first.
pub fn angle_between_with(a: &GridVector, b: &GridVector, centered: bool) -> Result<f64> {
    a.check_compatible(b)?;
    let (ma, mb) = if centered {
        let n = a.values.len() as f64;
        (a.values.iter().sum::<f64>() / n, b.values.iter().sum::<f64>() / n)
    } else {
        (0.0, 0.0)
    };
    let na = a.values.iter().map(|x| (x - ma) * (x - ma)).sum::<f64>().sqrt();
    let nb = b.values.iter().map(|y| (y - mb) * (y - mb)).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    // Half-angle form stays accurate near 0 and 180 degrees.
    let (mut d2, mut s2) = (0.0, 0.0);
    for (x, y) in a.values.iter().zip(&b.values) {
        let (x, y) = ((x - ma) / na, (y - mb) / nb);
        d2 += (x - y) * (x - y);
        s2 += (x + y) * (x + y);
    }
    Ok((2.0 * d2.sqrt().atan2(s2.sqrt())).to_degrees())
}

/// Symmetric `K x K` matrix of angles, zero diagonal.
pub fn pairwise_angles(vectors: &[GridVector], centered: bool, exec: Exec) -> Result<Vec<Vec<f64>>> {
    let k = vectors.len();
    if k < 2 {
        return Err(Error::InvalidParams("need at least two vectors".into()));
    }
    let pairs = upper_pairs(k);
    let vals = exec.map(pairs.len(), |p| {
        let (a, b) = pairs[p];
        angle_between_with(&vectors[a], &vectors[b], centered)
    });
    let mut m = vec![vec![0.0; k]; k];
    for (p, v) in pairs.iter().zip(vals) {
        let v = v?;
        m[p.0][p.1] = v;
        m[p.1][p.0] = v;
    }
    Ok(m)
}

/// `(k, m)` with `k < m` in row order.
pub fn upper_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for a in 0..k {
        for b in a + 1..k {
            v.push((a, b));
        }
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleSummary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Statistics of a sequence of values; `None` when it is empty.
pub fn summarize<I: IntoIterator<Item = f64>>(values: I) -> Option<AngleSummary> {
    let mut count = 0;
    let (mut sum, mut min, mut max) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        count += 1;
        sum += v;
        min = min.min(v);
        max = max.max(v);
    }
    (count > 0).then(|| AngleSummary {
        count,
        mean: sum / count as f64,
        min,
        max,
    })
}

/// Mean, minimum and maximum over the upper-triangle entries.
pub fn angle_summary(matrix: &[Vec<f64>]) -> Option<AngleSummary> {
    summarize(upper_pairs(matrix.len()).into_iter().map(|(a, b)| matrix[a][b]))
}
