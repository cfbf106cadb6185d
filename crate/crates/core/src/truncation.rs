//! Truncation-error estimate of a steady solution: the Euler flux divergence
//! evaluated with a sixth-order central stencil.

use crate::error::{Error, Result};
use crate::geometry::{GridVector, VectorSpec};
use crate::grid::ConservedField;
use crate::solver::{physical_flux, Dir};

const W: [f64; 3] = [45.0, -9.0, 1.0];

/// Sixth-order central first derivative at `k` of equally spaced samples.
pub fn stencil_d1_sixth(values: &[f64], k: usize, h: f64) -> Result<f64> {
    if k < 3 || k + 3 >= values.len() {
        return Err(Error::StencilOutOfRange { index: k, len: values.len() });
    }
    Ok(d1(|o| values[(k as isize + o) as usize], h))
}

#[inline]
fn d1<F: Fn(isize) -> f64>(f: F, h: f64) -> f64 {
    let mut s = 0.0;
    for (m, w) in W.iter().enumerate() {
        let o = m as isize + 1;
        s += w * (f(o) - f(-o));
    }
    s / (60.0 * h)
}

/// Residual `dF/dx + dG/dy` at the masked nodes, all variables, unit scales.
pub fn high_order_residual(field: &ConservedField, margin: usize) -> Result<GridVector> {
    high_order_residual_with(field, &VectorSpec::new(margin, crate::geometry::Variables::All))
}

pub fn high_order_residual_with(field: &ConservedField, spec: &VectorSpec) -> Result<GridVector> {
    let grid = &field.grid;
    let n = grid.nx.min(grid.ny);
    if spec.margin < 3 || 2 * spec.margin >= n {
        return Err(Error::StencilOutOfRange { index: spec.margin, len: n });
    }
    let g = field.gamma;
    let fx: Vec<[f64; 4]> = field.data.iter().map(|q| physical_flux(q, g, Dir::X)).collect();
    let fy: Vec<[f64; 4]> = field.data.iter().map(|q| physical_flux(q, g, Dir::Y)).collect();
    let (hx, hy) = (grid.hx(), grid.hy());
    GridVector::from_nodes(grid, spec, |i, j| {
        std::array::from_fn(|c| {
            let ddx = d1(|o| fx[grid.index((i as isize + o) as usize, j)][c], hx);
            let ddy = d1(|o| fy[grid.index(i, (j as isize + o) as usize)][c], hy);
            ddx + ddy
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::FlowState;
    use crate::grid::GridSpec;
    use crate::solver::Manufactured;

    #[test]
    fn constant_has_zero_derivative() {
        assert_eq!(stencil_d1_sixth(&[2.5; 9], 4, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn polynomials_through_degree_six() {
        for deg in 0..=6 {
            for &x0 in &[-1.3, 0.0, 2.0] {
                let h = 0.25;
                let xs: Vec<f64> = (0..7).map(|k| x0 + (k as f64 - 3.0) * h).collect();
                let f: Vec<f64> = xs.iter().map(|x| x.powi(deg)).collect();
                let exact = if deg == 0 { 0.0 } else { deg as f64 * x0.powi(deg - 1) };
                let c = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0];
                let scale = c.iter().zip(&f).map(|(c, v)| (c * v).abs()).sum::<f64>() / (60.0 * h);
                let got = stencil_d1_sixth(&f, 3, h).unwrap();
                assert!((got - exact).abs() <= 1e-12 * scale, "deg {deg} x0 {x0}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn x_sixth_on_unit_line() {
        let f: Vec<f64> = (0..11).map(|k| (k as f64).powi(6)).collect();
        let got = stencil_d1_sixth(&f, 5, 1.0).unwrap();
        assert!((got - 6.0 * 5f64.powi(5)).abs() <= 1e-10 * 6.0 * 5f64.powi(5));
    }

    #[test]
    fn sine_converges_at_sixth_order() {
        let err = |h: f64| {
            let f: Vec<f64> = (0..7).map(|k| (1.0 + (k as f64 - 3.0) * h).sin()).collect();
            (stencil_d1_sixth(&f, 3, h).unwrap() - 1f64.cos()).abs()
        };
        let r = err(0.2) / err(0.1);
        assert!((r - 64.0).abs() < 6.4, "{r}");
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(stencil_d1_sixth(&[0.0; 7], 2, 1.0), Err(Error::StencilOutOfRange { .. })));
        assert!(matches!(stencil_d1_sixth(&[0.0; 7], 4, 1.0), Err(Error::StencilOutOfRange { .. })));
        let grid = GridSpec::unit(10, 10).unwrap();
        let f = ConservedField::uniform(grid, &FlowState::freestream(2.0, 1.4));
        assert!(high_order_residual(&f, 2).is_err());
    }

    #[test]
    fn uniform_field_has_zero_residual() {
        let grid = GridSpec::unit(12, 12).unwrap();
        let f = ConservedField::uniform(grid, &FlowState::freestream(3.0, 1.4));
        let r = high_order_residual(&f, 3).unwrap();
        assert_eq!(r.len(), 6 * 6 * 4);
        assert!(r.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn smooth_residual_is_sixth_order() {
        // Without the source the exact field's residual equals the source;
        // subtracting it leaves the stencil error.
        let m = Manufactured::default();
        let err = |n: usize| {
            let grid = GridSpec::new(n, n, 0.0, 0.0, 12.0, 12.0).unwrap();
            let r = high_order_residual(&m.exact(&grid), 3).unwrap();
            let s = GridVector::from_nodes(&grid, &VectorSpec::new(3, crate::geometry::Variables::All), |i, j| {
                m.source(grid.x(i as isize), grid.y(j as isize))
            })
            .unwrap();
            r.sub(&s).unwrap().values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
        };
        let (e1, e2) = (err(21), err(41));
        let ratio = e1 / e2;
        assert!(ratio > 45.0 && ratio < 80.0, "{ratio}");
    }

    #[test]
    fn translation_invariance() {
        let m = Manufactured::default();
        let g1 = GridSpec::unit(16, 16).unwrap();
        let g2 = GridSpec::new(16, 16, 5.0, -3.0, 1.0, 1.0).unwrap();
        let f1 = m.exact(&g1);
        let mut f2 = f1.clone();
        f2.grid = g2;
        let a = high_order_residual(&f1, 3).unwrap();
        let b = high_order_residual(&f2, 3).unwrap();
        assert_eq!(a.values, b.values);
    }
}
