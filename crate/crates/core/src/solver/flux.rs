//! Physical fluxes, Steger-Warming splitting and the HLLC Riemann solver.

use crate::gas::Conserved;

/// Direction of a face normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    X,
    Y,
}

impl Dir {
    #[inline]
    fn normal(self) -> (f64, f64) {
        match self {
            Dir::X => (1.0, 0.0),
            Dir::Y => (0.0, 1.0),
        }
    }
}

/// Primitive variables `(rho, u, v, p)`.
pub type Prim = [f64; 4];

#[inline]
pub fn to_prim(q: &Conserved, gamma: f64) -> Prim {
    let u = q[1] / q[0];
    let v = q[2] / q[0];
    let p = (gamma - 1.0) * (q[3] - 0.5 * (q[1] * u + q[2] * v));
    [q[0], u, v, p]
}

#[cfg(test)]
pub fn to_cons(w: &Prim, gamma: f64) -> Conserved {
    let e = w[3] / (gamma - 1.0) + 0.5 * w[0] * (w[1] * w[1] + w[2] * w[2]);
    [w[0], w[0] * w[1], w[0] * w[2], e]
}

#[inline]
pub fn physical_flux_prim(w: &Prim, gamma: f64, dir: Dir) -> Conserved {
    let (rho, u, v, p) = (w[0], w[1], w[2], w[3]);
    let e = p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v);
    match dir {
        Dir::X => [rho * u, rho * u * u + p, rho * u * v, u * (e + p)],
        Dir::Y => [rho * v, rho * u * v, rho * v * v + p, v * (e + p)],
    }
}

#[inline]
pub fn physical_flux(q: &Conserved, gamma: f64, dir: Dir) -> Conserved {
    physical_flux_prim(&to_prim(q, gamma), gamma, dir)
}

/// Largest signal speed `|u_n| + a` of a state along `dir`.
#[inline]
pub fn spectral_radius(q: &Conserved, gamma: f64, dir: Dir) -> f64 {
    let w = to_prim(q, gamma);
    let a = (gamma * w[3] / w[0]).sqrt();
    let un = match dir {
        Dir::X => w[1],
        Dir::Y => w[2],
    };
    un.abs() + a
}

/// Steger-Warming split flux; `positive` selects the right-running part.
pub fn steger_warming(q: &Conserved, gamma: f64, dir: Dir, positive: bool) -> Conserved {
    let w = to_prim(q, gamma);
    let (rho, u, v, p) = (w[0], w[1], w[2], w[3]);
    let (nx, ny) = dir.normal();
    let a = (gamma * p / rho).sqrt();
    let un = u * nx + v * ny;
    let part = |l: f64| if positive { 0.5 * (l + l.abs()) } else { 0.5 * (l - l.abs()) };
    let l1 = part(un - a);
    let l2 = part(un);
    let l3 = part(un + a);
    let alpha = 2.0 * (gamma - 1.0) * l2 + l1 + l3;
    let c = rho / (2.0 * gamma);
    let ad = a * (l3 - l1);
    [
        c * alpha,
        c * (alpha * u + ad * nx),
        c * (alpha * v + ad * ny),
        c * (0.5 * alpha * (u * u + v * v) + un * ad + a * a * (l1 + l3) / (gamma - 1.0)),
    ]
}

/// HLLC flux between primitive states `l` and `r` across a face normal to `dir`.
pub fn hllc(l: &Prim, r: &Prim, gamma: f64, dir: Dir) -> Conserved {
    // Rotate into (normal, tangential) components.
    let (unl, utl, unr, utr) = match dir {
        Dir::X => (l[1], l[2], r[1], r[2]),
        Dir::Y => (l[2], l[1], r[2], r[1]),
    };
    let al = (gamma * l[3] / l[0]).sqrt();
    let ar = (gamma * r[3] / r[0]).sqrt();
    let sl = (unl - al).min(unr - ar);
    let sr = (unl + al).max(unr + ar);
    let rot = |f: [f64; 4]| match dir {
        Dir::X => f,
        Dir::Y => [f[0], f[2], f[1], f[3]],
    };
    let fl = |w: &Prim, un: f64, ut: f64| {
        let e = w[3] / (gamma - 1.0) + 0.5 * w[0] * (un * un + ut * ut);
        ([w[0] * un, w[0] * un * un + w[3], w[0] * un * ut, un * (e + w[3])], [w[0], w[0] * un, w[0] * ut, e])
    };
    let (f_l, q_l) = fl(l, unl, utl);
    if sl >= 0.0 {
        return rot(f_l);
    }
    let (f_r, q_r) = fl(r, unr, utr);
    if sr <= 0.0 {
        return rot(f_r);
    }
    let ml = l[0] * (sl - unl);
    let mr = r[0] * (sr - unr);
    let s_star = (r[3] - l[3] + ml * unl - mr * unr) / (ml - mr);
    let star = |w: &Prim, s: f64, un: f64, ut: f64, q: &[f64; 4]| {
        let f = w[0] * (s - un) / (s - s_star);
        [
            f,
            f * s_star,
            f * ut,
            f * (q[3] / w[0] + (s_star - un) * (s_star + w[3] / (w[0] * (s - un)))),
        ]
    };
    let out = if s_star >= 0.0 {
        let qs = star(l, sl, unl, utl, &q_l);
        std::array::from_fn(|k| f_l[k] + sl * (qs[k] - q_l[k]))
    } else {
        let qs = star(r, sr, unr, utr, &q_r);
        std::array::from_fn(|k| f_r[k] + sr * (qs[k] - q_r[k]))
    };
    rot(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::FlowState;
    use proptest::prelude::*;

    const G: f64 = 1.4;

    fn close(a: &[f64; 4], b: &[f64; 4], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
    }

    #[test]
    fn flux_of_freestream() {
        let q = FlowState::freestream(2.0, G).to_conserved();
        let f = physical_flux(&q, G, Dir::X);
        let p = 1.0 / G;
        assert!(close(&f, &[2.0, 4.0 + p, 0.0, 2.0 * (q[3] + p)], 1e-14));
    }

    proptest! {
        #[test]
        fn splitting_sums_to_flux(rho in 0.1f64..5.0, u in -4.0f64..4.0, v in -4.0f64..4.0, p in 0.05f64..5.0) {
            let q = to_cons(&[rho, u, v, p], G);
            for dir in [Dir::X, Dir::Y] {
                let f = physical_flux(&q, G, dir);
                let s = steger_warming(&q, G, dir, true);
                let m = steger_warming(&q, G, dir, false);
                let sum: [f64; 4] = std::array::from_fn(|k| s[k] + m[k]);
                prop_assert!(close(&sum, &f, 1e-12));
            }
        }

        #[test]
        fn hllc_is_consistent(rho in 0.1f64..5.0, u in -4.0f64..4.0, v in -4.0f64..4.0, p in 0.05f64..5.0) {
            let w = [rho, u, v, p];
            for dir in [Dir::X, Dir::Y] {
                let f = physical_flux_prim(&w, G, dir);
                prop_assert!(close(&hllc(&w, &w, G, dir), &f, 1e-12));
            }
        }
    }

    #[test]
    fn supersonic_splitting_is_one_sided() {
        let q = FlowState::freestream(3.0, G).to_conserved();
        assert_eq!(steger_warming(&q, G, Dir::X, false), [0.0; 4]);
        assert!(close(&steger_warming(&q, G, Dir::X, true), &physical_flux(&q, G, Dir::X), 1e-14));
    }

    #[test]
    fn hllc_resolves_stationary_contact() {
        let l = [1.0, 0.0, 0.3, 1.0];
        let r = [0.2, 0.0, -0.5, 1.0];
        let f = hllc(&l, &r, G, Dir::X);
        assert!(f[0].abs() < 1e-14 && (f[1] - 1.0).abs() < 1e-14 && f[3].abs() < 1e-14);
    }
}
