//! Face-flux kernels. Every scheme reduces to effective fluxes on the `x`
//! faces `i + 1/2` (`i = -1..nx`) and `y` faces `j + 1/2` (`j = -1..ny`).

use super::config::{AvKind, EpsScaling, Splitting, Limiter, SchemeConfig, SchemeId, WenoWeights};
use super::flux::{hllc, physical_flux, spectral_radius, steger_warming, to_prim, Dir, Prim};
use super::padded::{Boundary, Padded};
use crate::gas::Conserved;
use crate::par::Exec;

/// Effective face fluxes of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct Faces {
    /// `(nx + 1) x ny`, index `(i + 1) * ny + j`.
    pub x: Vec<Conserved>,
    /// `nx x (ny + 1)`, index `i * (ny + 1) + j + 1`.
    pub y: Vec<Conserved>,
}

impl Faces {
    fn zeros(nx: usize, ny: usize) -> Self {
        Faces {
            x: vec![[0.0; 4]; (nx + 1) * ny],
            y: vec![[0.0; 4]; nx * (ny + 1)],
        }
    }

    fn combine(parts: &[(f64, &Faces)]) -> Faces {
        let mix = |sel: fn(&Faces) -> &Vec<Conserved>| -> Vec<Conserved> {
            (0..sel(parts[0].1).len())
                .map(|k| {
                    std::array::from_fn(|c| {
                        let mut s = 0.0;
                        for (w, f) in parts {
                            s += w * sel(f)[k][c];
                        }
                        s
                    })
                })
                .collect()
        };
        Faces {
            x: mix(|f| &f.x),
            y: mix(|f| &f.y),
        }
    }
}

#[inline]
fn add(a: Conserved, b: Conserved) -> Conserved {
    std::array::from_fn(|k| a[k] + b[k])
}

#[inline]
fn half_sum(a: Conserved, b: Conserved) -> Conserved {
    std::array::from_fn(|k| 0.5 * (a[k] + b[k]))
}

#[inline]
fn limit(l: Limiter, a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        return 0.0;
    }
    match l {
        Limiter::Minmod => {
            if a.abs() < b.abs() {
                a
            } else {
                b
            }
        }
        Limiter::Vanleer => 2.0 * a * b / (a + b),
    }
}

/// Third-order WENO value at the face right of `c` from `(m, c, p)`.
#[inline]
fn weno3_face(m: f64, c: f64, p: f64, eps: f64, weights: WenoWeights) -> f64 {
    let p0 = -0.5 * m + 1.5 * c;
    let p1 = 0.5 * c + 0.5 * p;
    let b0 = (c - m) * (c - m);
    let b1 = (p - c) * (p - c);
    let (a0, a1) = match weights {
        WenoWeights::Js => ((1.0 / 3.0) / ((eps + b0) * (eps + b0)), (2.0 / 3.0) / ((eps + b1) * (eps + b1))),
        WenoWeights::Z => {
            let tau = (b0 - b1).abs();
            ((1.0 / 3.0) * (1.0 + tau / (eps + b0)), (2.0 / 3.0) * (1.0 + tau / (eps + b1)))
        }
    };
    (a0 * p0 + a1 * p1) / (a0 + a1)
}

pub(crate) struct Kernel<'a> {
    pub cfg: &'a SchemeConfig,
    pub gamma: f64,
    pub hx: f64,
    pub hy: f64,
    pub nx: usize,
    pub ny: usize,
    pub exec: Exec,
    pub boundary: &'a Boundary,
    pub source: Option<&'a Padded<Conserved>>,
}

impl Kernel<'_> {
    /// Fills `x` faces row by row with `f(i, j)`, `i` from -1.
    fn fill_x<F: Fn(isize, isize) -> Conserved + Sync + Send>(&self, out: &mut [Conserved], f: F) {
        let ny = self.ny;
        self.exec.for_each_chunk(out, ny, |k, row| {
            let i = k as isize - 1;
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(i, j as isize);
            }
        });
    }

    /// Fills `y` faces row by row with `f(i, j)`, `j` from -1.
    fn fill_y<F: Fn(isize, isize) -> Conserved + Sync + Send>(&self, out: &mut [Conserved], f: F) {
        let ny = self.ny;
        self.exec.for_each_chunk(out, ny + 1, |k, row| {
            let i = k as isize;
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(i, j as isize - 1);
            }
        });
    }

    /// Node-wise map over the padded array.
    fn map_padded<T, F>(&self, q: &Padded<Conserved>, init: T, f: F) -> Padded<T>
    where
        T: Copy + Send + Sync,
        F: Fn(&Conserved) -> T + Sync + Send,
    {
        let mut out = Padded::filled(q.nx, q.ny, init);
        let stride = q.stride;
        self.exec.for_each_chunk(&mut out.data, stride, |k, row| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(&q.data[k * stride + j]);
            }
        });
        out
    }

    fn src(&self, i: isize, j: isize) -> Conserved {
        match self.source {
            Some(s) => s.get(i, j),
            None => [0.0; 4],
        }
    }

    /// Time derivative at nodes implied by `faces`, including the source.
    pub fn rhs(&self, faces: &Faces) -> Vec<Conserved> {
        let (nx, ny) = (self.nx, self.ny);
        let mut out = vec![[0.0; 4]; nx * ny];
        let (hx, hy) = (self.hx, self.hy);
        self.exec.for_each_chunk(&mut out, ny, |i, row| {
            for (j, v) in row.iter_mut().enumerate() {
                let fe = faces.x[(i + 1) * ny + j];
                let fw = faces.x[i * ny + j];
                let fn_ = faces.y[i * (ny + 1) + j + 1];
                let fs = faces.y[i * (ny + 1) + j];
                let s = self.src(i as isize, j as isize);
                *v = std::array::from_fn(|c| -((fe[c] - fw[c]) / hx + (fn_[c] - fs[c]) / hy) + s[c]);
            }
        });
        out
    }

    /// `q0 + dt * r` on the nodes, ghosts refilled.
    pub fn advance(&self, q0: &Padded<Conserved>, dt: f64, r: &[Conserved]) -> Padded<Conserved> {
        let mut q = q0.clone();
        let ny = self.ny;
        for i in 0..self.nx {
            for j in 0..ny {
                let k = q.idx(i as isize, j as isize);
                let d = r[i * ny + j];
                q.data[k] = std::array::from_fn(|c| q0.data[k][c] + dt * d[c]);
            }
        }
        self.boundary.fill(&mut q);
        q
    }

    fn add_viscosity(&self, q: &Padded<Conserved>, smax: f64, faces: &mut Faces) {
        let mu = self.cfg.av_mu * smax;
        if self.cfg.av_kind == AvKind::None || mu == 0.0 {
            return;
        }
        let kind = self.cfg.av_kind;
        let term = |m: Conserved, c: Conserved, p: Conserved, pp: Conserved| -> Conserved {
            match kind {
                AvKind::Second => std::array::from_fn(|k| -mu * (p[k] - c[k])),
                AvKind::Fourth => std::array::from_fn(|k| mu * ((pp[k] - m[k]) - 3.0 * (p[k] - c[k]))),
                AvKind::None => [0.0; 4],
            }
        };
        let ny = self.ny;
        self.exec.for_each_chunk(&mut faces.x, ny, |k, row| {
            let i = k as isize - 1;
            for (j, v) in row.iter_mut().enumerate() {
                let j = j as isize;
                *v = add(*v, term(q.get(i - 1, j), q.get(i, j), q.get(i + 1, j), q.get(i + 2, j)));
            }
        });
        self.exec.for_each_chunk(&mut faces.y, ny + 1, |k, row| {
            let i = k as isize;
            for (j, v) in row.iter_mut().enumerate() {
                let j = j as isize - 1;
                *v = add(*v, term(q.get(i, j - 1), q.get(i, j), q.get(i, j + 1), q.get(i, j + 2)));
            }
        });
    }

    /// Spatial face fluxes of a single stage (upwind and WENO kernels).
    fn stage_faces(&self, q: &Padded<Conserved>, smax: f64) -> Faces {
        let g = self.gamma;
        let mut faces = Faces::zeros(self.nx, self.ny);
        match self.cfg.scheme {
            SchemeId::Cir1 => {
                self.fill_x(&mut faces.x, |i, j| {
                    add(
                        steger_warming(&q.get(i, j), g, Dir::X, true),
                        steger_warming(&q.get(i + 1, j), g, Dir::X, false),
                    )
                });
                self.fill_y(&mut faces.y, |i, j| {
                    add(
                        steger_warming(&q.get(i, j), g, Dir::Y, true),
                        steger_warming(&q.get(i, j + 1), g, Dir::Y, false),
                    )
                });
            }
            SchemeId::MusclHllc2 => {
                let w = self.map_padded(q, [0.0; 4], |c| to_prim(c, g));
                let lim = self.cfg.limiter;
                let recon = |m: Prim, c: Prim, p: Prim, pp: Prim| -> (Prim, Prim) {
                    let l = std::array::from_fn(|k| c[k] + 0.5 * limit(lim, c[k] - m[k], p[k] - c[k]));
                    let r = std::array::from_fn(|k| p[k] - 0.5 * limit(lim, p[k] - c[k], pp[k] - p[k]));
                    (l, r)
                };
                self.fill_x(&mut faces.x, |i, j| {
                    let (l, r) = recon(w.get(i - 1, j), w.get(i, j), w.get(i + 1, j), w.get(i + 2, j));
                    hllc(&l, &r, g, Dir::X)
                });
                self.fill_y(&mut faces.y, |i, j| {
                    let (l, r) = recon(w.get(i, j - 1), w.get(i, j), w.get(i, j + 1), w.get(i, j + 2));
                    hllc(&l, &r, g, Dir::Y)
                });
            }
            SchemeId::Weno3 => {
                let wt = self.cfg.weno_weights;
                let eps_for = |h: f64| match self.cfg.weno_eps_scaling {
                    EpsScaling::Fixed => self.cfg.weno_eps,
                    EpsScaling::MeshSquared => self.cfg.weno_eps * h * h,
                };
                let (ex, ey) = (eps_for(self.hx), eps_for(self.hy));
                let fx = self.map_padded(q, [0.0; 4], |c| physical_flux(c, g, Dir::X));
                let fy = self.map_padded(q, [0.0; 4], |c| physical_flux(c, g, Dir::Y));
                let rx = self.map_padded(q, 0.0, |c| spectral_radius(c, g, Dir::X));
                let ry = self.map_padded(q, 0.0, |c| spectral_radius(c, g, Dir::Y));
                let global = match self.cfg.weno_splitting {
                    Splitting::Global => Some(rx.data.iter().chain(&ry.data).cloned().fold(0.0, f64::max)),
                    Splitting::Local => None,
                };
                let face = |f: [Conserved; 4], u: [Conserved; 4], r: [f64; 4], eps: f64| -> Conserved {
                    let a = global.unwrap_or_else(|| r.iter().cloned().fold(0.0, f64::max));
                    std::array::from_fn(|c| {
                        let pl = |k: usize| 0.5 * (f[k][c] + a * u[k][c]);
                        let mi = |k: usize| 0.5 * (f[k][c] - a * u[k][c]);
                        weno3_face(pl(0), pl(1), pl(2), eps, wt) + weno3_face(mi(3), mi(2), mi(1), eps, wt)
                    })
                };
                self.fill_x(&mut faces.x, |i, j| {
                    let s = [(i - 1, j), (i, j), (i + 1, j), (i + 2, j)];
                    face(s.map(|(a, b)| fx.get(a, b)), s.map(|(a, b)| q.get(a, b)), s.map(|(a, b)| rx.get(a, b)), ex)
                });
                self.fill_y(&mut faces.y, |i, j| {
                    let s = [(i, j - 1), (i, j), (i, j + 1), (i, j + 2)];
                    face(s.map(|(a, b)| fy.get(a, b)), s.map(|(a, b)| q.get(a, b)), s.map(|(a, b)| ry.get(a, b)), ey)
                });
            }
            SchemeId::Maccormack | SchemeId::LaxWendroff2 => unreachable!("two-level schemes are built in step"),
        }
        self.add_viscosity(q, smax, &mut faces);
        faces
    }

    fn maccormack_faces(&self, q: &Padded<Conserved>, dt: f64, smax: f64) -> Faces {
        let g = self.gamma;
        let (hx, hy) = (self.hx, self.hy);
        let f = self.map_padded(q, [0.0; 4], |c| physical_flux(c, g, Dir::X));
        let gf = self.map_padded(q, [0.0; 4], |c| physical_flux(c, g, Dir::Y));
        // Forward-difference predictor on i, j in [-1, n - 1].
        let mut star = q.clone();
        let stride = q.stride;
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        self.exec.for_each_chunk(&mut star.data, stride, |k, row| {
            let i = k as isize - 3;
            if i < -1 || i > nx - 1 {
                return;
            }
            for j in -1..ny {
                let s = self.src(i, j);
                let a = f.get(i + 1, j);
                let b = f.get(i, j);
                let c = gf.get(i, j + 1);
                let d = gf.get(i, j);
                let qc = q.get(i, j);
                row[(j + 3) as usize] =
                    std::array::from_fn(|m| qc[m] - dt * ((a[m] - b[m]) / hx + (c[m] - d[m]) / hy) + dt * s[m]);
            }
        });
        let mut faces = Faces::zeros(self.nx, self.ny);
        self.fill_x(&mut faces.x, |i, j| half_sum(f.get(i + 1, j), physical_flux(&star.get(i, j), g, Dir::X)));
        self.fill_y(&mut faces.y, |i, j| half_sum(gf.get(i, j + 1), physical_flux(&star.get(i, j), g, Dir::Y)));
        self.add_viscosity(q, smax, &mut faces);
        faces
    }

    fn lax_wendroff_faces(&self, q: &Padded<Conserved>, dt: f64, smax: f64) -> Faces {
        let g = self.gamma;
        let (hx, hy) = (self.hx, self.hy);
        let f = self.map_padded(q, [0.0; 4], |c| physical_flux(c, g, Dir::X));
        let gf = self.map_padded(q, [0.0; 4], |c| physical_flux(c, g, Dir::Y));
        // Cell-corner states at (i + 1/2, j + 1/2), stored at (i, j).
        let mut fc = Padded::filled(self.nx, self.ny, [0.0; 4]);
        let mut gc = Padded::filled(self.nx, self.ny, [0.0; 4]);
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let stride = q.stride;
        let corner = |i: isize, j: isize| -> Conserved {
            let (a, b, c, d) = (q.get(i, j), q.get(i + 1, j), q.get(i, j + 1), q.get(i + 1, j + 1));
            let (fa, fb, fcc, fd) = (f.get(i, j), f.get(i + 1, j), f.get(i, j + 1), f.get(i + 1, j + 1));
            let (ga, gb, gcc, gd) = (gf.get(i, j), gf.get(i + 1, j), gf.get(i, j + 1), gf.get(i + 1, j + 1));
            let (sa, sb, sc, sd) = (self.src(i, j), self.src(i + 1, j), self.src(i, j + 1), self.src(i + 1, j + 1));
            std::array::from_fn(|m| {
                let avg = 0.25 * ((a[m] + b[m]) + (c[m] + d[m]));
                let dfx = ((fb[m] + fd[m]) - (fa[m] + fcc[m])) / (2.0 * hx);
                let dgy = ((gcc[m] + gd[m]) - (ga[m] + gb[m])) / (2.0 * hy);
                let s = 0.25 * ((sa[m] + sb[m]) + (sc[m] + sd[m]));
                avg - 0.5 * dt * (dfx + dgy) + 0.5 * dt * s
            })
        };
        let fill = |out: &mut Padded<Conserved>, dir: Dir| {
            self.exec.for_each_chunk(&mut out.data, stride, |k, row| {
                let i = k as isize - 3;
                if i < -1 || i > nx - 1 {
                    return;
                }
                for j in -1..ny {
                    row[(j + 3) as usize] = physical_flux(&corner(i, j), g, dir);
                }
            });
        };
        fill(&mut fc, Dir::X);
        fill(&mut gc, Dir::Y);
        let mut faces = Faces::zeros(self.nx, self.ny);
        self.fill_x(&mut faces.x, |i, j| half_sum(fc.get(i, j), fc.get(i, j - 1)));
        self.fill_y(&mut faces.y, |i, j| half_sum(gc.get(i, j), gc.get(i - 1, j)));
        self.add_viscosity(q, smax, &mut faces);
        faces
    }

    /// Effective faces of one full step from `q` (ghosts filled).
    pub fn step_faces(&self, q: &Padded<Conserved>, dt: f64, smax: f64) -> Faces {
        match self.cfg.scheme {
            SchemeId::Cir1 => self.stage_faces(q, smax),
            SchemeId::Maccormack => self.maccormack_faces(q, dt, smax),
            SchemeId::LaxWendroff2 => self.lax_wendroff_faces(q, dt, smax),
            SchemeId::MusclHllc2 | SchemeId::Weno3 => {
                // Three-stage strong-stability-preserving Runge-Kutta.
                let f0 = self.stage_faces(q, smax);
                let r0 = self.rhs(&f0);
                let q1 = self.advance(q, dt, &r0);
                let f1 = self.stage_faces(&q1, smax);
                let r1 = self.rhs(&f1);
                let r01: Vec<Conserved> = r0.iter().zip(&r1).map(|(a, b)| add(*a, *b)).collect();
                let q2 = self.advance(q, 0.25 * dt, &r01);
                let f2 = self.stage_faces(&q2, smax);
                Faces::combine(&[(1.0 / 6.0, &f0), (1.0 / 6.0, &f1), (2.0 / 3.0, &f2)])
            }
        }
    }
}
