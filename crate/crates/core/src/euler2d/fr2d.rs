//! Tensor-product Flux Reconstruction on bilinear quadrilaterals.
//!
//! Each element carries `(p+1)^2` Gauss-Legendre solution points with the
//! `xi` index running fastest. Fluxes are transformed with the exact metric
//! terms of the bilinear map, so a uniform stream is preserved on any valid
//! mesh. One right-going and one upward interface flux is stored per element
//! and shared with the neighbour across that face.

use rayon::prelude::*;

use super::flux::{fluxes, to_primitive, Cons, Riemann};
use super::Discretisation;
use crate::error::{invalid, Error, Result};
use crate::mesh::QuadMesh2D;
use crate::reference::{CorrectionKind, ReferenceElement};

#[derive(Clone, Debug)]
pub struct Fr2d {
    pub p: usize,
    pub gas_gamma: f64,
    pub riemann: Riemann,
    n: usize,
    n_elements: usize,
    d: Vec<f64>,
    ll: Vec<f64>,
    lr: Vec<f64>,
    hl: Vec<f64>,
    hr: Vec<f64>,
    neighbours: Vec<[usize; 4]>,
    points: Vec<[f64; 2]>,
    /// `[x_xi, x_eta, y_xi, y_eta]` per solution point.
    metrics: Vec<[f64; 4]>,
    det: Vec<f64>,
    weights: Vec<f64>,
    /// Unnormalised `+xi` normal on each element's right face, per face point.
    normal_xi: Vec<[f64; 2]>,
    /// Unnormalised `+eta` normal on each element's top face, per face point.
    normal_eta: Vec<[f64; 2]>,
    spacing: f64,
}

impl Fr2d {
    pub fn new(mesh: &QuadMesh2D, p: usize, kind: CorrectionKind, riemann: Riemann, gas_gamma: f64) -> Result<Self> {
        let re = ReferenceElement::new(p, kind)?;
        let n = p + 1;
        let ne = mesh.n_elements();
        let mut points = Vec::with_capacity(ne * n * n);
        let mut metrics = Vec::with_capacity(ne * n * n);
        let mut det = Vec::with_capacity(ne * n * n);
        let mut weights = Vec::with_capacity(ne * n * n);
        let mut normal_xi = Vec::with_capacity(ne * n);
        let mut normal_eta = Vec::with_capacity(ne * n);
        let mut spacing = f64::INFINITY;
        for e in 0..ne {
            let map = mesh.element_map(e);
            if map.min_corner_det() <= 0.0 {
                return Err(Error::DegenerateElement(e));
            }
            spacing = spacing.min(map.area().sqrt() / n as f64);
            for j in 0..n {
                for i in 0..n {
                    let (xi, eta) = (re.xi[i], re.xi[j]);
                    points.push(map.map(xi, eta));
                    let jac = map.jacobian(xi, eta);
                    metrics.push([jac[0][0], jac[0][1], jac[1][0], jac[1][1]]);
                    let dj = map.det(xi, eta);
                    det.push(dj);
                    weights.push(re.weights[i] * re.weights[j] * dj);
                }
            }
            for k in 0..n {
                let jac = map.jacobian(1.0, re.xi[k]);
                normal_xi.push([jac[1][1], -jac[0][1]]);
                let jac = map.jacobian(re.xi[k], 1.0);
                normal_eta.push([-jac[1][0], jac[0][0]]);
            }
        }
        let neighbours = (0..ne)
            .map(|e| std::array::from_fn(|f| mesh.neighbour(e, f)))
            .collect();
        if !(gas_gamma > 1.0) {
            return Err(invalid(format!("ratio of specific heats must exceed 1, got {gas_gamma}")));
        }
        Ok(Self {
            p,
            gas_gamma,
            riemann,
            n,
            n_elements: ne,
            d: re.d_row_major(),
            ll: re.ll.iter().copied().collect(),
            lr: re.lr.iter().copied().collect(),
            hl: re.hl.iter().copied().collect(),
            hr: re.hr.iter().copied().collect(),
            neighbours,
            points,
            metrics,
            det,
            weights,
            normal_xi,
            normal_eta,
            spacing,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    fn point_state(u: &[f64], idx: usize) -> Cons {
        [u[4 * idx], u[4 * idx + 1], u[4 * idx + 2], u[4 * idx + 3]]
    }

    // Phase one: solution traces on the four faces of one element, ordered
    // bottom, right, top, left with `n` points each.
    fn traces(&self, e: usize, u: &[f64], out: &mut [Cons]) -> Result<()> {
        let n = self.n;
        let base = e * n * n;
        for pt in 0..n * n {
            let q = Self::point_state(u, base + pt);
            let w = to_primitive(q, self.gas_gamma);
            if !(w[0] > 0.0 && w[3] > 0.0) {
                return Err(Error::NonPhysical {
                    element: e,
                    point: pt,
                    density: w[0],
                    pressure: w[3],
                });
            }
        }
        out.fill([0.0; 4]);
        for k in 0..n {
            for m in 0..n {
                let row = Self::point_state(u, base + k * n + m);
                let col = Self::point_state(u, base + m * n + k);
                for v in 0..4 {
                    out[n + k][v] += self.lr[m] * row[v];
                    out[3 * n + k][v] += self.ll[m] * row[v];
                    out[2 * n + k][v] += self.lr[m] * col[v];
                    out[k][v] += self.ll[m] * col[v];
                }
            }
        }
        Ok(())
    }

    // Phase three: divergence of the corrected transformed flux.
    fn element_rhs(&self, e: usize, u: &[f64], common_xi: &[Cons], common_eta: &[Cons], out: &mut [f64]) {
        let n = self.n;
        let base = e * n * n;
        let mut ft = vec![[0.0; 4]; n * n];
        let mut gt = vec![[0.0; 4]; n * n];
        for pt in 0..n * n {
            let q = Self::point_state(u, base + pt);
            let (f, g) = fluxes(q, self.gas_gamma);
            let [x_xi, x_eta, y_xi, y_eta] = self.metrics[base + pt];
            for v in 0..4 {
                ft[pt][v] = y_eta * f[v] - x_eta * g[v];
                gt[pt][v] = -y_xi * f[v] + x_xi * g[v];
            }
        }
        let mut div = vec![[0.0; 4]; n * n];
        let [left, bottom] = [self.neighbours[e][3], self.neighbours[e][0]];
        for j in 0..n {
            let mut fl = [0.0; 4];
            let mut fr = [0.0; 4];
            for m in 0..n {
                for v in 0..4 {
                    fl[v] += self.ll[m] * ft[j * n + m][v];
                    fr[v] += self.lr[m] * ft[j * n + m][v];
                }
            }
            let cl = common_xi[left * n + j];
            let cr = common_xi[e * n + j];
            for i in 0..n {
                for v in 0..4 {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += self.d[i * n + m] * ft[j * n + m][v];
                    }
                    div[j * n + i][v] += s + (cl[v] - fl[v]) * self.hl[i] + (cr[v] - fr[v]) * self.hr[i];
                }
            }
        }
        for i in 0..n {
            let mut gb = [0.0; 4];
            let mut gtop = [0.0; 4];
            for m in 0..n {
                for v in 0..4 {
                    gb[v] += self.ll[m] * gt[m * n + i][v];
                    gtop[v] += self.lr[m] * gt[m * n + i][v];
                }
            }
            let cb = common_eta[bottom * n + i];
            let ct = common_eta[e * n + i];
            for j in 0..n {
                for v in 0..4 {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += self.d[j * n + m] * gt[m * n + i][v];
                    }
                    div[j * n + i][v] += s + (cb[v] - gb[v]) * self.hl[j] + (ct[v] - gtop[v]) * self.hr[j];
                }
            }
        }
        for pt in 0..n * n {
            let inv = -1.0 / self.det[base + pt];
            for v in 0..4 {
                out[4 * pt + v] = inv * div[pt][v];
            }
        }
    }
}

fn face_flux(riemann: Riemann, l: Cons, r: Cons, n: [f64; 2], gamma: f64) -> Cons {
    let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
    let f = riemann.flux(l, r, [n[0] / len, n[1] / len], gamma);
    f.map(|x| x * len)
}

impl Discretisation for Fr2d {
    fn n_points(&self) -> usize {
        self.points.len()
    }

    fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    fn quadrature_weights(&self) -> &[f64] {
        &self.weights
    }

    fn spacing(&self) -> f64 {
        self.spacing
    }

    fn rhs(&self, u: &[f64], dudt: &mut [f64]) -> Result<()> {
        if u.len() != 4 * self.n_points() || dudt.len() != u.len() {
            return Err(Error::ShapeMismatch(format!(
                "state has {} values, expected {}",
                u.len(),
                4 * self.n_points()
            )));
        }
        let n = self.n;
        let mut traces = vec![[0.0; 4]; self.n_elements * 4 * n];
        traces
            .par_chunks_mut(4 * n)
            .enumerate()
            .try_for_each(|(e, out)| self.traces(e, u, out))?;
        let g = self.gas_gamma;
        let mut common_xi = vec![[0.0; 4]; self.n_elements * n];
        let mut common_eta = vec![[0.0; 4]; self.n_elements * n];
        common_xi
            .par_chunks_mut(n)
            .zip(common_eta.par_chunks_mut(n))
            .enumerate()
            .for_each(|(e, (cx, ce))| {
                let own = &traces[e * 4 * n..(e + 1) * 4 * n];
                let right = self.neighbours[e][1] * 4 * n;
                let top = self.neighbours[e][2] * 4 * n;
                for k in 0..n {
                    cx[k] = face_flux(self.riemann, own[n + k], traces[right + 3 * n + k], self.normal_xi[e * n + k], g);
                    ce[k] = face_flux(self.riemann, own[2 * n + k], traces[top + k], self.normal_eta[e * n + k], g);
                }
            });
        dudt.par_chunks_mut(4 * n * n)
            .enumerate()
            .for_each(|(e, out)| self.element_rhs(e, u, &common_xi, &common_eta, out));
        Ok(())
    }
}
