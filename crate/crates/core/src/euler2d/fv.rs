//! Second-order cell-centred finite volumes on quadrilaterals.
//!
//! Unknowns are cell averages, initialised and measured at the area
//! centroids, which agrees to second order. Gradients come from an
//! unweighted least-squares fit over the four face neighbours, the linear
//! reconstruction is evaluated at each edge midpoint without a limiter, and
//! the edge flux uses one-point quadrature.

use rayon::prelude::*;

use super::flux::{to_primitive, Cons, Riemann};
use super::Discretisation;
use crate::error::{invalid, Error, Result};
use crate::mesh::{BilinearMap, QuadMesh2D};

#[derive(Clone, Debug)]
pub struct Fv2d {
    pub gas_gamma: f64,
    pub riemann: Riemann,
    neighbours: Vec<[usize; 4]>,
    centroids: Vec<[f64; 2]>,
    areas: Vec<f64>,
    /// Offsets to the four neighbour centroids, periodic images resolved.
    offsets: Vec<[[f64; 2]; 4]>,
    /// Inverse of the least-squares normal matrix per cell.
    lsq_inv: Vec<[[f64; 2]; 2]>,
    /// Offsets from the centroid to the four edge midpoints.
    midpoints: Vec<[[f64; 2]; 4]>,
    /// Outward edge normals scaled by edge length, per face.
    normals: Vec<[[f64; 2]; 4]>,
    spacing: f64,
}

fn centroid(map: &BilinearMap) -> [f64; 2] {
    let g = 1.0 / 3f64.sqrt();
    let mut c = [0.0; 2];
    let mut a = 0.0;
    for (xi, eta) in [(-g, -g), (g, -g), (g, g), (-g, g)] {
        let d = map.det(xi, eta);
        let x = map.map(xi, eta);
        c[0] += d * x[0];
        c[1] += d * x[1];
        a += d;
    }
    [c[0] / a, c[1] / a]
}

impl Fv2d {
    pub fn new(mesh: &QuadMesh2D, riemann: Riemann, gas_gamma: f64) -> Result<Self> {
        if !(gas_gamma > 1.0) {
            return Err(invalid(format!("ratio of specific heats must exceed 1, got {gas_gamma}")));
        }
        let ne = mesh.n_elements();
        let wrap = |d: [f64; 2]| {
            [
                d[0] - mesh.lx * (d[0] / mesh.lx).round(),
                d[1] - mesh.ly * (d[1] / mesh.ly).round(),
            ]
        };
        let maps: Vec<BilinearMap> = (0..ne).map(|e| mesh.element_map(e)).collect();
        let mut spacing = f64::INFINITY;
        for (e, m) in maps.iter().enumerate() {
            if m.min_corner_det() <= 0.0 {
                return Err(Error::DegenerateElement(e));
            }
            spacing = spacing.min(m.area().sqrt());
        }
        let centroids: Vec<[f64; 2]> = maps.iter().map(centroid).collect();
        let areas = maps.iter().map(BilinearMap::area).collect();
        let neighbours: Vec<[usize; 4]> = (0..ne)
            .map(|e| std::array::from_fn(|f| mesh.neighbour(e, f)))
            .collect();
        let mut offsets = Vec::with_capacity(ne);
        let mut lsq_inv = Vec::with_capacity(ne);
        let mut midpoints = Vec::with_capacity(ne);
        let mut normals = Vec::with_capacity(ne);
        for e in 0..ne {
            let c = centroids[e];
            let off: [[f64; 2]; 4] = std::array::from_fn(|f| {
                let o = centroids[neighbours[e][f]];
                wrap([o[0] - c[0], o[1] - c[1]])
            });
            let (mut a, mut b, mut d) = (0.0, 0.0, 0.0);
            for o in &off {
                a += o[0] * o[0];
                b += o[0] * o[1];
                d += o[1] * o[1];
            }
            let det = a * d - b * b;
            if det <= 0.0 {
                return Err(Error::DegenerateElement(e));
            }
            lsq_inv.push([[d / det, -b / det], [-b / det, a / det]]);
            offsets.push(off);
            let corners = maps[e].corners;
            // Face f runs from corner f to corner f+1, counter-clockwise.
            midpoints.push(std::array::from_fn(|f| {
                let (p, q) = (corners[f], corners[(f + 1) % 4]);
                [0.5 * (p[0] + q[0]) - c[0], 0.5 * (p[1] + q[1]) - c[1]]
            }));
            normals.push(std::array::from_fn(|f| {
                let (p, q) = (corners[f], corners[(f + 1) % 4]);
                [q[1] - p[1], p[0] - q[0]]
            }));
        }
        Ok(Self {
            gas_gamma,
            riemann,
            neighbours,
            centroids,
            areas,
            offsets,
            lsq_inv,
            midpoints,
            normals,
            spacing,
        })
    }

    fn cell(u: &[f64], e: usize) -> Cons {
        [u[4 * e], u[4 * e + 1], u[4 * e + 2], u[4 * e + 3]]
    }

    fn gradient(&self, u: &[f64], e: usize) -> [[f64; 2]; 4] {
        let q = Self::cell(u, e);
        let mut rhs = [[0.0; 2]; 4];
        for f in 0..4 {
            let o = Self::cell(u, self.neighbours[e][f]);
            let d = self.offsets[e][f];
            for v in 0..4 {
                rhs[v][0] += d[0] * (o[v] - q[v]);
                rhs[v][1] += d[1] * (o[v] - q[v]);
            }
        }
        let m = self.lsq_inv[e];
        rhs.map(|r| [m[0][0] * r[0] + m[0][1] * r[1], m[1][0] * r[0] + m[1][1] * r[1]])
    }

    fn face_state(u: &[f64], grad: &[[f64; 2]; 4], e: usize, r: [f64; 2]) -> Cons {
        let q = Self::cell(u, e);
        std::array::from_fn(|v| q[v] + grad[v][0] * r[0] + grad[v][1] * r[1])
    }
}

impl Discretisation for Fv2d {
    fn n_points(&self) -> usize {
        self.centroids.len()
    }

    fn points(&self) -> &[[f64; 2]] {
        &self.centroids
    }

    fn quadrature_weights(&self) -> &[f64] {
        &self.areas
    }

    fn spacing(&self) -> f64 {
        self.spacing
    }

    fn rhs(&self, u: &[f64], dudt: &mut [f64]) -> Result<()> {
        let ne = self.n_points();
        if u.len() != 4 * ne || dudt.len() != u.len() {
            return Err(Error::ShapeMismatch(format!("state has {} values, expected {}", u.len(), 4 * ne)));
        }
        for e in 0..ne {
            let w = to_primitive(Self::cell(u, e), self.gas_gamma);
            if !(w[0] > 0.0 && w[3] > 0.0) {
                return Err(Error::NonPhysical {
                    element: e,
                    point: 0,
                    density: w[0],
                    pressure: w[3],
                });
            }
        }
        let grads: Vec<[[f64; 2]; 4]> = (0..ne).into_par_iter().map(|e| self.gradient(u, e)).collect();
        // Flux through the right (1) and top (2) face of every cell; the
        // neighbour reads it back through its left and bottom face.
        let shared: Vec<[Cons; 2]> = (0..ne)
            .into_par_iter()
            .map(|e| {
                std::array::from_fn(|s| {
                    let f = s + 1;
                    let nb = self.neighbours[e][f];
                    let back = (f + 2) % 4;
                    let inner = Self::face_state(u, &grads[e], e, self.midpoints[e][f]);
                    let outer = Self::face_state(u, &grads[nb], nb, self.midpoints[nb][back]);
                    let n = self.normals[e][f];
                    let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
                    self.riemann
                        .flux(inner, outer, [n[0] / len, n[1] / len], self.gas_gamma)
                        .map(|x| x * len)
                })
            })
            .collect();
        dudt.par_chunks_mut(4).enumerate().for_each(|(e, out)| {
            let [bottom, left] = [self.neighbours[e][0], self.neighbours[e][3]];
            let inv = -1.0 / self.areas[e];
            for v in 0..4 {
                let net = shared[e][0][v] + shared[e][1][v] - shared[left][0][v] - shared[bottom][1][v];
                out[v] = inv * net;
            }
        });
        Ok(())
    }
}
