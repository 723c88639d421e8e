//! Periodic quadrilateral meshes with seeded node jitter and skew measurement.
//!
//! Nodes sit on an `(nx+1) x (ny+1)` lattice. The first and last rows and
//! columns lie on the domain boundary and are never moved, so the mesh tiles
//! the plane periodically with matching faces. Element corners are stored
//! counter-clockwise starting from the lower-left node.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// Draws per node before jitter gives up.
pub const MAX_JITTER_ATTEMPTS: usize = 100;

/// Reference corners matching the element corner order.
pub const REFERENCE_CORNERS: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];

#[derive(Clone, Debug, PartialEq)]
pub struct QuadMesh2D {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub nodes: Vec<[f64; 2]>,
    /// Corner node indices per element, counter-clockwise.
    pub elements: Vec<[usize; 4]>,
    pub jitter_factor: f64,
    pub seed: Option<u64>,
}

/// Bilinear map from `[-1, 1]^2` onto one quadrilateral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BilinearMap {
    pub corners: [[f64; 2]; 4],
}

impl BilinearMap {
    fn shape(xi: f64, eta: f64) -> [f64; 4] {
        [
            0.25 * (1.0 - xi) * (1.0 - eta),
            0.25 * (1.0 + xi) * (1.0 - eta),
            0.25 * (1.0 + xi) * (1.0 + eta),
            0.25 * (1.0 - xi) * (1.0 + eta),
        ]
    }

    pub fn map(&self, xi: f64, eta: f64) -> [f64; 2] {
        let n = Self::shape(xi, eta);
        let mut out = [0.0; 2];
        for (c, w) in self.corners.iter().zip(n) {
            out[0] += w * c[0];
            out[1] += w * c[1];
        }
        out
    }

    /// `[[x_xi, x_eta], [y_xi, y_eta]]`.
    pub fn jacobian(&self, xi: f64, eta: f64) -> [[f64; 2]; 2] {
        let dxi = [-0.25 * (1.0 - eta), 0.25 * (1.0 - eta), 0.25 * (1.0 + eta), -0.25 * (1.0 + eta)];
        let deta = [-0.25 * (1.0 - xi), -0.25 * (1.0 + xi), 0.25 * (1.0 + xi), 0.25 * (1.0 - xi)];
        let mut j = [[0.0; 2]; 2];
        for k in 0..4 {
            for d in 0..2 {
                j[d][0] += dxi[k] * self.corners[k][d];
                j[d][1] += deta[k] * self.corners[k][d];
            }
        }
        j
    }

    pub fn det(&self, xi: f64, eta: f64) -> f64 {
        let j = self.jacobian(xi, eta);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    /// Smallest Jacobian determinant over the element.
    ///
    /// The determinant of a bilinear map is affine in each reference
    /// coordinate, so its extremes sit at the corners.
    pub fn min_corner_det(&self) -> f64 {
        REFERENCE_CORNERS
            .iter()
            .map(|c| self.det(c[0], c[1]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn area(&self) -> f64 {
        // Two-point Gauss quadrature is exact for the affine determinant.
        let g = 1.0 / 3f64.sqrt();
        [[-g, -g], [g, -g], [g, g], [-g, g]].iter().map(|c| self.det(c[0], c[1])).sum()
    }
}

/// Mesh-average cross-diagonal skew.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewReport {
    /// Mean of `per_element`, degrees.
    pub alpha: f64,
    /// `|beta - 90|` per element, degrees.
    pub per_element: Vec<f64>,
}

impl QuadMesh2D {
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    pub fn element_index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn element_map(&self, e: usize) -> BilinearMap {
        let c = self.elements[e];
        BilinearMap {
            corners: [self.nodes[c[0]], self.nodes[c[1]], self.nodes[c[2]], self.nodes[c[3]]],
        }
    }

    /// Periodic neighbour of element `e` across face 0 (bottom), 1 (right), 2 (top) or 3 (left).
    pub fn neighbour(&self, e: usize, face: usize) -> usize {
        let (i, j) = (e % self.nx, e / self.nx);
        let (nx, ny) = (self.nx, self.ny);
        match face {
            0 => self.element_index(i, (j + ny - 1) % ny),
            1 => self.element_index((i + 1) % nx, j),
            2 => self.element_index(i, (j + 1) % ny),
            3 => self.element_index((i + nx - 1) % nx, j),
            _ => panic!("quadrilaterals have four faces, got face {face}"),
        }
    }

    pub fn is_boundary_node(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nx || j == self.ny
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_elements()).map(|e| self.element_map(e).area()).sum()
    }

    /// Smallest corner Jacobian over all elements.
    pub fn min_jacobian(&self) -> f64 {
        (0..self.n_elements())
            .map(|e| self.element_map(e).min_corner_det())
            .fold(f64::INFINITY, f64::min)
    }

    /// Copy rotated by `angle` radians about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut out = self.clone();
        for n in &mut out.nodes {
            *n = [c * n[0] - s * n[1], s * n[0] + c * n[1]];
        }
        out
    }

    /// Plain-text form; see [`QuadMesh2D::from_text`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# quad mesh").unwrap();
        writeln!(s, "grid {} {} {:e} {:e}", self.nx, self.ny, self.lx, self.ly).unwrap();
        let seed = self.seed.map_or("none".to_string(), |v| v.to_string());
        writeln!(s, "jitter {:e} {seed}", self.jitter_factor).unwrap();
        writeln!(s, "nodes {}", self.nodes.len()).unwrap();
        for n in &self.nodes {
            writeln!(s, "{:e} {:e}", n[0], n[1]).unwrap();
        }
        writeln!(s, "elements {}", self.elements.len()).unwrap();
        for e in &self.elements {
            writeln!(s, "{} {} {} {}", e[0], e[1], e[2], e[3]).unwrap();
        }
        s
    }

    /// Parses the text written by [`QuadMesh2D::to_text`].
    ///
    /// Lines starting with `#` are ignored. The layout is a `grid nx ny lx ly`
    /// line, a `jitter factor seed` line, then `nodes N` followed by `N` lines of
    /// `x y` and `elements M` followed by `M` lines of four node indices.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::Config(format!("mesh file ends before {what}")))
        };
        let grid = fields(next("grid")?, "grid", 4)?;
        let (nx, ny) = (parse::<usize>(grid[0])?, parse::<usize>(grid[1])?);
        let (lx, ly) = (parse::<f64>(grid[2])?, parse::<f64>(grid[3])?);
        let jitter = fields(next("jitter")?, "jitter", 2)?;
        let jitter_factor = parse::<f64>(jitter[0])?;
        let seed = match jitter[1] {
            "none" => None,
            v => Some(parse::<u64>(v)?),
        };
        let n_nodes = parse::<usize>(fields(next("nodes")?, "nodes", 1)?[0])?;
        let mut nodes = Vec::with_capacity(n_nodes);
        for _ in 0..n_nodes {
            let line = next("node list end")?;
            let v: Vec<&str> = line.split_whitespace().collect();
            if v.len() != 2 {
                return Err(Error::Config(format!("bad node line '{line}'")));
            }
            nodes.push([parse(v[0])?, parse(v[1])?]);
        }
        let n_el = parse::<usize>(fields(next("elements")?, "elements", 1)?[0])?;
        let mut elements = Vec::with_capacity(n_el);
        for _ in 0..n_el {
            let line = next("element list end")?;
            let v: Vec<&str> = line.split_whitespace().collect();
            if v.len() != 4 {
                return Err(Error::Config(format!("bad element line '{line}'")));
            }
            let e = [parse(v[0])?, parse(v[1])?, parse(v[2])?, parse(v[3])?];
            if e.iter().any(|&i| i >= n_nodes) {
                return Err(Error::Config(format!("element refers to a missing node: '{line}'")));
            }
            elements.push(e);
        }
        if nodes.len() != (nx + 1) * (ny + 1) || elements.len() != nx * ny {
            return Err(Error::Config(format!(
                "{} nodes and {} elements do not match a {nx} x {ny} grid",
                nodes.len(),
                elements.len()
            )));
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            nodes,
            elements,
            jitter_factor,
            seed,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

fn fields<'a>(line: &'a str, key: &str, n: usize) -> Result<Vec<&'a str>> {
    let mut it = line.split_whitespace();
    if it.next() != Some(key) {
        return Err(Error::Config(format!("expected '{key}' line, got '{line}'")));
    }
    let v: Vec<&str> = it.collect();
    if v.len() != n {
        return Err(Error::Config(format!("'{key}' needs {n} values, got '{line}'")));
    }
    Ok(v)
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Config(format!("cannot parse '{s}' in mesh file")))
}

/// Axis-aligned `nx x ny` grid of rectangles on `[0, length]^2`.
pub fn uniform_quad_mesh(nx: usize, ny: usize, length: f64) -> Result<QuadMesh2D> {
    if nx < 2 || ny < 2 {
        return Err(invalid(format!("need at least 2 x 2 elements, got {nx} x {ny}")));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(invalid(format!("domain length must be positive, got {length}")));
    }
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([length * i as f64 / nx as f64, length * j as f64 / ny as f64]);
        }
    }
    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let n = |a: usize, b: usize| b * (nx + 1) + a;
            elements.push([n(i, j), n(i + 1, j), n(i + 1, j + 1), n(i, j + 1)]);
        }
    }
    Ok(QuadMesh2D {
        nx,
        ny,
        lx: length,
        ly: length,
        nodes,
        elements,
        jitter_factor: 0.0,
        seed: None,
    })
}

/// Moves every interior node by `factor x cell size x U[-0.5, 0.5]^2`.
///
/// Nodes are visited row by row from a ChaCha8 stream seeded with `seed`. A
/// draw that leaves any adjacent element with a non-positive corner Jacobian
/// is replaced by a fresh one, up to [`MAX_JITTER_ATTEMPTS`] times.
pub fn jitter(mesh: &QuadMesh2D, factor: f64, seed: u64) -> Result<QuadMesh2D> {
    if !(factor >= 0.0 && factor.is_finite()) {
        return Err(invalid(format!("jitter factor must be non-negative, got {factor}")));
    }
    let mut out = mesh.clone();
    out.jitter_factor = factor;
    out.seed = Some(seed);
    if factor == 0.0 {
        return Ok(out);
    }
    let hx = mesh.lx / mesh.nx as f64;
    let hy = mesh.ly / mesh.ny as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for j in 1..mesh.ny {
        for i in 1..mesh.nx {
            let node = out.node_index(i, j);
            let home = mesh.nodes[node];
            let adjacent = [
                out.element_index(i - 1, j - 1),
                out.element_index(i, j - 1),
                out.element_index(i, j),
                out.element_index(i - 1, j),
            ];
            let mut placed = false;
            for _ in 0..MAX_JITTER_ATTEMPTS {
                let dx: f64 = rng.random_range(-0.5..=0.5);
                let dy: f64 = rng.random_range(-0.5..=0.5);
                out.nodes[node] = [home[0] + factor * hx * dx, home[1] + factor * hy * dy];
                if adjacent.iter().all(|&e| out.element_map(e).min_corner_det() > 0.0) {
                    placed = true;
                    break;
                }
            }
            if !placed {
                return Err(Error::TangledMesh {
                    node,
                    attempts: MAX_JITTER_ATTEMPTS,
                });
            }
        }
    }
    Ok(out)
}

/// Angle in degrees between the two corner-to-corner diagonals of each element.
pub fn skew_angle(mesh: &QuadMesh2D) -> Result<SkewReport> {
    let mut per_element = Vec::with_capacity(mesh.n_elements());
    for (e, c) in mesh.elements.iter().enumerate() {
        let p = |k: usize| mesh.nodes[c[k]];
        let d1 = [p(2)[0] - p(0)[0], p(2)[1] - p(0)[1]];
        let d2 = [p(3)[0] - p(1)[0], p(3)[1] - p(1)[1]];
        if d1 == [0.0, 0.0] || d2 == [0.0, 0.0] {
            return Err(Error::DegenerateElement(e));
        }
        let cross = d1[0] * d2[1] - d1[1] * d2[0];
        let dot = d1[0] * d2[0] + d1[1] * d2[1];
        let beta = cross.abs().atan2(dot).to_degrees();
        per_element.push((beta - 90.0).abs());
    }
    let alpha = per_element.iter().sum::<f64>() / per_element.len() as f64;
    Ok(SkewReport { alpha, per_element })
}

/// Jitter factor whose mesh-average skew matches `target_alpha` degrees for `seed`.
///
/// Bisects the factor on `[0, max_factor]`; returns the mesh and the factor.
pub fn jitter_for_skew(
    mesh: &QuadMesh2D,
    target_alpha: f64,
    seed: u64,
    max_factor: f64,
) -> Result<(QuadMesh2D, f64)> {
    if !(target_alpha >= 0.0) {
        return Err(invalid(format!("target skew must be non-negative, got {target_alpha}")));
    }
    let skew = |f: f64| -> Result<f64> { Ok(skew_angle(&jitter(mesh, f, seed)?)?.alpha) };
    if skew(max_factor)? < target_alpha {
        return Err(Error::NotBracketed(format!(
            "skew {target_alpha} deg is beyond jitter factor {max_factor}"
        )));
    }
    let (mut lo, mut hi) = (0.0, max_factor);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if skew(mid)? < target_alpha {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    let factor = 0.5 * (lo + hi);
    Ok((jitter(mesh, factor, seed)?, factor))
}
