//! FR discretisation of `u_t + u_x = 0` on a periodic stretched grid.

use super::grid::StretchedGrid1D;
use super::time::LinearRhs;
use crate::reference::ReferenceElement;

/// Upwind FR operator for unit advection speed.
///
/// Per cell `du/dt = -J^{-1} [D u + (u_common - u_l) h_l]`; the right-face
/// correction vanishes because the upwind common flux there is the cell's own trace.
#[derive(Clone, Debug)]
pub struct FrAdvection {
    pub element: ReferenceElement,
    pub grid: StretchedGrid1D,
    d: Vec<f64>,
    hl: Vec<f64>,
    ll: Vec<f64>,
    lr: Vec<f64>,
    inv_j: Vec<f64>,
}

impl FrAdvection {
    pub fn new(element: ReferenceElement, grid: StretchedGrid1D) -> Self {
        let d = element.d_row_major();
        let hl = element.hl.iter().copied().collect();
        let ll = element.ll.iter().copied().collect();
        let lr = element.lr.iter().copied().collect();
        let inv_j = grid.jacobian.iter().map(|j| 1.0 / j).collect();
        Self {
            element,
            grid,
            d,
            hl,
            ll,
            lr,
            inv_j,
        }
    }

    pub fn n_points(&self) -> usize {
        self.element.n_points()
    }

    /// Physical coordinates of every solution point.
    pub fn points(&self) -> Vec<f64> {
        self.grid.solution_points(&self.element)
    }

    /// Quadrature-weighted integral of `u` over the domain.
    pub fn integral(&self, u: &[f64]) -> f64 {
        let n = self.n_points();
        u.chunks(n)
            .zip(&self.grid.jacobian)
            .map(|(cell, j)| j * cell.iter().zip(&self.element.weights).map(|(v, w)| v * w).sum::<f64>())
            .sum()
    }

    /// Evaluates the piecewise polynomial solution at `x`.
    pub fn evaluate(&self, u: &[f64], x: f64) -> f64 {
        let (j, xi) = self.grid.locate(x);
        let n = self.n_points();
        self.element.interpolate(&u[j * n..(j + 1) * n], xi)
    }

    /// Applies the operator without periodic wrap: the first cell sees `inflow` as its upwind trace.
    pub fn apply_with_inflow(&self, u: &[f64], inflow: f64, out: &mut [f64]) {
        self.apply_inner(u, Some(inflow), out);
    }

    fn apply_inner(&self, u: &[f64], inflow: Option<f64>, out: &mut [f64]) {
        let n = self.n_points();
        let cells = self.grid.n_cells();
        for j in 0..cells {
            let cell = &u[j * n..(j + 1) * n];
            let common = match (j, inflow) {
                (0, Some(v)) => v,
                _ => {
                    let up = (j + cells - 1) % cells;
                    dot(&self.lr, &u[up * n..(up + 1) * n])
                }
            };
            let jump = common - dot(&self.ll, cell);
            let o = &mut out[j * n..(j + 1) * n];
            for r in 0..n {
                let df = dot(&self.d[r * n..(r + 1) * n], cell);
                o[r] = -self.inv_j[j] * (df + jump * self.hl[r]);
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl LinearRhs for FrAdvection {
    fn len(&self) -> usize {
        self.grid.n_cells() * self.n_points()
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        self.apply_inner(u, None, out);
    }
}
