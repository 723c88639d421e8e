//! Order-p nodal machinery on the standard element `[-1, 1]`.
//!
//! A [`ReferenceElement`] bundles the solution points, the Lagrange derivative
//! matrix, the interface extraction vectors and the derivatives of the left and
//! right correction functions sampled at the solution points.

pub mod lagrange;
pub mod legendre;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};

/// Correction function used to propagate interface flux jumps into the element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CorrectionKind {
    /// Huynh's g2 scheme, the VCJH member with `eta_p = (p+1)/p`.
    HuynhG2,
    /// Right Radau polynomial, which recovers nodal DG.
    Dg,
    /// g2 built one order lower, so the correction has degree p instead of p+1.
    ReducedOrder,
}

impl CorrectionKind {
    pub const ALL: [CorrectionKind; 3] = [Self::HuynhG2, Self::Dg, Self::ReducedOrder];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::HuynhG2 => "g2",
            Self::Dg => "dg",
            Self::ReducedOrder => "reduced",
        }
    }
}

impl fmt::Display for CorrectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorrectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g2" | "huynh" | "huynhg2" | "huynh-g2" => Ok(Self::HuynhG2),
            "dg" => Ok(Self::Dg),
            "reduced" | "reduced-order" | "reducedorder" => Ok(Self::ReducedOrder),
            other => Err(invalid(format!(
                "unknown correction kind '{other}' (expected g2, dg or reduced)"
            ))),
        }
    }
}

/// Family of solution points inside the element.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PointSet {
    #[default]
    GaussLegendre,
    GaussLobatto,
}

impl FromStr for PointSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" | "gauss-legendre" => Ok(Self::GaussLegendre),
            "lobatto" | "gauss-lobatto" => Ok(Self::GaussLobatto),
            other => Err(invalid(format!("unknown point set '{other}'"))),
        }
    }
}

/// Gauss-Legendre solution points for order `p`: the `p+1` roots of `P_{p+1}`, ascending.
pub fn gauss_points(p: usize) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(invalid("polynomial order must be at least 1"));
    }
    Ok(legendre::gauss_legendre(p + 1).0)
}

/// Derivative matrix `D[n][m] = l_m'(xi_n)` for the given distinct points.
pub fn derivative_matrix(xi: &[f64]) -> Result<DMatrix<f64>> {
    lagrange::derivative_matrix(xi)
}

/// Legendre coefficients of the left correction function `h_l`.
///
/// `h_l = (-1)^q / 2 * [L_q - (eta L_{q-1} + L_{q+1}) / (1 + eta)]`, with `q = p`
/// (or `p - 1` for [`CorrectionKind::ReducedOrder`]) and `eta = (q+1)/q` for g2, `0` for DG.
pub fn correction_polynomial(p: usize, kind: CorrectionKind) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(invalid("polynomial order must be at least 1"));
    }
    let q = match kind {
        CorrectionKind::ReducedOrder if p < 2 => {
            return Err(invalid("reduced-order correction needs p >= 2"));
        }
        CorrectionKind::ReducedOrder => p - 1,
        _ => p,
    };
    let qf = q as f64;
    let eta = match kind {
        CorrectionKind::Dg => 0.0,
        CorrectionKind::HuynhG2 | CorrectionKind::ReducedOrder => (qf + 1.0) / qf,
    };
    let sign = if q % 2 == 0 { 0.5 } else { -0.5 };
    let mut c = vec![0.0; q + 2];
    c[q] = sign;
    c[q - 1] = -sign * eta / (1.0 + eta);
    c[q + 1] = -sign / (1.0 + eta);
    Ok(c)
}

/// Derivatives of `h_l` and `h_r` sampled at `xi`; `h_r(x) = h_l(-x)`.
pub fn correction_derivatives(
    p: usize,
    kind: CorrectionKind,
    xi: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let c = correction_polynomial(p, kind)?;
    let hl = xi.iter().map(|&x| legendre::series_derivative(&c, x)).collect();
    let hr = xi.iter().map(|&x| -legendre::series_derivative(&c, -x)).collect();
    Ok((hl, hr))
}

/// Immutable order-p element on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct ReferenceElement {
    pub p: usize,
    pub point_set: PointSet,
    pub correction_kind: CorrectionKind,
    /// Solution points, ascending.
    pub xi: Vec<f64>,
    /// Quadrature weights matching `xi`.
    pub weights: Vec<f64>,
    /// Barycentric weights of `xi`.
    pub bary: Vec<f64>,
    pub d: DMatrix<f64>,
    /// Extraction vector for `xi = -1`.
    pub ll: DVector<f64>,
    /// Extraction vector for `xi = +1`.
    pub lr: DVector<f64>,
    /// `dh_l/dxi` at the solution points.
    pub hl: DVector<f64>,
    /// `dh_r/dxi` at the solution points.
    pub hr: DVector<f64>,
}

impl ReferenceElement {
    /// Gauss-Legendre element with the given correction function.
    pub fn new(p: usize, kind: CorrectionKind) -> Result<Self> {
        Self::with_points(p, kind, PointSet::GaussLegendre)
    }

    pub fn with_points(p: usize, kind: CorrectionKind, point_set: PointSet) -> Result<Self> {
        if p == 0 {
            return Err(invalid("polynomial order must be at least 1"));
        }
        let (xi, weights) = match point_set {
            PointSet::GaussLegendre => legendre::gauss_legendre(p + 1),
            PointSet::GaussLobatto => legendre::gauss_lobatto(p + 1),
        };
        let bary = lagrange::barycentric_weights(&xi)?;
        let d = lagrange::derivative_matrix(&xi)?;
        let ll = DVector::from_vec(lagrange::basis_at(&xi, &bary, -1.0));
        let lr = DVector::from_vec(lagrange::basis_at(&xi, &bary, 1.0));
        let (hl, hr) = correction_derivatives(p, kind, &xi)?;
        Ok(Self {
            p,
            point_set,
            correction_kind: kind,
            xi,
            weights,
            bary,
            d,
            ll,
            lr,
            hl: DVector::from_vec(hl),
            hr: DVector::from_vec(hr),
        })
    }

    /// Number of solution points, `p + 1`.
    pub fn n_points(&self) -> usize {
        self.p + 1
    }

    /// Lagrange basis values at an arbitrary reference coordinate.
    pub fn basis_at(&self, t: f64) -> Vec<f64> {
        lagrange::basis_at(&self.xi, &self.bary, t)
    }

    /// Interpolates nodal values at an arbitrary reference coordinate.
    pub fn interpolate(&self, u: &[f64], t: f64) -> f64 {
        lagrange::interpolate(&self.xi, &self.bary, u, t)
    }

    /// Derivative matrix flattened row-major, for hot loops.
    pub fn d_row_major(&self) -> Vec<f64> {
        let n = self.n_points();
        let mut out = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                out.push(self.d[(r, c)]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent root finder: sign-change bracketing plus bisection on the recurrence.
    fn bisection_roots(n: usize) -> Vec<f64> {
        let f = |x: f64| legendre::legendre(n, x).0;
        let m = 20_000;
        let mut roots = Vec::new();
        for i in 0..m {
            let mut a = -1.0 + 2.0 * i as f64 / m as f64;
            let mut b = -1.0 + 2.0 * (i + 1) as f64 / m as f64;
            if f(a) == 0.0 {
                roots.push(a);
                continue;
            }
            if f(a) * f(b) < 0.0 {
                for _ in 0..200 {
                    let c = 0.5 * (a + b);
                    if f(a) * f(c) <= 0.0 {
                        b = c;
                    } else {
                        a = c;
                    }
                }
                roots.push(0.5 * (a + b));
            }
        }
        roots
    }

    // Monomial-basis polynomial arithmetic, used as a symbolic oracle.
    fn poly_legendre(n: usize) -> Vec<f64> {
        let mut prev = vec![1.0];
        if n == 0 {
            return prev;
        }
        let mut cur = vec![0.0, 1.0];
        for k in 1..n {
            let kf = k as f64;
            let mut next = vec![0.0; k + 2];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += (2.0 * kf + 1.0) * c / (kf + 1.0);
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= kf * c / (kf + 1.0);
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    fn poly_eval(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, v| acc * x + v)
    }

    fn poly_der(c: &[f64]) -> Vec<f64> {
        c.iter().enumerate().skip(1).map(|(i, v)| i as f64 * v).collect()
    }

    #[test]
    fn gauss_points_low_order() {
        let p1 = gauss_points(1).unwrap();
        let s = 1.0 / 3.0_f64.sqrt();
        assert!((p1[0] + s).abs() < 1e-15 && (p1[1] - s).abs() < 1e-15);
        let p2 = gauss_points(2).unwrap();
        let s = 0.6_f64.sqrt();
        assert!((p2[0] + s).abs() < 1e-15 && p2[1].abs() < 1e-16 && (p2[2] - s).abs() < 1e-15);
        assert!(gauss_points(0).is_err());
    }

    #[test]
    fn gauss_points_match_bisection_oracle() {
        for p in 1..=8 {
            let xi = gauss_points(p).unwrap();
            let oracle = bisection_roots(p + 1);
            assert_eq!(oracle.len(), p + 1);
            for (a, b) in xi.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-13, "p={p}: {a} vs {b}");
            }
            for w in xi.windows(2) {
                assert!(w[0] < w[1]);
            }
            assert!(xi.iter().all(|x| x.abs() < 1.0));
        }
        let p5 = gauss_points(5).unwrap();
        for i in 0..3 {
            assert_eq!(p5[i], -p5[5 - i]);
        }
    }

    #[test]
    fn derivative_matrix_on_constants_and_identity() {
        for p in 1..=8 {
            let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
            let ones = DVector::from_element(p + 1, 1.0);
            let xi = DVector::from_vec(e.xi.clone());
            assert!((&e.d * ones).amax() < 1e-12);
            assert!((&e.d * xi).add_scalar(-1.0).amax() < 1e-12);
        }
    }

    #[test]
    fn derivative_matrix_exact_on_monomials() {
        for p in 1..=8 {
            let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
            for q in 1..=p {
                let u = DVector::from_iterator(p + 1, e.xi.iter().map(|x| x.powi(q as i32)));
                let du = &e.d * u;
                for (n, x) in e.xi.iter().enumerate() {
                    let exact = q as f64 * x.powi(q as i32 - 1);
                    assert!((du[n] - exact).abs() < 1e-11, "p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn extraction_vectors_hit_the_ends() {
        for p in 1..=8 {
            let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
            for q in 0..=p {
                let u = DVector::from_iterator(p + 1, e.xi.iter().map(|x| (x + 0.3).powi(q as i32)));
                assert!((e.ll.dot(&u) - (-0.7f64).powi(q as i32)).abs() < 1e-11);
                assert!((e.lr.dot(&u) - 1.3f64.powi(q as i32)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn correction_integrates_to_minus_one() {
        for p in 2..=8 {
            for kind in CorrectionKind::ALL {
                let e = ReferenceElement::new(p, kind).unwrap();
                // Degree-p derivative is integrated exactly by the (p+1)-point Gauss rule.
                let integral: f64 = e.hl.iter().zip(&e.weights).map(|(h, w)| h * w).sum();
                assert!((integral + 1.0).abs() < 1e-12, "p={p} {kind}");
                let integral_r: f64 = e.hr.iter().zip(&e.weights).map(|(h, w)| h * w).sum();
                assert!((integral_r - 1.0).abs() < 1e-12, "p={p} {kind}");
            }
        }
    }

    #[test]
    fn correction_mirror_symmetry() {
        for p in 2..=8 {
            for kind in CorrectionKind::ALL {
                let e = ReferenceElement::new(p, kind).unwrap();
                for n in 0..=p {
                    assert!((e.hr[n] + e.hl[p - n]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn g2_matches_symbolic_construction() {
        let p = 3;
        let pf = p as f64;
        let sign = if p % 2 == 0 { 0.5 } else { -0.5 };
        let lp = poly_legendre(p);
        let lm = poly_legendre(p - 1);
        let lq = poly_legendre(p + 1);
        let mut g2 = vec![0.0; p + 2];
        for (i, c) in lp.iter().enumerate() {
            g2[i] += sign * c;
        }
        for (i, c) in lm.iter().enumerate() {
            g2[i] -= sign * (pf + 1.0) * c / (2.0 * pf + 1.0);
        }
        for (i, c) in lq.iter().enumerate() {
            g2[i] -= sign * pf * c / (2.0 * pf + 1.0);
        }
        let dg2 = poly_der(&g2);
        let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
        for (n, x) in e.xi.iter().enumerate() {
            assert!((e.hl[n] - poly_eval(&dg2, *x)).abs() < 1e-12);
        }
        assert!((poly_eval(&g2, -1.0) - 1.0).abs() < 1e-14);
        assert!(poly_eval(&g2, 1.0).abs() < 1e-14);
    }

    #[test]
    fn g2_right_end_lumping_and_boundary_values() {
        for p in 1..=8 {
            let c = correction_polynomial(p, CorrectionKind::HuynhG2).unwrap();
            assert!(legendre::series_derivative(&c, 1.0).abs() < 1e-10);
            // Rebuild h_l from its derivative samples: integrate the nodal derivative exactly.
            let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
            let h_at_1: f64 = 1.0 + e.hl.iter().zip(&e.weights).map(|(h, w)| h * w).sum::<f64>();
            assert!(h_at_1.abs() < 1e-10);
            assert!((legendre::series(&c, -1.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dg_correction_boundary_values() {
        let p = 3;
        let c = correction_polynomial(p, CorrectionKind::Dg).unwrap();
        assert!((legendre::series(&c, -1.0) - 1.0).abs() < 1e-14);
        assert!(legendre::series(&c, 1.0).abs() < 1e-14);
    }

    #[test]
    fn reduced_order_degree_and_rejections() {
        let c = correction_polynomial(4, CorrectionKind::ReducedOrder).unwrap();
        assert_eq!(c.len(), 5);
        assert!(correction_polynomial(1, CorrectionKind::ReducedOrder).is_err());
        assert!("bogus".parse::<CorrectionKind>().is_err());
        assert_eq!("g2".parse::<CorrectionKind>().unwrap(), CorrectionKind::HuynhG2);
    }

    #[test]
    fn lobatto_element_contains_endpoints() {
        let e = ReferenceElement::with_points(3, CorrectionKind::HuynhG2, PointSet::GaussLobatto)
            .unwrap();
        assert_eq!(e.xi[0], -1.0);
        assert_eq!(e.ll[0], 1.0);
        assert_eq!(e.lr[3], 1.0);
    }

    proptest! {
        #[test]
        fn partition_of_unity(p in 1usize..=8, ts in prop::collection::vec(-1.0f64..=1.0, 200)) {
            let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
            for t in ts {
                let s: f64 = e.basis_at(t).iter().sum();
                prop_assert!((s - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn interpolation_is_exact_for_degree_p(
            p in 1usize..=8,
            coeffs in prop::collection::vec(-2.0f64..2.0, 9),
            ts in prop::collection::vec(-1.0f64..=1.0, 100),
        ) {
            let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
            let c = &coeffs[..=p];
            let u: Vec<f64> = e.xi.iter().map(|&x| poly_eval(c, x)).collect();
            for t in ts {
                prop_assert!((e.interpolate(&u, t) - poly_eval(c, t)).abs() < 1e-10);
            }
        }
    }
}
