//! Small dense complex eigenproblems.

use nalgebra::DMatrix;
use num_complex::Complex64;

const SCHUR_EPS: f64 = 1e-14;
const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues of a square complex matrix via a Schur decomposition.
///
/// Returns `None` when the QR iteration fails to converge.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Option<Vec<Complex64>> {
    let schur = m.clone().try_schur(SCHUR_EPS, SCHUR_MAX_ITER)?;
    let ev = schur.eigenvalues()?;
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    Some(ev.iter().copied().collect())
}

/// One damped complex exponential `a z^s` recovered from a sampled signal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilMode {
    pub z: Complex64,
    pub amplitude: Complex64,
    /// `sum_s |a z^s|^2` over the fitted samples.
    pub energy: f64,
}

/// Matrix-pencil decomposition of `y_s = sum_n a_n z_n^s`.
///
/// The model order is the number of singular values of the Hankel matrix above
/// `rel_tol` times the largest. Modes are returned by decreasing energy over
/// the fitted window, so a large but quickly decaying term ranks below a
/// persistent one.
pub fn matrix_pencil(y: &[Complex64], rel_tol: f64) -> Option<Vec<PencilMode>> {
    let s = y.len();
    if s < 4 {
        return None;
    }
    let cols = s / 2 + 1;
    let rows = s - cols + 1;
    let hankel = DMatrix::from_fn(rows, cols, |i, j| y[i + j]);
    let svd = hankel.svd(false, true);
    let v_t = svd.v_t?;
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return None;
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rel_tol * smax)
        .take(cols - 1)
        .collect();
    // Rows of v_t span the space of sequences z^j; keep them unconjugated.
    let v = DMatrix::from_fn(cols, keep.len(), |r, c| v_t[(keep[c], r)]);
    let v1 = v.rows(0, cols - 1).into_owned();
    let v2 = v.rows(1, cols - 1).into_owned();
    let pencil = least_squares(v1, &v2)?;
    let z = eigenvalues(&pencil)?;
    let vander = DMatrix::from_fn(s, z.len(), |r, c| z[c].powi(r as i32));
    let rhs = DMatrix::from_column_slice(s, 1, y);
    let amp = least_squares(vander, &rhs)?;
    let mut modes: Vec<PencilMode> = z
        .iter()
        .zip(amp.iter())
        .map(|(&z, &amplitude)| {
            let r2 = z.norm_sqr();
            let energy = amplitude.norm_sqr() * (0..s).map(|i| r2.powi(i as i32)).sum::<f64>();
            PencilMode { z, amplitude, energy }
        })
        .collect();
    modes.sort_by(|a, b| b.energy.total_cmp(&a.energy));
    Some(modes)
}

// Least-squares solution of a tall full-rank system through Householder QR.
fn least_squares(a: DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    let qr = a.qr();
    let q = qr.q();
    let r = qr.r();
    r.solve_upper_triangular(&(q.adjoint() * b))
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &DMatrix<Complex64>) -> Option<f64> {
    eigenvalues(m).map(|ev| ev.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
