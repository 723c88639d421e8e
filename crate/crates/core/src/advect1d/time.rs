//! Low-storage explicit time stepping for linear semi-discretisations.

use crate::error::{Error, Result};
use crate::stability::RkScheme;

/// Linear right-hand side `du/dt = L u` on a flat state vector.
pub trait LinearRhs {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes `L u` into `out`.
    fn apply(&self, u: &[f64], out: &mut [f64]);
}

/// Advances `u` by `steps` steps of size `tau`.
///
/// Uses the recursion `y = u + tau/i L(y)` for `i = s..1`, which for a linear
/// operator reproduces `R = sum_{i=0..s} (tau L)^i / i!` exactly with two extra
/// vectors of storage.
pub fn advance<L: LinearRhs + ?Sized>(
    rhs: &L,
    u: &mut [f64],
    tau: f64,
    scheme: RkScheme,
    steps: usize,
) -> Result<()> {
    let n = u.len();
    let mut y = vec![0.0; n];
    let mut ly = vec![0.0; n];
    for step in 0..steps {
        y.copy_from_slice(u);
        for i in (1..=scheme.stages()).rev() {
            rhs.apply(&y, &mut ly);
            let c = tau / i as f64;
            for ((yk, uk), lk) in y.iter_mut().zip(u.iter()).zip(&ly) {
                *yk = uk + c * lk;
            }
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: step + 1 });
        }
        u.copy_from_slice(&y);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Rotation;

    impl LinearRhs for Rotation {
        fn len(&self) -> usize {
            2
        }

        fn apply(&self, u: &[f64], out: &mut [f64]) {
            out[0] = -u[1];
            out[1] = u[0];
        }
    }

    struct Blowup;

    impl LinearRhs for Blowup {
        fn len(&self) -> usize {
            1
        }

        fn apply(&self, u: &[f64], out: &mut [f64]) {
            out[0] = 1e200 * u[0];
        }
    }

    #[test]
    fn zero_steps_is_identity() {
        let mut u = [0.3, -0.2];
        advance(&Rotation, &mut u, 0.1, RkScheme::Rk44, 0).unwrap();
        assert_eq!(u, [0.3, -0.2]);
    }

    #[test]
    fn matches_truncated_exponential() {
        // One step on the rotation generator equals the scalar amplification at z = i tau.
        for scheme in RkScheme::ALL {
            let tau = 0.3;
            let mut u = [1.0, 0.0];
            advance(&Rotation, &mut u, tau, scheme, 1).unwrap();
            let r = scheme.amplification(num_complex::Complex64::new(0.0, tau));
            assert!((u[0] - r.re).abs() < 1e-15 && (u[1] - r.im).abs() < 1e-15);
        }
    }

    #[test]
    fn non_finite_state_reports_step() {
        let mut u = [1.0];
        match advance(&Blowup, &mut u, 1e200, RkScheme::Rk33, 5) {
            Err(Error::NonFinite { step }) => assert_eq!(step, 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
