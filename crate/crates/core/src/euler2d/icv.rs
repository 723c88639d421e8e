//! Isentropic convecting vortex.

use std::f64::consts::PI;

use super::flux::Prim;
use crate::error::{invalid, Result};

/// Vortex superposed on a uniform stream in a periodic box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IcvParams {
    pub strength: f64,
    pub radius: f64,
    pub free_stream: [f64; 2],
    pub rho_inf: f64,
    /// Free-stream temperature `p / rho`.
    pub t_inf: f64,
    pub gas_gamma: f64,
    /// Vortex centre at `t = 0`.
    pub centre: [f64; 2],
    /// Periodic box `[0, period]^2`.
    pub period: f64,
}

impl Default for IcvParams {
    fn default() -> Self {
        Self {
            strength: 5.0,
            radius: 1.0,
            free_stream: [1.0, 1.0],
            rho_inf: 1.0,
            t_inf: 1.0,
            gas_gamma: 1.4,
            centre: [5.0, 5.0],
            period: 10.0,
        }
    }
}

impl IcvParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.strength > 0.0 && self.radius > 0.0) {
            return Err(invalid("vortex strength and radius must be positive"));
        }
        if !(self.rho_inf > 0.0 && self.t_inf > 0.0 && self.gas_gamma > 1.0) {
            return Err(invalid("free-stream density, temperature and gamma - 1 must be positive"));
        }
        if self.period < 10.0 * self.radius {
            return Err(invalid(format!(
                "periodic box {} is smaller than 10 vortex radii",
                self.period
            )));
        }
        Ok(())
    }

    /// Largest `|u| + a` in the field.
    pub fn max_wave_speed(&self) -> f64 {
        let [u, v] = self.free_stream;
        // The swirl speed peaks at one radius.
        let peak = self.strength / (2.0 * PI);
        let a = (self.gas_gamma * self.t_inf).sqrt();
        (u * u + v * v).sqrt() + peak + a
    }

    /// Primitive state `(rho, u, v, p)` at `(x, y)` and time `t`.
    ///
    /// The vortex is convected by the free stream and the nearest periodic
    /// image of its centre is used.
    pub fn state(&self, x: f64, y: f64, t: f64) -> Prim {
        let wrap = |d: f64| d - self.period * (d / self.period).round();
        let dx = wrap(x - self.centre[0] - self.free_stream[0] * t) / self.radius;
        let dy = wrap(y - self.centre[1] - self.free_stream[1] * t) / self.radius;
        let r2 = dx * dx + dy * dy;
        let g = self.gas_gamma;
        let b = self.strength;
        let e = (0.5 * (1.0 - r2)).exp();
        let u = self.free_stream[0] - b / (2.0 * PI) * dy * e;
        let v = self.free_stream[1] + b / (2.0 * PI) * dx * e;
        let temp = self.t_inf - (g - 1.0) * b * b / (8.0 * g * PI * PI) * e * e;
        let rho = self.rho_inf * (temp / self.t_inf).powf(1.0 / (g - 1.0));
        [rho, u, v, rho * temp]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn far_field_is_the_free_stream() {
        let p = IcvParams::default();
        let w = p.state(5.0 + 8.0 / 2f64.sqrt(), 5.0 + 8.0 / 2f64.sqrt(), 0.0);
        let free = [1.0, 1.0, 1.0, 1.0];
        for k in 0..4 {
            assert!((w[k] - free[k]).abs() < 1e-6 * free[k]);
        }
    }

    #[test]
    fn pressure_is_lowest_at_the_centre() {
        let p = IcvParams::default();
        let centre = p.state(5.0, 5.0, 0.0)[3];
        for (x, y) in [(5.1, 5.0), (4.5, 5.5), (2.0, 8.0), (5.0, 4.99)] {
            assert!(p.state(x, y, 0.0)[3] > centre);
        }
    }

    #[test]
    fn flow_is_isentropic() {
        let p = IcvParams::default();
        for i in 0..40 {
            for j in 0..40 {
                let w = p.state(0.25 * i as f64, 0.25 * j as f64, 0.3);
                assert!((w[3] / w[0].powf(1.4) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn solution_is_the_translated_initial_field() {
        let p = IcvParams::default();
        let t = 3.7;
        let a = p.state(2.0, 9.5, t);
        let b = p.state(2.0 - t + 10.0, 9.5 - t, 0.0);
        for k in 0..4 {
            assert!((a[k] - b[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn small_boxes_are_rejected() {
        let p = IcvParams { period: 8.0, ..Default::default() };
        assert!(p.validate().is_err());
        assert!(IcvParams::default().validate().is_ok());
    }
}
