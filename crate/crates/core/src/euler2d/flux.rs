//! Ideal-gas Euler fluxes and approximate Riemann solvers.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error};

/// Conserved variables `(rho, rho u, rho v, E)`.
pub type Cons = [f64; 4];

/// Primitive variables `(rho, u, v, p)`.
pub type Prim = [f64; 4];

pub fn to_conserved(w: Prim, gamma: f64) -> Cons {
    let [rho, u, v, p] = w;
    [rho, rho * u, rho * v, p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v)]
}

pub fn to_primitive(q: Cons, gamma: f64) -> Prim {
    let rho = q[0];
    let (u, v) = (q[1] / rho, q[2] / rho);
    [rho, u, v, (gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v))]
}

/// Physical flux projected on the (not necessarily unit) direction `n`.
pub fn normal_flux(q: Cons, n: [f64; 2], gamma: f64) -> Cons {
    let [rho, u, v, p] = to_primitive(q, gamma);
    let un = u * n[0] + v * n[1];
    [
        rho * un,
        q[1] * un + p * n[0],
        q[2] * un + p * n[1],
        (q[3] + p) * un,
    ]
}

/// Cartesian fluxes `(F, G)`.
pub fn fluxes(q: Cons, gamma: f64) -> (Cons, Cons) {
    (normal_flux(q, [1.0, 0.0], gamma), normal_flux(q, [0.0, 1.0], gamma))
}

/// Interface flux function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Riemann {
    /// Local Lax-Friedrichs.
    #[default]
    Rusanov,
    /// Roe averaging with Harten's entropy fix on the acoustic waves.
    Roe,
}

impl Riemann {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Rusanov => "rusanov",
            Self::Roe => "roe",
        }
    }

    /// Flux through a face with unit normal `n`, from state `l` towards `r`.
    pub fn flux(self, l: Cons, r: Cons, n: [f64; 2], gamma: f64) -> Cons {
        match self {
            Self::Rusanov => rusanov(l, r, n, gamma),
            Self::Roe => roe(l, r, n, gamma),
        }
    }
}

impl fmt::Display for Riemann {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Riemann {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "rusanov" | "llf" => Ok(Self::Rusanov),
            "roe" => Ok(Self::Roe),
            _ => Err(invalid(format!("unknown Riemann solver '{s}' (rusanov, roe)"))),
        }
    }
}

fn sound_speed(w: Prim, gamma: f64) -> f64 {
    (gamma * w[3] / w[0]).sqrt()
}

pub fn rusanov(l: Cons, r: Cons, n: [f64; 2], gamma: f64) -> Cons {
    let (wl, wr) = (to_primitive(l, gamma), to_primitive(r, gamma));
    let sl = (wl[1] * n[0] + wl[2] * n[1]).abs() + sound_speed(wl, gamma);
    let sr = (wr[1] * n[0] + wr[2] * n[1]).abs() + sound_speed(wr, gamma);
    let s = sl.max(sr);
    let (fl, fr) = (normal_flux(l, n, gamma), normal_flux(r, n, gamma));
    std::array::from_fn(|k| 0.5 * (fl[k] + fr[k]) - 0.5 * s * (r[k] - l[k]))
}

pub fn roe(l: Cons, r: Cons, n: [f64; 2], gamma: f64) -> Cons {
    let (wl, wr) = (to_primitive(l, gamma), to_primitive(r, gamma));
    let (sl, sr) = (wl[0].sqrt(), wr[0].sqrt());
    let hl = (l[3] + wl[3]) / wl[0];
    let hr = (r[3] + wr[3]) / wr[0];
    let avg = |a: f64, b: f64| (sl * a + sr * b) / (sl + sr);
    let (u, v, h) = (avg(wl[1], wr[1]), avg(wl[2], wr[2]), avg(hl, hr));
    let q2 = u * u + v * v;
    let a = ((gamma - 1.0) * (h - 0.5 * q2)).sqrt();
    let rho = sl * sr;
    let un = u * n[0] + v * n[1];
    let (t0, t1) = (-n[1], n[0]);
    let ut = u * t0 + v * t1;

    let d_rho = wr[0] - wl[0];
    let d_p = wr[3] - wl[3];
    let d_un = (wr[1] - wl[1]) * n[0] + (wr[2] - wl[2]) * n[1];
    let d_ut = (wr[1] - wl[1]) * t0 + (wr[2] - wl[2]) * t1;

    let fix = |lam: f64| {
        let eps = 0.1 * a;
        if lam.abs() < eps {
            0.5 * (lam * lam / eps + eps)
        } else {
            lam.abs()
        }
    };
    let (l1, l2, l3) = (fix(un - a), un.abs(), fix(un + a));
    let w1 = l1 * (d_p - rho * a * d_un) / (2.0 * a * a);
    let w2 = l2 * (d_rho - d_p / (a * a));
    let w3 = l3 * (d_p + rho * a * d_un) / (2.0 * a * a);
    let w4 = l2 * rho * d_ut;

    let diss = [
        w1 + w2 + w3,
        w1 * (u - a * n[0]) + w2 * u + w3 * (u + a * n[0]) + w4 * t0,
        w1 * (v - a * n[1]) + w2 * v + w3 * (v + a * n[1]) + w4 * t1,
        w1 * (h - a * un) + w2 * 0.5 * q2 + w3 * (h + a * un) + w4 * ut,
    ];
    let (fl, fr) = (normal_flux(l, n, gamma), normal_flux(r, n, gamma));
    std::array::from_fn(|k| 0.5 * (fl[k] + fr[k]) - 0.5 * diss[k])
}
