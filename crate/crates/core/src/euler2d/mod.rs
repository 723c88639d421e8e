//! Two-dimensional compressible Euler solvers on periodic quadrilateral meshes.
//!
//! [`Fr2d`] is tensor-product Flux Reconstruction and [`Fv2d`] a second-order
//! finite-volume baseline. Both expose their unknowns as point values (FR
//! solution points, FV centroids) through [`Discretisation`], so the same
//! time integrator, vortex initialisation and error norm serve both.

mod flux;
mod fr2d;
mod fv;
mod icv;

pub use flux::{fluxes, normal_flux, roe, rusanov, to_conserved, to_primitive, Cons, Prim, Riemann};
pub use fr2d::Fr2d;
pub use fv::Fv2d;
pub use icv::IcvParams;

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::mesh::{jitter, jitter_for_skew, skew_angle, uniform_quad_mesh, QuadMesh2D};
use crate::reference::CorrectionKind;

/// Semi-discrete Euler operator over point-valued unknowns.
///
/// States are flat arrays of `4 * n_points()` conserved values, point-major.
pub trait Discretisation: Sync {
    fn n_points(&self) -> usize;
    /// Physical location of every unknown.
    fn points(&self) -> &[[f64; 2]];
    /// Weights whose dot product with a point field gives its domain integral.
    fn quadrature_weights(&self) -> &[f64];
    /// Smallest point spacing, used to size time steps.
    fn spacing(&self) -> f64;
    fn rhs(&self, u: &[f64], dudt: &mut [f64]) -> Result<()>;
}

/// Conserved state sampled from a primitive field.
pub fn sample<D: Discretisation + ?Sized>(disc: &D, gas_gamma: f64, field: &dyn Fn(f64, f64) -> Prim) -> Vec<f64> {
    disc.points()
        .iter()
        .flat_map(|x| to_conserved(field(x[0], x[1]), gas_gamma))
        .collect()
}

/// Domain integrals of the four conserved variables.
pub fn integrals<D: Discretisation + ?Sized>(disc: &D, u: &[f64]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, w) in disc.quadrature_weights().iter().enumerate() {
        for v in 0..4 {
            out[v] += w * u[4 * i + v];
        }
    }
    out
}

/// Classical four-stage Runge-Kutta steps of size `dt`, in place.
pub fn rk44<D: Discretisation + ?Sized>(disc: &D, u: &mut [f64], dt: f64, steps: usize) -> Result<()> {
    let len = u.len();
    let (mut k, mut stage, mut acc) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    for step in 0..steps {
        acc.copy_from_slice(u);
        for (s, (a, b)) in [(0.5, 1.0 / 6.0), (0.5, 1.0 / 3.0), (1.0, 1.0 / 3.0), (0.0, 1.0 / 6.0)]
            .into_iter()
            .enumerate()
        {
            let src = if s == 0 { &*u } else { &stage[..] };
            disc.rhs(src, &mut k)?;
            for i in 0..len {
                acc[i] += dt * b * k[i];
            }
            if s < 3 {
                for i in 0..len {
                    stage[i] = u[i] + dt * a * k[i];
                }
            }
        }
        if acc.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { step: step + 1 });
        }
        u.copy_from_slice(&acc);
    }
    Ok(())
}

/// Point-averaged error of a computed field against the exact one.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    /// `(1/N) sum_n |theta_n|_2` over the 4-vector error at each point.
    pub theta: f64,
    /// Point-averaged absolute error of `rho`, `rho u`, `rho v`, `E`.
    pub per_variable: [f64; 4],
    pub dof: usize,
}

pub fn error_norm(computed: &[f64], exact: &[f64]) -> Result<ErrorReport> {
    if computed.len() != exact.len() || computed.len() % 4 != 0 || computed.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "computed field has {} values, exact {}",
            computed.len(),
            exact.len()
        )));
    }
    let n = computed.len() / 4;
    let mut theta = 0.0;
    let mut per_variable = [0.0; 4];
    for (c, x) in computed.chunks_exact(4).zip(exact.chunks_exact(4)) {
        let mut s = 0.0;
        for v in 0..4 {
            let d = c[v] - x[v];
            s += d * d;
            per_variable[v] += d.abs();
        }
        theta += s.sqrt();
    }
    Ok(ErrorReport {
        theta: theta / n as f64,
        per_variable: per_variable.map(|x| x / n as f64),
        dof: n,
    })
}

/// Observed order of accuracy from two or more error reports.
///
/// Least-squares slope of `ln theta` against `ln sqrt(DoF)`, sign flipped so
/// that converging results are positive.
pub fn ooa(reports: &[ErrorReport]) -> Result<f64> {
    if reports.len() < 2 {
        return Err(invalid("order of accuracy needs at least two resolutions"));
    }
    let pts: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| (0.5 * (r.dof as f64).ln(), r.theta.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("order of accuracy needs distinct resolutions"));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(-sxy / sxx)
}

/// Spatial scheme of an ICV run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Fr { p: usize },
    Fv,
}

impl Scheme {
    pub fn dof_per_element(self) -> usize {
        match self {
            Self::Fr { p } => (p + 1) * (p + 1),
            Self::Fv => 1,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fr { p } => write!(f, "fr{p}"),
            Self::Fv => f.write_str("fv"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        if s == "fv" {
            return Ok(Self::Fv);
        }
        s.strip_prefix("fr")
            .and_then(|p| p.parse().ok())
            .map(|p| Self::Fr { p })
            .ok_or_else(|| invalid(format!("unknown scheme '{s}' (fv, fr<p>)")))
    }
}

/// How the base mesh is warped before a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Warp {
    None,
    /// Jitter with a fixed factor.
    Factor(f64),
    /// Jitter with the factor that gives this mesh-average skew in degrees.
    Skew(f64),
}

/// One ICV run.
#[derive(Clone, Debug, PartialEq)]
pub struct IcvConfig {
    pub scheme: Scheme,
    /// Elements per side.
    pub cells: usize,
    pub warp: Warp,
    pub seed: u64,
    pub steps: usize,
    pub cfl: f64,
    /// Elements per side of the mesh whose spacing fixes the time step;
    /// `None` uses this run's own mesh.
    pub reference_cells: Option<usize>,
    pub riemann: Riemann,
    pub correction: CorrectionKind,
    pub params: IcvParams,
}

impl Default for IcvConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Fr { p: 4 },
            cells: 8,
            warp: Warp::None,
            seed: 0,
            steps: 500,
            cfl: 0.01,
            reference_cells: None,
            riemann: Riemann::Rusanov,
            correction: CorrectionKind::HuynhG2,
            params: IcvParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IcvResult {
    pub error: ErrorReport,
    pub skew: f64,
    pub jitter_factor: f64,
    pub dt: f64,
    pub final_time: f64,
    /// Conserved integrals before and after the run.
    pub integrals: [[f64; 4]; 2],
}

/// Largest jitter factor tried when searching for a target skew.
pub const MAX_JITTER_FACTOR: f64 = 1.5;

/// Builds the (possibly warped) mesh of a run.
pub fn icv_mesh(cfg: &IcvConfig) -> Result<QuadMesh2D> {
    let base = uniform_quad_mesh(cfg.cells, cfg.cells, cfg.params.period)?;
    match cfg.warp {
        Warp::None => Ok(base),
        Warp::Factor(f) => jitter(&base, f, cfg.seed),
        Warp::Skew(a) => Ok(jitter_for_skew(&base, a, cfg.seed, MAX_JITTER_FACTOR)?.0),
    }
}

pub fn discretise(cfg: &IcvConfig, mesh: &QuadMesh2D) -> Result<Box<dyn Discretisation>> {
    let g = cfg.params.gas_gamma;
    Ok(match cfg.scheme {
        Scheme::Fr { p } => Box::new(Fr2d::new(mesh, p, cfg.correction, cfg.riemann, g)?),
        Scheme::Fv => Box::new(Fv2d::new(mesh, cfg.riemann, g)?),
    })
}

/// Time step `cfl * spacing / max(|u| + a)` on the uniform reference mesh.
pub fn time_step(cfg: &IcvConfig) -> f64 {
    let n = cfg.reference_cells.unwrap_or(cfg.cells);
    let per_side = match cfg.scheme {
        Scheme::Fr { p } => n * (p + 1),
        Scheme::Fv => n,
    };
    cfg.cfl * (cfg.params.period / per_side as f64) / cfg.params.max_wave_speed()
}

/// Runs the convecting vortex and measures the error at the final time.
pub fn run_icv(cfg: &IcvConfig) -> Result<IcvResult> {
    cfg.params.validate()?;
    if !(cfg.cfl > 0.0) || cfg.steps == 0 {
        return Err(invalid("ICV run needs a positive CFL and at least one step"));
    }
    let mesh = icv_mesh(cfg)?;
    let skew = skew_angle(&mesh)?.alpha;
    let disc = discretise(cfg, &mesh)?;
    let params = cfg.params;
    let g = params.gas_gamma;
    let dt = time_step(cfg);
    let mut u = sample(disc.as_ref(), g, &|x, y| params.state(x, y, 0.0));
    let before = integrals(disc.as_ref(), &u);
    rk44(disc.as_ref(), &mut u, dt, cfg.steps)?;
    let t = dt * cfg.steps as f64;
    let exact = sample(disc.as_ref(), g, &|x, y| params.state(x, y, t));
    Ok(IcvResult {
        error: error_norm(&u, &exact)?,
        skew,
        jitter_factor: mesh.jitter_factor,
        dt,
        final_time: t,
        integrals: [before, integrals(disc.as_ref(), &u)],
    })
}

/// Runs one configuration at several resolutions and fits the order of accuracy.
pub fn convergence(cfg: &IcvConfig, cells: &[usize]) -> Result<(Vec<IcvResult>, f64)> {
    let results = cells
        .iter()
        .map(|&n| run_icv(&IcvConfig { cells: n, ..cfg.clone() }))
        .collect::<Result<Vec<_>>>()?;
    let reports: Vec<ErrorReport> = results.iter().map(|r| r.error.clone()).collect();
    let order = ooa(&reports)?;
    Ok((results, order))
}
