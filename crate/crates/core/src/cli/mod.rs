//! Command-line driver: one subcommand per experiment, CSV out.
//!
//! Every run writes its CSV files, a manifest with the fully resolved
//! parameters and, on request, gnuplot scripts into the output directory.
//! Parameters come from flags, then a flat `key = value` config file, then
//! built-in defaults. Reruns with the same parameters produce identical files.

mod config;
mod output;

pub use config::{parse_config, Resolver};
pub use output::{Output, Table};

use std::f64::consts::PI;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::advect1d::transfer::{numeric_ppw, numeric_ppw_sweep, wave_transfer_function, WaveConfig, WaveScheme};
use crate::advect1d::FdScheme;
use crate::error::{invalid, Error, Result};
use crate::euler2d::{convergence, ooa, ErrorReport, IcvConfig, Riemann, Scheme, Warp};
use crate::mesh::{jitter, jitter_for_skew, skew_angle, uniform_quad_mesh, QuadMesh2D};
use crate::reference::CorrectionKind;
use crate::spectral::{dispersion_curves, filter_kernel, kernel_cutoff, ppw, PpwRule};
use crate::stability::{cfl_table, spectral_radius_sweep, CflSearch, RkScheme, TABLE_GAMMAS, TABLE_ORDERS};

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "FLUX_RECON_THREADS";

#[derive(Debug, Parser)]
#[command(name = "flux-recon", version, about = "Flux Reconstruction analysis and solver experiments")]
pub struct Cli {
    /// Flat `key = value` file supplying parameters not given as flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for CSV files, manifests and plot scripts [default: out].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script next to each CSV.
    #[arg(long, global = true)]
    pub plot: bool,
    /// Worker threads for parameter sweeps and solvers.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Modified phase velocity of the physical mode against k_hat.
    Dispersion(DispersionArgs),
    /// Implicit filter kernel exp(t k_hat Im c).
    Kernel(KernelArgs),
    /// Points per wavelength for a dispersion-error tolerance.
    Ppw(PpwArgs),
    /// CFL limits of FR with explicit Runge-Kutta schemes.
    CflTable(CflTableArgs),
    /// Spectral radius of the update matrix across k_hat.
    RhoSweep(RhoSweepArgs),
    /// Numerical transfer functions of the 1D advection solvers.
    WaveTest(WaveTestArgs),
    /// Uniform or jittered periodic quadrilateral mesh.
    MeshGen(MeshGenArgs),
    /// Cross-diagonal skew angles of a mesh file.
    Skew(SkewArgs),
    /// Isentropic convecting vortex error and order of accuracy.
    Icv(IcvArgs),
    /// Order of accuracy from a CSV with `dof` and `theta` columns.
    Ooa(OoaArgs),
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    /// Polynomial degree of the solution.
    #[arg(long)]
    pub p: Option<usize>,
    /// Expansion rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    /// Correction function: g2, dg or reduced.
    #[arg(long)]
    pub kind: Option<CorrectionKind>,
    /// Number of k_hat samples over (0, pi].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Emit every eigenvalue branch, not only the physical one.
    #[arg(long)]
    pub all_modes: bool,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Polynomial degree of the solution.
    #[arg(long)]
    pub p: Option<usize>,
    /// Expansion rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    /// Correction function: g2, dg or reduced.
    #[arg(long)]
    pub kind: Option<CorrectionKind>,
    /// Number of k_hat samples over (0, pi].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Travel time in solution-point spacings.
    #[arg(long)]
    pub time: Option<f64>,
    /// Kernel level reported as the cutoff wavenumber.
    #[arg(long)]
    pub level: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PpwArgs {
    /// Polynomial degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<usize>>,
    /// Expansion rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    /// Tolerance on the phase-velocity error.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// rms or first-crossing.
    #[arg(long)]
    pub rule: Option<PpwRule>,
    /// Number of k_hat samples over (0, pi].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Also measure with the 1D solver at this many degrees of freedom.
    #[arg(long)]
    pub numeric_dof: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CflTableArgs {
    /// RK33, RK44, RK55, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub scheme: Option<Vec<RkScheme>>,
    /// Spatial orders p + 1.
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<usize>>,
    /// Expansion rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    /// Relative rise of max rho above its weak-growth envelope that marks the limit.
    #[arg(long)]
    pub knee: Option<f64>,
    /// Number of k_hat samples over (0, pi].
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RhoSweepArgs {
    /// Polynomial degree of the solution.
    #[arg(long)]
    pub p: Option<usize>,
    /// Expansion rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    /// Runge-Kutta scheme: RK33, RK44 or RK55.
    #[arg(long)]
    pub scheme: Option<RkScheme>,
    /// CFL numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub cfl: Option<Vec<f64>>,
    /// Number of k_hat samples over (0, pi].
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WaveTestArgs {
    /// `fr<p>` or an FD stencil such as `cd4`, `uw3`.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Correction function: g2, dg or reduced.
    #[arg(long)]
    pub kind: Option<CorrectionKind>,
    /// Lax-Friedrichs blend of FD schemes.
    #[arg(long)]
    pub lf: Option<f64>,
    /// Expansion rate of the grid.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Degrees of freedom of the periodic grid.
    #[arg(long)]
    pub dof: Option<usize>,
    /// Integer wavelength counts; defaults to every mode up to `max-k-hat`.
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<usize>>,
    /// Largest mean k_hat in units of pi when `modes` is not given.
    #[arg(long)]
    pub max_k_hat: Option<f64>,
    /// CFL number on the smallest spacing.
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Largest input leakage accepted before a run aborts.
    #[arg(long)]
    pub leakage: Option<f64>,
    /// Tolerance for the numeric points-per-wavelength.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MeshGenArgs {
    /// Elements per side.
    #[arg(long)]
    pub cells: Option<usize>,
    /// Side length of the square periodic box.
    #[arg(long)]
    pub length: Option<f64>,
    /// Jitter factor; exclusive with `skew`.
    #[arg(long)]
    pub jitter: Option<f64>,
    /// Target mesh-average skew in degrees.
    #[arg(long)]
    pub skew: Option<f64>,
    /// Seed of the jitter random number stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Base name of the mesh and skew files.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct SkewArgs {
    /// Mesh file written by `mesh-gen`.
    pub mesh: PathBuf,
}

#[derive(Debug, Args)]
pub struct IcvArgs {
    /// `fr<p>` or `fv`.
    #[arg(long)]
    pub scheme: Option<Scheme>,
    /// Elements per side for each resolution.
    #[arg(long, value_delimiter = ',')]
    pub cells: Option<Vec<usize>>,
    /// Jitter factor; exclusive with `skew`.
    #[arg(long)]
    pub jitter: Option<f64>,
    /// Target mesh-average skew in degrees.
    #[arg(long)]
    pub skew: Option<f64>,
    /// Seed of the jitter random number stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// RK44 steps on every mesh.
    #[arg(long)]
    pub steps: Option<usize>,
    /// CFL number of the time step.
    #[arg(long)]
    pub cfl: Option<f64>,
    /// rusanov or roe.
    #[arg(long)]
    pub riemann: Option<Riemann>,
}

#[derive(Debug, Args)]
pub struct OoaArgs {
    /// CSV with `dof` and `theta` columns, such as the output of `icv`.
    pub input: PathBuf,
}

/// Files written and lines printed by one run.
#[derive(Debug, Default)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run_from<I, T>(args: I) -> Result<RunSummary>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    run(cli)
}

pub fn run(cli: Cli) -> Result<RunSummary> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(invalid("thread count must be positive"));
        }
        // A pool that already exists (repeated runs in one process) is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut r = Resolver::from_path(cli.config.as_deref())?;
    let dir: String = r.value("out", cli.out.map(|p| p.display().to_string()), "out".to_string())?;
    let plot = cli.plot || r.value("plot", None, false)?;
    let (name, mut out) = (cli.command.name(), Output::new(PathBuf::from(dir), plot)?);
    let lines = match cli.command {
        Command::Dispersion(a) => dispersion(a, &mut r, &mut out)?,
        Command::Kernel(a) => kernel(a, &mut r, &mut out)?,
        Command::Ppw(a) => ppw_cmd(a, &mut r, &mut out)?,
        Command::CflTable(a) => cfl_table_cmd(a, &mut r, &mut out)?,
        Command::RhoSweep(a) => rho_sweep(a, &mut r, &mut out)?,
        Command::WaveTest(a) => wave_test(a, &mut r, &mut out)?,
        Command::MeshGen(a) => mesh_gen(a, &mut r, &mut out)?,
        Command::Skew(a) => skew(a, &mut r, &mut out)?,
        Command::Icv(a) => icv(a, &mut r, &mut out)?,
        Command::Ooa(a) => ooa_cmd(a, &mut r, &mut out)?,
    };
    let mut lines = lines;
    for key in r.unused_keys() {
        lines.push(format!("warning: config key '{key}' is not used by {name}"));
    }
    out.manifest(name, r.resolved())?;
    Ok(RunSummary {
        files: out.into_files(),
        lines,
    })
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Dispersion(_) => "dispersion",
            Self::Kernel(_) => "kernel",
            Self::Ppw(_) => "ppw",
            Self::CflTable(_) => "cfl-table",
            Self::RhoSweep(_) => "rho-sweep",
            Self::WaveTest(_) => "wave-test",
            Self::MeshGen(_) => "mesh-gen",
            Self::Skew(_) => "skew",
            Self::Icv(_) => "icv",
            Self::Ooa(_) => "ooa",
        }
    }
}

fn f(x: f64) -> String {
    x.to_string()
}

fn dispersion(a: DispersionArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    let p = r.value("p", a.p, 3)?;
    let gammas = r.list("gamma", a.gamma, vec![1.0])?;
    let kind = r.value("kind", a.kind, CorrectionKind::HuynhG2)?;
    let samples = r.value("samples", a.samples, 512)?;
    let all = a.all_modes || r.value("all-modes", None, false)?;
    let curves = dispersion_curves(p, &gammas, kind, samples)?;
    let mut lines = Vec::new();
    for c in curves {
        let mut t = Table::new(&["k_hat", "re_c", "im_c", "mode_index", "p", "gamma", "correction_kind"]);
        for s in &c.samples {
            for (i, ev) in s.eigenvalues.iter().enumerate() {
                if all || i == s.physical {
                    t.row(vec![f(s.k_hat), f(ev.re), f(ev.im), i.to_string(), p.to_string(), f(c.gamma), kind.to_string()]);
                }
            }
        }
        let path = out.csv(&format!("dispersion_p{p}_g{}", c.gamma), &t, Some(("k_hat", "re_c")))?;
        lines.push(format!("wrote {}", path.display()));
    }
    Ok(lines)
}

fn kernel(a: KernelArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    let p = r.value("p", a.p, 3)?;
    let gammas = r.list("gamma", a.gamma, vec![1.0])?;
    let kind = r.value("kind", a.kind, CorrectionKind::HuynhG2)?;
    let samples = r.value("samples", a.samples, 512)?;
    let time = r.value("time", a.time, 100.0)?;
    let level = r.value("level", a.level, 0.5)?;
    let mut t = Table::new(&["k_hat", "g", "p", "gamma", "t"]);
    let mut lines = Vec::new();
    for c in dispersion_curves(p, &gammas, kind, samples)? {
        let k = filter_kernel(&c, time)?;
        for kp in &k {
            t.row(vec![f(kp.k_hat), f(kp.g), p.to_string(), f(c.gamma), f(time)]);
        }
        lines.push(format!(
            "p={p} gamma={}: kernel falls to {level} at k_hat = {:.4} pi",
            c.gamma,
            kernel_cutoff(&k, level) / PI
        ));
    }
    out.csv(&format!("kernel_p{p}"), &t, Some(("k_hat", "g")))?;
    Ok(lines)
}

fn ppw_cmd(a: PpwArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    let ps = r.list("p", a.p, vec![2, 3, 4, 5])?;
    let gammas = r.list("gamma", a.gamma, vec![1.0])?;
    let eps = r.value("epsilon", a.epsilon, 0.01)?;
    let rule = r.value("rule", a.rule, PpwRule::default())?;
    let samples = r.value("samples", a.samples, 512)?;
    let numeric_dof = r.optional("numeric-dof", a.numeric_dof)?;
    let mut t = Table::new(&["p", "gamma", "epsilon", "rule", "ppw_analytic", "ppw_numeric"]);
    let mut lines = Vec::new();
    for &p in &ps {
        for c in dispersion_curves(p, &gammas, CorrectionKind::HuynhG2, samples)? {
            let analytic = ppw(&c, eps, rule)?;
            let numeric = match numeric_dof {
                Some(dof) => {
                    let mut cfg = WaveConfig::new(WaveScheme::fr(p), c.gamma, dof, Vec::new());
                    cfg.leakage_threshold = 1.0;
                    numeric_ppw_sweep(&cfg, eps, rule, 8)?.0.to_string()
                }
                None => String::new(),
            };
            lines.push(format!("p={p} gamma={}: PPW {analytic:.4} {numeric}", c.gamma));
            t.row(vec![p.to_string(), f(c.gamma), f(eps), rule.to_string(), f(analytic), numeric]);
        }
    }
    out.csv("ppw", &t, Some(("p", "ppw_analytic")))?;
    Ok(lines)
}

fn cfl_table_cmd(a: CflTableArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    let schemes = r.list("scheme", a.scheme, RkScheme::ALL.to_vec())?;
    let orders = r.list("order", a.order, TABLE_ORDERS.to_vec())?;
    let gammas = r.list("gamma", a.gamma, TABLE_GAMMAS.to_vec())?;
    let search = CflSearch {
        knee: r.value("knee", a.knee, CflSearch::default().knee)?,
        k_samples: r.value("samples", a.samples, CflSearch::default().k_samples)?,
        ..CflSearch::default()
    };
    let results = cfl_table(&schemes, &orders, &gammas, &search)?;
    let mut t = Table::new(&["scheme", "spatial_order", "gamma", "cfl_limit", "detection_rule"]);
    for s in &results {
        t.row(vec![
            s.scheme.to_string(),
            (s.p + 1).to_string(),
            f(s.gamma),
            format!("{:.4}", s.cfl_limit),
            s.detection.as_str().to_string(),
        ]);
    }
    out.csv("cfl_table", &t, Some(("gamma", "cfl_limit")))?;
    Ok(vec![format!("{} CFL limits", results.len())])
}

fn rho_sweep(a: RhoSweepArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    let p = r.value("p", a.p, 3)?;
    let gammas = r.list("gamma", a.gamma, vec![1.0])?;
    let scheme = r.value("scheme", a.scheme, RkScheme::Rk44)?;
    let cfls = r.list("cfl", a.cfl, vec![0.1])?;
    let samples = r.value("samples", a.samples, 512)?;
    let mut t = Table::new(&["k_hat", "rho", "p", "gamma", "scheme", "cfl"]);
    let mut lines = Vec::new();
    for &g in &gammas {
        for &cfl in &cfls {
            let s = spectral_radius_sweep(p, g, scheme, cfl, samples)?;
            for (k, rho) in s.k_hat.iter().zip(&s.rho) {
                t.row(vec![f(*k), f(*rho), p.to_string(), f(g), scheme.to_string(), f(cfl)]);
            }
            lines.push(format!("gamma={g} cfl={cfl}: max rho {:.6}", s.max));
        }
    }
    out.csv(&format!("rho_sweep_p{p}_{scheme}"), &t, Some(("k_hat", "rho")))?;
    Ok(lines)
}

/// Reads `fr<p>` or an FD stencil name.
fn wave_scheme(spec: &str, kind: CorrectionKind, lf: f64) -> Result<WaveScheme> {
    let lower = spec.to_ascii_lowercase();
    if let Some(p) = lower.strip_prefix("fr") {
        let p = p.parse().map_err(|_| invalid(format!("cannot read FR order from '{spec}'")))?;
        return Ok(WaveScheme::Fr { p, kind });
    }
    let fd: FdScheme = spec.parse()?;
    Ok(WaveScheme::Fd(FdScheme::new(fd.order, lf)?))
}

fn wave_test(a: WaveTestArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    let spec = r.value("scheme", a.scheme, "fr3".to_string())?;
    let kind = r.value("kind", a.kind, CorrectionKind::HuynhG2)?;
    let lf = r.value("lf", a.lf, crate::advect1d::fd::DEFAULT_LF_BLEND)?;
    let scheme = wave_scheme(&spec, kind, lf)?;
    let gamma = r.value("gamma", a.gamma, 1.0)?;
    let dof = r.value("dof", a.dof, 180)?;
    let max_k = r.value("max-k-hat", a.max_k_hat, 0.7)?;
    let modes = r.list("modes", a.modes, WaveConfig::modes_up_to(dof, max_k * PI))?;
    let mut cfg = WaveConfig::new(scheme, gamma, dof, modes);
    cfg.cfl = r.value("cfl", a.cfl, cfg.cfl)?;
    cfg.leakage_threshold = r.value("leakage", a.leakage, cfg.leakage_threshold)?;
    let eps = r.value("epsilon", a.epsilon, 0.01)?;
    let table = wave_transfer_function(&cfg)?;
    let mut t = Table::new(&[
        "k_hat", "re_k_prime", "im_k_prime", "scheme", "p_or_order", "gamma", "cfl", "steps", "leakage",
    ]);
    let label = match scheme {
        WaveScheme::Fr { .. } => "FR".to_string(),
        WaveScheme::Fd(s) => s.to_string(),
    };
    let order = match scheme {
        WaveScheme::Fr { p, .. } => p,
        WaveScheme::Fd(s) => s.order,
    };
    for pt in &table.points {
        t.row(vec![
            f(pt.k_hat),
            f(pt.re_k_hat_prime),
            f(pt.im_k_hat_prime),
            label.clone(),
            order.to_string(),
            f(gamma),
            f(table.cfl),
            table.steps.to_string(),
            f(pt.leakage),
        ]);
    }
    out.csv(&format!("wave_{}_g{gamma}", spec.to_ascii_lowercase()), &t, Some(("k_hat", "re_k_prime")))?;
    let ppw = numeric_ppw(&table, eps, PpwRule::default())?;
    Ok(vec![format!("{scheme} gamma={gamma}: {} modes, PPW {ppw:.4}", table.points.len())])
}

fn skew_table(mesh: &QuadMesh2D) -> Result<(Table, f64)> {
    let report = skew_angle(mesh)?;
    let mut t = Table::new(&["element", "alpha_deg"]);
    for (e, a) in report.per_element.iter().enumerate() {
        t.row(vec![e.to_string(), f(*a)]);
    }
    Ok((t, report.alpha))
}

fn mesh_gen(a: MeshGenArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    let cells = r.value("cells", a.cells, 19)?;
    let length = r.value("length", a.length, 10.0)?;
    let factor = r.optional("jitter", a.jitter)?;
    let target = r.optional("skew", a.skew)?;
    let seed = r.value("seed", a.seed, 0)?;
    let name = r.value("name", a.name, "mesh".to_string())?;
    let base = uniform_quad_mesh(cells, cells, length)?;
    let mesh = match (factor, target) {
        (Some(_), Some(_)) => return Err(invalid("give either a jitter factor or a target skew, not both")),
        (Some(fac), None) => jitter(&base, fac, seed)?,
        (None, Some(s)) => jitter_for_skew(&base, s, seed, crate::euler2d::MAX_JITTER_FACTOR)?.0,
        (None, None) => base,
    };
    let path = out.text(&format!("{name}.txt"), &mesh.to_text())?;
    let (t, alpha) = skew_table(&mesh)?;
    out.csv(&format!("{name}_skew"), &t, Some(("element", "alpha_deg")))?;
    Ok(vec![format!(
        "wrote {} ({cells} x {cells}, jitter factor {:.6}, mean skew {alpha:.4} deg)",
        path.display(),
        mesh.jitter_factor
    )])
}

fn skew(a: SkewArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    r.value("mesh", Some(a.mesh.display().to_string()), String::new())?;
    let mesh = QuadMesh2D::read(&a.mesh)?;
    let (t, alpha) = skew_table(&mesh)?;
    let stem = a.mesh.file_stem().map_or("mesh".into(), |s| s.to_string_lossy().into_owned());
    out.csv(&format!("{stem}_skew"), &t, Some(("element", "alpha_deg")))?;
    Ok(vec![format!("mean skew {alpha:.6} deg over {} elements", mesh.n_elements())])
}

fn icv(a: IcvArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    let scheme = r.value("scheme", a.scheme, Scheme::Fr { p: 4 })?;
    let cells = r.list("cells", a.cells, vec![8, 16, 32])?;
    let factor = r.optional("jitter", a.jitter)?;
    let target = r.optional("skew", a.skew)?;
    let warp = match (factor, target) {
        (Some(_), Some(_)) => return Err(invalid("give either a jitter factor or a target skew, not both")),
        (Some(x), None) => Warp::Factor(x),
        (None, Some(s)) => Warp::Skew(s),
        (None, None) => Warp::None,
    };
    let cfg = IcvConfig {
        scheme,
        warp,
        seed: r.value("seed", a.seed, 0)?,
        steps: r.value("steps", a.steps, 500)?,
        cfl: r.value("cfl", a.cfl, 0.01)?,
        riemann: r.value("riemann", a.riemann, Riemann::Rusanov)?,
        ..IcvConfig::default()
    };
    let (results, order) = if cells.len() >= 2 {
        let (res, o) = convergence(&cfg, &cells)?;
        (res, Some(o))
    } else {
        (vec![crate::euler2d::run_icv(&IcvConfig { cells: cells[0], ..cfg.clone() })?], None)
    };
    let mut t = Table::new(&[
        "scheme", "cells", "dof", "skew_deg", "jitter_factor", "steps", "cfl", "dt", "final_time", "theta", "err_rho",
        "err_rhou", "err_rhov", "err_e",
    ]);
    for (n, res) in cells.iter().zip(&results) {
        let e = &res.error;
        t.row(vec![
            scheme.to_string(),
            n.to_string(),
            e.dof.to_string(),
            f(res.skew),
            f(res.jitter_factor),
            cfg.steps.to_string(),
            f(cfg.cfl),
            f(res.dt),
            f(res.final_time),
            f(e.theta),
            f(e.per_variable[0]),
            f(e.per_variable[1]),
            f(e.per_variable[2]),
            f(e.per_variable[3]),
        ]);
    }
    out.csv(&format!("icv_{scheme}"), &t, Some(("dof", "theta")))?;
    let mut lines: Vec<String> = results
        .iter()
        .map(|res| format!("DoF {:>7}: theta {:.4e}, skew {:.3} deg", res.error.dof, res.error.theta, res.skew))
        .collect();
    if let Some(o) = order {
        let mut s = Table::new(&["scheme", "skew_deg", "resolutions", "ooa"]);
        let mean_skew = results.iter().map(|x| x.skew).sum::<f64>() / results.len() as f64;
        s.row(vec![scheme.to_string(), f(mean_skew), cells.len().to_string(), f(o)]);
        out.csv(&format!("icv_{scheme}_ooa"), &s, None)?;
        lines.push(format!("OOA {o:.4}"));
    }
    Ok(lines)
}

fn ooa_cmd(a: OoaArgs, r: &mut Resolver, out: &mut Output) -> Result<Vec<String>> {
    r.value("input", Some(a.input.display().to_string()), String::new())?;
    let mut reader = csv::Reader::from_path(&a.input)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("{} has no '{name}' column", a.input.display())))
    };
    let (dof_col, theta_col) = (col("dof")?, col("theta")?);
    let mut reports = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("cannot read number '{}'", &rec[i])))
        };
        reports.push(ErrorReport {
            theta: parse(theta_col)?,
            per_variable: [0.0; 4],
            dof: parse(dof_col)? as usize,
        });
    }
    let order = ooa(&reports)?;
    let mut t = Table::new(&["input", "resolutions", "ooa"]);
    t.row(vec![a.input.display().to_string(), reports.len().to_string(), f(order)]);
    out.csv("ooa", &t, None)?;
    Ok(vec![format!("OOA {order:.4} from {} resolutions", reports.len())])
}
