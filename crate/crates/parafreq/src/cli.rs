//! Experiment runner: configures background/solution/window, runs checkers,
//! and emits a trace CSV plus a machine-readable JSON report.
//!
//! One `run` command with flag dispatch; a JSON config file may supply any
//! flag, with command-line values taking precedence. Output is
//! deterministic: identical config and seed give bit-identical files, with
//! or without `--parallel`.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::backgrounds::BackgroundKind;
use crate::error::{Error, Result};
use crate::evolve::{caloric_polynomial, solve_heat, solve_perturbed, TimeFn};
use crate::frequency::{
    backwards_bound_check, check_monotone, corollary_bound_check, equality_case_residual,
    general_bounds_check, hessian_identity_residual, trace,
};
use crate::kernel::kernel_at;
use crate::ouspec::{galerkin_spectrum, GalerkinBasis};
use crate::report::{Check, Report};
use crate::sampling::{random_field, rng_from_seed};
use crate::spectral::quadrature_from_kernel;
use crate::{Background, Field, KernelOptions, Solution, ToleranceTable, Trace, TraceOptions};

pub const EXPERIMENTS: &[&str] = &[
    "monotonicity",
    "equality-case",
    "backwards-uniqueness",
    "hessian-identity",
    "perturbed-bounds",
    "corollary-bound",
    "ou-spectrum",
    "all",
];

#[derive(Parser, Debug)]
#[command(name = "parafreq", version, about = "parabolic frequency experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one named experiment and write CSV/JSON artifacts.
    Run(RunArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// JSON config file; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// One of: monotonicity, equality-case, backwards-uniqueness,
    /// hessian-identity, perturbed-bounds, corollary-bound, ou-spectrum, all.
    #[arg(long)]
    experiment: Option<String>,
    /// gaussian | circle | sphere
    #[arg(long)]
    background: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    t1: Option<f64>,
    #[arg(long)]
    center: Option<f64>,
    #[arg(long)]
    circle_length: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
    /// Caloric per-axis degrees, comma separated (Gaussian soliton).
    #[arg(long, value_delimiter = ',')]
    degree: Option<Vec<usize>>,
    /// Initial mode coefficients (cosine modes on the circle, zonal Legendre
    /// coefficients on the sphere), comma separated.
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<f64>>,
    #[arg(long)]
    alpha0: Option<f64>,
    #[arg(long)]
    beta0: Option<f64>,
    /// const | sin (time profile of the alpha perturbation)
    #[arg(long)]
    perturb_shape: Option<String>,
    /// Time window as `a:b`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    /// Quadrature order (nodes per axis / circle nodes / sphere nodes).
    #[arg(long)]
    order: Option<usize>,
    /// Band limit for seeded random initial data.
    #[arg(long)]
    truncation: Option<usize>,
    /// Sphere delta smoothing.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// tau for the ou-spectrum experiment.
    #[arg(long)]
    tau: Option<f64>,
    /// Galerkin space degree for the ou-spectrum experiment.
    #[arg(long)]
    n_max: Option<usize>,
    /// hermite | monomial
    #[arg(long)]
    basis: Option<String>,
    /// Negative control: corrupt the trace before checking.
    #[arg(long)]
    corrupt: bool,
    /// Evaluate trace samples concurrently (bit-identical output).
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

/// Fully resolved experiment configuration (echoed into the JSON report).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub background: String,
    pub dim: usize,
    pub t1: f64,
    pub center: f64,
    pub circle_length: f64,
    pub c0: f64,
    pub degrees: Vec<usize>,
    pub modes: Vec<f64>,
    pub alpha0: f64,
    pub beta0: f64,
    pub perturb_shape: String,
    pub window: (f64, f64),
    pub samples: usize,
    pub order: Option<usize>,
    pub truncation: usize,
    pub eps: Option<f64>,
    pub seed: u64,
    pub tau: f64,
    pub n_max: usize,
    pub basis: String,
    pub corrupt: bool,
    pub parallel: bool,
    pub out_csv: Option<String>,
    pub out_json: Option<String>,
    /// Multiplier applied to the tolerance table
    /// (`PARAFREQ_TOLERANCE_SCALE`).
    pub tolerance_scale: f64,
}

/// The same fields, all optional: the shape of the JSON config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigPatch {
    experiment: Option<String>,
    background: Option<String>,
    dim: Option<usize>,
    t1: Option<f64>,
    center: Option<f64>,
    circle_length: Option<f64>,
    c0: Option<f64>,
    degrees: Option<Vec<usize>>,
    modes: Option<Vec<f64>>,
    alpha0: Option<f64>,
    beta0: Option<f64>,
    perturb_shape: Option<String>,
    window: Option<(f64, f64)>,
    samples: Option<usize>,
    order: Option<usize>,
    truncation: Option<usize>,
    eps: Option<f64>,
    seed: Option<u64>,
    tau: Option<f64>,
    n_max: Option<usize>,
    basis: Option<String>,
    corrupt: Option<bool>,
    parallel: Option<bool>,
    out_csv: Option<String>,
    out_json: Option<String>,
}

impl ExperimentConfig {
    fn defaults(background: &str) -> Self {
        let (t1, window) = match background {
            "sphere" => (1.0, (-1.0, 0.5)),
            _ => (0.0, (-2.0, -1.0)),
        };
        ExperimentConfig {
            experiment: "monotonicity".into(),
            background: background.into(),
            dim: 1,
            t1,
            center: 0.0,
            circle_length: 2.0 * std::f64::consts::PI,
            c0: 4.0,
            degrees: vec![2],
            modes: vec![],
            alpha0: 0.0,
            beta0: 0.0,
            perturb_shape: "const".into(),
            window,
            samples: 64,
            order: None,
            truncation: 8,
            eps: None,
            seed: 0,
            tau: 1.0,
            n_max: 6,
            basis: "hermite".into(),
            corrupt: false,
            parallel: false,
            out_csv: None,
            out_json: None,
            tolerance_scale: 1.0,
        }
    }

    fn apply_patch(&mut self, p: &ConfigPatch) {
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = &p.$f { self.$f = v.clone(); }
            )*};
        }
        set!(
            experiment,
            background,
            dim,
            t1,
            center,
            circle_length,
            c0,
            degrees,
            modes,
            alpha0,
            beta0,
            perturb_shape,
            window,
            samples,
            truncation,
            seed,
            tau,
            n_max,
            basis
        );
        if p.order.is_some() {
            self.order = p.order;
        }
        if p.eps.is_some() {
            self.eps = p.eps;
        }
        if let Some(v) = p.corrupt {
            self.corrupt = v;
        }
        if let Some(v) = p.parallel {
            self.parallel = v;
        }
        if p.out_csv.is_some() {
            self.out_csv = p.out_csv.clone();
        }
        if p.out_json.is_some() {
            self.out_json = p.out_json.clone();
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !EXPERIMENTS.contains(&self.experiment.as_str()) {
            return Err(Error::config(format!(
                "experiment: unknown experiment `{}`",
                self.experiment
            )));
        }
        if !["gaussian", "circle", "sphere"].contains(&self.background.as_str()) {
            return Err(Error::config(format!(
                "background: unknown background `{}`",
                self.background
            )));
        }
        if self.samples < 8 {
            return Err(Error::config("samples: at least 8 samples required"));
        }
        if !(self.window.0 < self.window.1) {
            return Err(Error::config("window: must satisfy a < b"));
        }
        if self.experiment != "ou-spectrum" {
            let guard = 1e-3 * (self.t1 - self.window.0);
            if !(self.window.1 < self.t1 - guard) {
                return Err(Error::config(
                    "window: must satisfy b < t1 - eps_min (eps_min = 1e-3 (t1 - a))",
                ));
            }
        }
        if !["const", "sin"].contains(&self.perturb_shape.as_str()) {
            return Err(Error::config(format!(
                "perturb_shape: unknown shape `{}`",
                self.perturb_shape
            )));
        }
        if !["hermite", "monomial"].contains(&self.basis.as_str()) {
            return Err(Error::config(format!(
                "basis: unknown basis `{}`",
                self.basis
            )));
        }
        Ok(())
    }

    pub fn build_background(&self) -> Result<Background> {
        match self.background.as_str() {
            "gaussian" => Background::gaussian(self.dim, self.t1, [self.center, 0.0, 0.0]),
            "circle" => Background::circle(self.circle_length, self.t1, self.center),
            "sphere" => Background::sphere(self.c0, self.t1),
            other => Err(Error::config(format!("background: `{other}`"))),
        }
    }

    fn kernel_options(&self, bg: &Background) -> KernelOptions {
        let mut kp = KernelOptions::for_window(bg, self.window.0);
        if let Some(eps) = self.eps {
            kp.sphere_eps = Some(eps);
        }
        kp
    }

    fn alpha_fn(&self) -> TimeFn<f64> {
        let a0 = self.alpha0;
        match self.perturb_shape.as_str() {
            "sin" => Arc::new(move |t: f64| a0 * t.sin()),
            _ => Arc::new(move |_| a0),
        }
    }

    fn beta_fn(&self) -> TimeFn<f64> {
        let b0 = self.beta0;
        Arc::new(move |_| b0)
    }

    /// Build the configured solution: caloric degrees on the Gaussian
    /// soliton, explicit or seeded-random band-limited data elsewhere,
    /// perturbed evolution when alpha or beta is nonzero.
    pub fn build_solution(&self, bg: &Background) -> Result<Solution> {
        match bg.kind {
            BackgroundKind::GaussianSoliton => {
                let degrees = if self.degrees.len() == bg.dim {
                    self.degrees.clone()
                } else if self.degrees.len() == 1 {
                    vec![self.degrees[0]; bg.dim]
                } else {
                    return Err(Error::config(format!(
                        "degrees: expected {} entries, got {}",
                        bg.dim,
                        self.degrees.len()
                    )));
                };
                caloric_polynomial(bg, &degrees, self.window)
            }
            BackgroundKind::FlatCircle => {
                let u0 = self.initial_field(bg)?;
                if self.alpha0 != 0.0 || self.beta0 != 0.0 {
                    solve_perturbed(bg, &u0, self.alpha_fn(), self.beta_fn(), self.window)
                } else {
                    solve_heat(bg, &u0, self.window)
                }
            }
            BackgroundKind::ShrinkingSphere => {
                let u0 = self.initial_field(bg)?;
                solve_heat(bg, &u0, self.window)
            }
        }
    }

    fn initial_field(&self, bg: &Background) -> Result<Field> {
        if !self.modes.is_empty() {
            match bg.kind {
                BackgroundKind::FlatCircle => {
                    Field::fourier(*bg, self.modes.clone(), vec![0.0; self.modes.len()])
                }
                BackgroundKind::ShrinkingSphere => Field::legendre(*bg, self.modes.clone()),
                BackgroundKind::GaussianSoliton => {
                    Err(Error::config("modes: use --degree on the Gaussian soliton"))
                }
            }
        } else {
            let mut rng = rng_from_seed(self.seed);
            random_field(bg, &mut rng, self.truncation)
        }
    }

    fn trace_options(&self, bg: &Background) -> TraceOptions {
        let mut opts = TraceOptions::new(self.samples).with_parallel(self.parallel);
        opts.order = self.order;
        opts.kernel = Some(self.kernel_options(bg));
        opts.tol = self.tolerances();
        opts
    }

    pub fn tolerances(&self) -> ToleranceTable {
        ToleranceTable::default().scaled(self.tolerance_scale)
    }
}

/// Format a float with shortest round-trip decimal representation.
fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Write a trace CSV with the fixed header
/// `t,tau,I,D,kappa,Ecorr,U,U_fd_prime`. An empty trace is refused.
pub fn emit_trace(tr: &Trace, path: &Path) -> Result<()> {
    if tr.is_empty() {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            "refusing to write an empty trace",
        )));
    }
    let mut out = String::from("t,tau,I,D,kappa,Ecorr,U,U_fd_prime\n");
    let fd = tr.u_fd_prime();
    for (s, up) in tr.samples.iter().zip(fd) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f64(s.t),
            fmt_f64(s.tau),
            fmt_f64(s.i_val),
            fmt_f64(s.d_val),
            fmt_f64(s.kappa),
            fmt_f64(s.ecorr),
            fmt_f64(s.u_val),
            fmt_f64(up)
        ));
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

pub fn emit_report(report: &Report, path: &Path) -> Result<()> {
    let mut file = fs::File::create(path)?;
    let json = serde_json::to_string_pretty(report)?;
    file.write_all(json.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

fn check_from_error(name: &str, err: &Error) -> Check {
    Check {
        name: format!("{name}: {err}"),
        passed: false,
        lhs: f64::NAN,
        rhs: f64::NAN,
        margin: f64::NAN,
        tolerance: f64::NAN,
    }
}

struct Outcome {
    checks: Vec<Check>,
    trace: Option<Trace>,
    eigenvalues: Option<Vec<f64>>,
}

fn run_single(experiment: &str, cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol = cfg.tolerances();
    match experiment {
        "ou-spectrum" => {
            let basis = if cfg.basis == "monomial" {
                GalerkinBasis::Monomial
            } else {
                GalerkinBasis::Hermite
            };
            let eigs = galerkin_spectrum(cfg.tau, cfg.n_max, basis, &tol)?;
            let mut worst = 0.0f64;
            for (j, e) in eigs.iter().enumerate() {
                worst = worst.max((e + j as f64 / (2.0 * cfg.tau)).abs());
            }
            let check = Check::new(
                "ou-spectrum",
                worst <= tol.ou_spectrum,
                worst,
                tol.ou_spectrum,
                tol.ou_spectrum - worst,
                tol.ou_spectrum,
            );
            Ok(Outcome {
                checks: vec![check],
                trace: None,
                eigenvalues: Some(eigs),
            })
        }
        "hessian-identity" => {
            let bg = cfg.build_background()?;
            let sol = cfg.build_solution(&bg)?;
            let t = 0.5 * (cfg.window.0 + cfg.window.1);
            let kp = cfg.kernel_options(&bg);
            let kd = kernel_at(&bg, t, &kp)?;
            let q = quadrature_from_kernel(
                &kd,
                cfg.order
                    .unwrap_or_else(|| crate::spectral::default_order(&bg)),
            )?;
            let u = sol.field_at(t)?;
            let res = hessian_identity_residual(&u, &kd, &q)?;
            let check = Check::new(
                "hessian-identity",
                res <= tol.hessian_identity,
                res,
                tol.hessian_identity,
                tol.hessian_identity - res,
                tol.hessian_identity,
            );
            Ok(Outcome {
                checks: vec![check],
                trace: None,
                eigenvalues: None,
            })
        }
        _ => {
            let bg = cfg.build_background()?;
            let sol = cfg.build_solution(&bg)?;
            let mut tr = trace(&sol, &cfg.trace_options(&bg))?;
            if cfg.corrupt {
                let mid = tr.len() / 2;
                let bump = 1.0 + tr.samples[0].u_val.abs();
                tr = tr.corrupted(mid, bump);
            }
            let mut checks = Vec::new();
            match experiment {
                "monotonicity" => match check_monotone(&tr, &tol) {
                    Ok(c) => checks.push(c),
                    Err(e) => checks.push(check_from_error("monotonicity", &e)),
                },
                "equality-case" => {
                    let idx = tr.len() / 2;
                    match equality_case_residual(&sol, &tr, idx, cfg.order, &tol) {
                        Ok(res) => checks.push(Check::new(
                            "equality-residual",
                            res <= tol.equality_residual,
                            res,
                            tol.equality_residual,
                            tol.equality_residual - res,
                            tol.equality_residual,
                        )),
                        Err(e) => checks.push(check_from_error("equality-residual", &e)),
                    }
                }
                "backwards-uniqueness" => match backwards_bound_check(&tr, &tol) {
                    Ok(c) => checks.push(c),
                    Err(e) => checks.push(check_from_error("backwards-bound", &e)),
                },
                "perturbed-bounds" => match general_bounds_check(&tr, &tol) {
                    Ok(cs) => checks.extend(cs),
                    Err(e) => checks.push(check_from_error("general-bounds", &e)),
                },
                "corollary-bound" => match corollary_bound_check(&tr, &tol) {
                    Ok(c) => checks.push(c),
                    Err(e) => checks.push(check_from_error("corollary-bound", &e)),
                },
                other => {
                    return Err(Error::config(format!("experiment: `{other}`")));
                }
            }
            Ok(Outcome {
                checks,
                trace: Some(tr),
                eigenvalues: None,
            })
        }
    }
}

/// Execute the configured experiment; returns the report and the trace (if
/// the experiment produced one).
pub fn run(cfg: &ExperimentConfig) -> Result<(Report, Option<Trace>)> {
    cfg.validate()?;
    let mut report = Report::new(&cfg.experiment, serde_json::to_value(cfg)?);
    let mut trace_out = None;

    let experiments: Vec<&str> = if cfg.experiment == "all" {
        let perturbed = cfg.background == "circle" && (cfg.alpha0 != 0.0 || cfg.beta0 != 0.0);
        if perturbed {
            // the heat-only checkers do not apply to perturbed evolutions
            vec!["perturbed-bounds", "corollary-bound", "hessian-identity"]
        } else {
            let mut list = vec!["monotonicity", "backwards-uniqueness", "hessian-identity"];
            if cfg.background == "gaussian" {
                list.push("equality-case");
                list.push("ou-spectrum");
            }
            list
        }
    } else {
        vec![cfg.experiment.as_str()]
    };

    for exp in experiments {
        match run_single(exp, cfg) {
            Ok(outcome) => {
                report.checks.extend(outcome.checks);
                if outcome.eigenvalues.is_some() {
                    report.eigenvalues = outcome.eigenvalues;
                }
                if let Some(tr) = outcome.trace {
                    if tr.max_kappa() > 1.0 + 1e-12 {
                        let note = format!(
                            "kappa > 1 on this background (max {}): the correction \
                             factor Ecorr departs from 1 (nonpositive-exponent convention)",
                            fmt_f64(tr.max_kappa())
                        );
                        if !report.notes.contains(&note) {
                            report.notes.push(note);
                        }
                    }
                    trace_out = Some(tr);
                }
            }
            Err(e) => report.checks.push(check_from_error(exp, &e)),
        }
    }

    if let Some(path) = &cfg.out_csv {
        match &trace_out {
            Some(tr) => emit_trace(tr, Path::new(path))?,
            None => {
                return Err(Error::Io(std::io::Error::new(
                    std::io::ErrorKind::InvalidInput,
                    "no trace produced; refusing to write an empty CSV",
                )))
            }
        }
    }
    if let Some(path) = &cfg.out_json {
        emit_report(&report, Path::new(path))?;
    }
    Ok((report, trace_out))
}

fn resolve_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let background = args
        .background
        .clone()
        .or_else(|| {
            args.config.as_ref().and_then(|p| {
                fs::read_to_string(p)
                    .ok()
                    .and_then(|s| serde_json::from_str::<ConfigPatch>(&s).ok())
                    .and_then(|p| p.background)
            })
        })
        .unwrap_or_else(|| "gaussian".to_string());
    let mut cfg = ExperimentConfig::defaults(&background);

    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)?;
        let patch: ConfigPatch =
            serde_json::from_str(&text).map_err(|e| Error::config(format!("config file: {e}")))?;
        cfg.apply_patch(&patch);
    }

    let cli_patch = ConfigPatch {
        experiment: args.experiment.clone(),
        background: args.background.clone(),
        dim: args.dim,
        t1: args.t1,
        center: args.center,
        circle_length: args.circle_length,
        c0: args.c0,
        degrees: args.degree.clone(),
        modes: args.modes.clone(),
        alpha0: args.alpha0,
        beta0: args.beta0,
        perturb_shape: args.perturb_shape.clone(),
        window: match &args.window {
            Some(w) => Some(parse_window(w)?),
            None => None,
        },
        samples: args.samples,
        order: args.order,
        truncation: args.truncation,
        eps: args.eps,
        seed: args.seed,
        tau: args.tau,
        n_max: args.n_max,
        basis: args.basis.clone(),
        corrupt: if args.corrupt { Some(true) } else { None },
        parallel: if args.parallel { Some(true) } else { None },
        out_csv: args.out_csv.as_ref().map(|p| p.display().to_string()),
        out_json: args.out_json.as_ref().map(|p| p.display().to_string()),
    };
    cfg.apply_patch(&cli_patch);

    if let Ok(scale) = std::env::var("PARAFREQ_TOLERANCE_SCALE") {
        cfg.tolerance_scale = scale
            .parse::<f64>()
            .map_err(|_| Error::config("PARAFREQ_TOLERANCE_SCALE: not a number"))?;
    }
    Ok(cfg)
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::config("window: expected `a:b`"));
    }
    let a = parts[0]
        .parse::<f64>()
        .map_err(|_| Error::config("window: bad start time"))?;
    let b = parts[1]
        .parse::<f64>()
        .map_err(|_| Error::config("window: bad end time"))?;
    Ok((a, b))
}

/// CLI entry point; returns the process exit code.
pub fn main_from_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.command {
        Command::Run(args) => {
            let cfg = match resolve_config(&args) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            match run(&cfg) {
                Ok((report, _)) => {
                    for c in &report.checks {
                        println!(
                            "{} {} (lhs={}, rhs={}, margin={}, tol={})",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.name,
                            fmt_f64(c.lhs),
                            fmt_f64(c.rhs),
                            fmt_f64(c.margin),
                            fmt_f64(c.tolerance)
                        );
                    }
                    if let Some(eigs) = &report.eigenvalues {
                        let rendered: Vec<String> = eigs.iter().map(|e| fmt_f64(*e)).collect();
                        println!("eigenvalues: [{}]", rendered.join(", "));
                    }
                    for n in &report.notes {
                        println!("note: {n}");
                    }
                    if report.all_passed() {
                        0
                    } else {
                        1
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("-2:-1").unwrap(), (-2.0, -1.0));
        assert!(parse_window("1").is_err());
        assert!(parse_window("x:y").is_err());
    }

    #[test]
    fn defaults_validate() {
        let cfg = ExperimentConfig::defaults("gaussian");
        cfg.validate().unwrap();
        let cfg = ExperimentConfig::defaults("sphere");
        cfg.validate().unwrap();
    }

    #[test]
    fn validation_names_offending_field() {
        let mut cfg = ExperimentConfig::defaults("gaussian");
        cfg.experiment = "nonsense".into();
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("experiment"), "got: {err}");

        let mut cfg = ExperimentConfig::defaults("gaussian");
        cfg.samples = 4;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("samples"), "got: {err}");

        let mut cfg = ExperimentConfig::defaults("gaussian");
        cfg.window = (-1.0, 0.5);
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("window"), "got: {err}");
    }

    #[test]
    fn monotonicity_run_produces_constant_frequency_for_caloric_cubic() {
        let mut cfg = ExperimentConfig::defaults("gaussian");
        cfg.degrees = vec![3];
        cfg.samples = 64;
        cfg.order = Some(12);
        let (report, tr) = run(&cfg).unwrap();
        assert!(report.all_passed());
        let tr = tr.unwrap();
        for s in &tr.samples {
            approx::assert_abs_diff_eq!(s.u_val, -1.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn corrupt_flag_fails_the_run() {
        let mut cfg = ExperimentConfig::defaults("circle");
        cfg.background = "circle".into();
        cfg.window = (-1.0, -0.5);
        cfg.modes = vec![0.0, 1.0, 0.5];
        cfg.samples = 32;
        cfg.corrupt = true;
        let (report, _) = run(&cfg).unwrap();
        assert!(!report.all_passed());
        assert!(report.checks[0].name.contains("frequency decreased"));
    }

    #[test]
    fn ou_spectrum_run_reports_eigenvalues() {
        let mut cfg = ExperimentConfig::defaults("gaussian");
        cfg.experiment = "ou-spectrum".into();
        cfg.tau = 1.0;
        cfg.n_max = 6;
        let (report, tr) = run(&cfg).unwrap();
        assert!(tr.is_none());
        assert!(report.all_passed());
        let eigs = report.eigenvalues.unwrap();
        assert_eq!(eigs.len(), 7);
        approx::assert_abs_diff_eq!(eigs[6], -3.0, epsilon = 1e-9);
    }
}
