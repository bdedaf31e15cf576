//! The `qhm` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::experiments::{
    emit_report, fmt12, modulus_matrix, render_report, run_asymptotics, run_bound_suite,
    suite_pairs, ExperimentReport, ReportFormat, SequenceSpec,
};
use crate::flatten::{
    curve_pushforward_check, jacobian_bounds, standard_jacobian_sweeps, Flattening,
    NormalFlattening, PushforwardWeight,
};
use crate::geom::{DomainSpec, GraphDomain, Point};
use crate::solver::{qh_distance, Curve};

/// Exit status when a computation finished but did not converge or a check failed.
pub const EXIT_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qhm",
    version,
    about = "Quasi-hyperbolic distances, geodesics and boundary asymptotics"
)]
pub struct Cli {
    /// TOML configuration file. Flags override its keys.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasi-hyperbolic distance between two points.
    Dist {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Write the computed geodesic as CSV.
    Geodesic {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        pair: PairArgs,
        /// Output file [default: standard output].
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run a check suite; exits 0 only when every check passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Constant C of the Jacobian bounds [default: curvature bound of the domain].
        #[arg(long)]
        constant: Option<f64>,
    },
    /// Run a boundary ladder and emit its report.
    Asymptotics {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distortion checks of the flattening maps of a graph domain.
    FlattenCheck {
        #[command(flatten)]
        domain: DomainArgs,
        /// Constant C [default: curvature bound of the domain].
        #[arg(long)]
        constant: Option<f64>,
        /// Check a single chart point `x0,x1` of the normal chart instead of sweeping.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Lower bound on probe pairs near the boundary point.
    Ghm,
    /// Lower bound plus the extent of the upper bound for each constant.
    Bounds,
    /// Boundary ladder verdict.
    Asymptotics,
    /// Flattening Jacobian sweeps (graph domains).
    Jacobian,
    /// Dini / log-Dini verdicts of the reference moduli.
    Modulus,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DomainArgs {
    /// halfplane, halfspace, disc, ball, paraboloid, cosine-bump, c11, ellipse,
    /// superellipse [default: halfplane].
    #[arg(long)]
    pub domain: Option<String>,
    /// Dimension for halfspace, ball and paraboloid [default: 2].
    #[arg(long)]
    pub dim: Option<usize>,
    /// Curvature of paraboloid and c11 [default: 1].
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Amplitude of cosine-bump [default: 0.1].
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Frequency of cosine-bump [default: 2].
    #[arg(long)]
    pub frequency: Option<f64>,
    /// Half width of graph windows [default: 1].
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Ball radius [default: 1].
    #[arg(long)]
    pub radius: Option<f64>,
    /// Ball center [default: origin].
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Semi-axis along x0 of ellipse / superellipse [default: 2 / 1].
    #[arg(long)]
    pub semi_a: Option<f64>,
    /// Semi-axis along x1 of ellipse / superellipse [default: 1].
    #[arg(long)]
    pub semi_b: Option<f64>,
    /// Superellipse exponent [default: 4].
    #[arg(long)]
    pub exponent: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Grid spacing [default: 0.015625].
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Inactive boundary layer in spacings [default: 4].
    #[arg(long)]
    pub margin: Option<f64>,
    /// Neighbor stencil: 8 or 16 in 2-D, 6 or 26 in 3-D [default: 16 / 26].
    #[arg(long)]
    pub stencil: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// First point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Second point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    /// normal, tangential or fixed-ratio [default: tangential].
    #[arg(long)]
    pub mode: Option<String>,
    /// Ladder depth K: rungs t0 2^-k for k = 0..=K [default: 8].
    #[arg(short = 'K', long = "levels")]
    pub levels: Option<usize>,
    /// Largest rung scale [default: 0.125].
    #[arg(long)]
    pub t0: Option<f64>,
    /// Upper-bound constants, comma separated [default: 1.2].
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<f64>>,
    /// Boundary point approached by the ladder [default: depends on the domain].
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<String>,
    /// Offset ratio of the fixed-ratio mode [default: 2].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Rung depth over grid spacing [default: 8].
    #[arg(long)]
    pub spacing_ratio: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Report format: csv or json [default: csv].
    #[arg(long)]
    pub format: Option<String>,
    /// Report file [default: standard output].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn overlay<T: Clone>(dst: &mut Option<T>, src: &Option<T>) {
    if src.is_some() {
        dst.clone_from(src);
    }
}

impl DomainArgs {
    fn apply(&self, cfg: &mut Config) {
        let d = &mut cfg.domain;
        overlay(&mut d.kind, &self.domain);
        overlay(&mut d.dim, &self.dim);
        overlay(&mut d.kappa, &self.kappa);
        overlay(&mut d.amplitude, &self.amplitude);
        overlay(&mut d.frequency, &self.frequency);
        overlay(&mut d.half_width, &self.half_width);
        overlay(&mut d.radius, &self.radius);
        overlay(&mut d.center, &self.center);
        overlay(&mut d.semi_a, &self.semi_a);
        overlay(&mut d.semi_b, &self.semi_b);
        overlay(&mut d.exponent, &self.exponent);
    }
}

impl GridArgs {
    fn apply(&self, cfg: &mut Config) {
        overlay(&mut cfg.grid.spacing, &self.spacing);
        overlay(&mut cfg.grid.margin, &self.margin);
        overlay(&mut cfg.grid.stencil, &self.stencil);
    }
}

impl ExperimentArgs {
    fn apply(&self, cfg: &mut Config) {
        let e = &mut cfg.experiment;
        overlay(&mut e.mode, &self.mode);
        overlay(&mut e.levels, &self.levels);
        overlay(&mut e.t0, &self.t0);
        overlay(&mut e.c, &self.c);
        overlay(&mut e.zeta, &self.zeta);
        overlay(&mut e.lambda, &self.lambda);
        overlay(&mut e.spacing_ratio, &self.spacing_ratio);
    }
}

impl OutputArgs {
    fn apply(&self, cfg: &mut Config) {
        overlay(&mut cfg.output.format, &self.format);
        if let Some(p) = &self.out {
            cfg.output.path = Some(p.display().to_string());
        }
    }
}

fn point(s: &str) -> Result<Point> {
    s.parse::<Point>()
        .map_err(|e| Error::InvalidArgument(format!("bad point '{s}': {e}")))
}

fn graph_domain(domain: &DomainSpec) -> Result<GraphDomain> {
    match domain {
        DomainSpec::Graph(g) => Ok(g.clone()),
        _ => Err(Error::Unsupported(
            "flattening checks need a graph domain (paraboloid, cosine-bump or c11)".into(),
        )),
    }
}

fn sequence_spec(cfg: &Config, domain: &DomainSpec) -> Result<SequenceSpec> {
    let grid = cfg.grid()?;
    let mut spec = SequenceSpec::new(domain.clone(), cfg.zeta(domain)?, cfg.mode()?);
    let e = &cfg.experiment;
    spec.levels = e.levels.unwrap_or(spec.levels);
    spec.t0 = e.t0.unwrap_or(spec.t0);
    spec.spacing_ratio = e.spacing_ratio.unwrap_or(spec.spacing_ratio);
    spec.margin = grid.margin;
    spec.stencil = grid.stencil;
    Ok(spec)
}

fn write_report(cfg: &Config, report: &ExperimentReport, out: &mut dyn Write) -> Result<()> {
    let fmt: ReportFormat = cfg.format()?;
    match &cfg.output.path {
        Some(p) => emit_report(report, fmt, Path::new(p)),
        None => {
            out.write_all(render_report(report, fmt)?.as_bytes())?;
            Ok(())
        }
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Deterministic zigzag chart curves for the pushforward check.
fn zigzag_curves(x0_max: f64, half: f64) -> Vec<Curve> {
    (0..20)
        .map(|i| {
            let pts = (0..=8)
                .map(|j| {
                    let phase = (i * 7 + j * 3) % 11;
                    let x0 = x0_max * (0.05 + 0.9 * phase as f64 / 10.0);
                    let x1 = -half + 2.0 * half * j as f64 / 8.0 + 0.01 * i as f64;
                    Point::new2(x0, x1.clamp(-half, half))
                })
                .collect();
            Curve::new(pts).expect("zigzag curves are valid")
        })
        .collect()
}

/// Runs a parsed command line, writing results to `out` and progress lines to
/// `err`. Returns the process exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match &cli.command {
        Command::Dist { domain, grid, pair } => {
            domain.apply(&mut cfg);
            grid.apply(&mut cfg);
            let dom = cfg.domain()?;
            let r = qh_distance(&dom, &point(&pair.a)?, &point(&pair.b)?, &cfg.grid()?)?;
            writeln!(out, "value = {}", fmt12(r.value))?;
            writeln!(out, "error_estimate = {}", fmt12(r.error_estimate))?;
            writeln!(out, "converged = {}", r.converged)?;
            writeln!(out, "spacing = {}", fmt12(r.spacing))?;
            writeln!(out, "value_coarse = {}", fmt12(r.value_coarse))?;
            writeln!(out, "value_fine = {}", fmt12(r.value_fine))?;
            Ok(if r.converged { 0 } else { EXIT_FAILED })
        }
        Command::Geodesic {
            domain,
            grid,
            pair,
            out: path,
        } => {
            domain.apply(&mut cfg);
            grid.apply(&mut cfg);
            let dom = cfg.domain()?;
            let r = qh_distance(&dom, &point(&pair.a)?, &point(&pair.b)?, &cfg.grid()?)?;
            let mut text = String::new();
            text.push_str(&format!("# value: {}\n", fmt12(r.value)));
            text.push_str(&format!("# error_estimate: {}\n", fmt12(r.error_estimate)));
            let dim = dom.dim();
            let header: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
            text.push_str(&header.join(","));
            text.push('\n');
            for p in r.geodesic.points() {
                let row: Vec<String> = p.coords().iter().map(|&x| fmt12(x)).collect();
                text.push_str(&row.join(","));
                text.push('\n');
            }
            match path {
                Some(p) => std::fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(if r.converged { 0 } else { EXIT_FAILED })
        }
        Command::Asymptotics {
            domain,
            grid,
            experiment,
            output,
        } => {
            domain.apply(&mut cfg);
            grid.apply(&mut cfg);
            experiment.apply(&mut cfg);
            output.apply(&mut cfg);
            let dom = cfg.domain()?;
            let spec = sequence_spec(&cfg, &dom)?;
            let rep = run_asymptotics(&spec, cfg.c_values()[0])?;
            write_report(&cfg, &rep, out)?;
            if let Some(v) = &rep.verdict {
                writeln!(
                    err,
                    "finest rung k={}: |h-s| = {}, |h/s-1| = {}, converged = {}",
                    v.finest_k,
                    fmt12(v.diff_trend),
                    fmt12(v.ratio_trend),
                    v.converged
                )?;
            }
            Ok(0)
        }
        Command::Verify {
            suite,
            domain,
            grid,
            experiment,
            output,
            constant,
        } => {
            domain.apply(&mut cfg);
            grid.apply(&mut cfg);
            experiment.apply(&mut cfg);
            output.apply(&mut cfg);
            let dom = cfg.domain()?;
            match suite {
                Suite::Ghm | Suite::Bounds => {
                    let zeta = cfg.zeta(&dom)?;
                    let pairs = suite_pairs(&dom, &zeta)?;
                    let cs = cfg.c_values();
                    let rep = run_bound_suite(&dom, &pairs, &cs, &cfg.grid()?)?;
                    write_report(&cfg, &rep, out)?;
                    let ghm = rep.ghm_violations();
                    let mut ok = ghm == 0;
                    writeln!(
                        err,
                        "ghm: {ghm} violations over {} pairs: {}",
                        rep.rows.len(),
                        status(ghm == 0)
                    )?;
                    if *suite == Suite::Bounds {
                        for b in &rep.bounds {
                            let pass = b.t_star > 0.0;
                            ok &= pass;
                            writeln!(
                                err,
                                "c = {}: t* = {}, {} of {} pairs violate: {}",
                                b.c,
                                fmt12(b.t_star),
                                b.violations,
                                b.tested,
                                status(pass)
                            )?;
                        }
                    }
                    Ok(if ok { 0 } else { EXIT_FAILED })
                }
                Suite::Asymptotics => {
                    let spec = sequence_spec(&cfg, &dom)?;
                    let rep = run_asymptotics(&spec, cfg.c_values()[0])?;
                    write_report(&cfg, &rep, out)?;
                    let ok = rep.verdict.as_ref().is_some_and(|v| v.passed);
                    if let Some(v) = &rep.verdict {
                        writeln!(
                            err,
                            "finest rung k={}: |h-s| = {}, |h/s-1| = {}, converged = {}: {}",
                            v.finest_k,
                            fmt12(v.diff_trend),
                            fmt12(v.ratio_trend),
                            v.converged,
                            status(ok)
                        )?;
                    }
                    Ok(if ok { 0 } else { EXIT_FAILED })
                }
                Suite::Jacobian => {
                    let g = graph_domain(&dom)?;
                    let c = constant.unwrap_or_else(|| g.gradient_lipschitz());
                    let mut ok = true;
                    for s in standard_jacobian_sweeps(&g, c)? {
                        ok &= s.passes();
                        let slack =
                            |checked: bool, v: f64| if checked { fmt12(v) } else { "-".into() };
                        writeln!(
                            out,
                            "{}: {} points, {} failures, lower slack {}, upper slack {}: {}",
                            s.map,
                            s.points,
                            s.failures,
                            slack(s.checks.lower, s.lower_slack),
                            slack(s.checks.upper, s.upper_slack),
                            status(s.passes())
                        )?;
                    }
                    Ok(if ok { 0 } else { EXIT_FAILED })
                }
                Suite::Modulus => {
                    let mut ok = true;
                    for m in modulus_matrix() {
                        ok &= m.passes();
                        let show = |v: Option<f64>| v.map_or("divergent".to_string(), fmt12);
                        let log = m
                            .log_dini
                            .map_or("-".to_string(), |l| show(l.value.value()));
                        writeln!(
                            out,
                            "{}: dini {}, log-dini {}: {}",
                            m.name,
                            show(m.dini.value.value()),
                            log,
                            status(m.passes())
                        )?;
                    }
                    Ok(if ok { 0 } else { EXIT_FAILED })
                }
            }
        }
        Command::FlattenCheck {
            domain,
            constant,
            point: single,
        } => {
            domain.apply(&mut cfg);
            let g = graph_domain(&cfg.domain()?)?;
            let c = constant.unwrap_or_else(|| g.gradient_lipschitz());
            if let Some(p) = single {
                let map = Flattening::Normal(NormalFlattening::new(g)?);
                let r = jacobian_bounds(&map, &point(p)?, c)?;
                writeln!(out, "sigma_min = {}", fmt12(r.sigma_min))?;
                writeln!(out, "sigma_max = {}", fmt12(r.sigma_max))?;
                writeln!(out, "predicted_lower = {}", fmt12(r.predicted_lower))?;
                writeln!(out, "predicted_upper = {}", fmt12(r.predicted_upper))?;
                writeln!(out, "lower_ok = {}", r.lower_ok)?;
                return Ok(if r.passes() { 0 } else { EXIT_FAILED });
            }
            let mut ok = true;
            for s in standard_jacobian_sweeps(&g, c)? {
                ok &= s.passes();
                writeln!(
                    out,
                    "jacobian {}: {} points, {} failures: {}",
                    s.map,
                    s.points,
                    s.failures,
                    status(s.passes())
                )?;
            }
            if g.dim() == 2 {
                let nf = NormalFlattening::new(g.clone())?;
                let x0_max = (0.5 * nf.reach).min(0.2);
                for w in [PushforwardWeight::One, PushforwardWeight::InverseDepth] {
                    let mut worst = f64::INFINITY;
                    for curve in zigzag_curves(x0_max, 0.5) {
                        worst = worst.min(curve_pushforward_check(&nf, &curve, w, c)?);
                    }
                    let pass = worst >= -1e-6;
                    ok &= pass;
                    writeln!(
                        out,
                        "pushforward {w:?}: min margin {}: {}",
                        fmt12(worst),
                        status(pass)
                    )?;
                }
            }
            Ok(if ok { 0 } else { EXIT_FAILED })
        }
    }
}

/// Parses `args` and runs; errors become exit status 1 with a message on `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            return 1;
        }
        // --help and --version
        Err(e) => {
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
