//! Batch experiments: boundary ladders, bound suites, constant estimates and
//! the correction-integral observable, with CSV / JSON reports.

mod report;

pub use report::{
    emit_report, fmt12, parse_report, render_report, round12, BoundSummary, ExperimentReport,
    ExperimentRow, ReportFormat, ReportMetadata, RowStatus, Verdict, CSV_HEADER,
};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{
    dini_integral, log_dini_integral, omega_star, BoundaryCurve, DomainSpec, ModulusIntegral,
    ModulusOfContinuity, Point,
};
use crate::metric::{ghm_lower_bound, na_upper_bound, s_metric, PairData};
use crate::quad;
use crate::solver::{qh_distance, Curve, GridSpec, Stencil};

/// Pass tolerance on `|h - s|` at the finest rung.
pub const DIFF_TOL: f64 = 0.05;
/// Pass tolerance on `|h / s - 1|` at the finest rung.
pub const RATIO_TOL: f64 = 0.02;
pub const MAX_LEVELS: usize = 12;

/// How the two points of a rung approach the boundary point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SequenceMode {
    /// Depths `t` and `2t` on the inward normal.
    NormalPair,
    /// Depth `t` at `zeta` and at the boundary point `sqrt(t)` away in arc length.
    TangentialPair,
    /// Depth `t` at `zeta` and at the boundary point `lambda * t` away.
    FixedRatio { lambda: f64 },
}

impl fmt::Display for SequenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceMode::NormalPair => write!(f, "normal"),
            SequenceMode::TangentialPair => write!(f, "tangential"),
            SequenceMode::FixedRatio { lambda } => write!(f, "fixed-ratio(lambda={lambda})"),
        }
    }
}

impl SequenceMode {
    /// Parses `normal`, `tangential` or `fixed-ratio`; the latter takes `lambda`.
    pub fn parse(name: &str, lambda: f64) -> Result<Self> {
        match name.trim() {
            "normal" | "normal-pair" => Ok(SequenceMode::NormalPair),
            "tangential" | "tangential-pair" => Ok(SequenceMode::TangentialPair),
            "fixed-ratio" | "ratio" => Ok(SequenceMode::FixedRatio { lambda }),
            other => Err(Error::Parse(format!(
                "unknown mode '{other}' (normal, tangential or fixed-ratio)"
            ))),
        }
    }
}

/// Ladder `t_k = t0 2^-k`, `k = 0..=levels`, of point pairs tending to `zeta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSpec {
    pub domain: DomainSpec,
    pub zeta: Point,
    pub mode: SequenceMode,
    pub t0: f64,
    pub levels: usize,
    /// Grid spacing of rung `k` is `t_k / spacing_ratio`.
    pub spacing_ratio: f64,
    pub margin: f64,
    pub stencil: Option<Stencil>,
}

impl SequenceSpec {
    pub fn new(domain: DomainSpec, zeta: Point, mode: SequenceMode) -> Self {
        SequenceSpec {
            domain,
            zeta,
            mode,
            t0: 0.125,
            levels: 8,
            spacing_ratio: 8.0,
            margin: 4.0,
            stencil: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        if self.levels > MAX_LEVELS {
            return Err(Error::InvalidArgument(format!(
                "ladder depth {} exceeds {MAX_LEVELS}",
                self.levels
            )));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::InvalidArgument("t0 must be positive".into()));
        }
        if !(self.spacing_ratio >= 8.0) {
            return Err(Error::InvalidArgument(
                "rungs need at least 8 grid spacings of depth".into(),
            ));
        }
        if !(self.margin * 2.0 <= self.spacing_ratio) {
            return Err(Error::InvalidArgument(format!(
                "margin {} leaves the rung points inside the inactive layer",
                self.margin
            )));
        }
        if let SequenceMode::FixedRatio { lambda } = self.mode {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::InvalidArgument("lambda must be positive".into()));
            }
        }
        BoundaryFrame::at(&self.domain, &self.zeta).map(|_| ())
    }

    pub fn scale(&self, k: usize) -> f64 {
        self.t0 * 0.5f64.powi(k as i32)
    }

    fn grid(&self, t: f64) -> GridSpec {
        GridSpec {
            bbox: None,
            spacing: t / self.spacing_ratio,
            stencil: self.stencil,
            margin: self.margin,
        }
    }

    fn grid_label(&self) -> String {
        let st = self
            .stencil
            .unwrap_or_else(|| Stencil::default_for(self.domain.dim()));
        format!(
            "spacing=t/{};margin={};stencil={st}",
            self.spacing_ratio, self.margin
        )
    }

    /// The two points of rung `k`.
    pub fn pair(&self, k: usize) -> Result<(Point, Point)> {
        let t = self.scale(k);
        let frame = BoundaryFrame::at(&self.domain, &self.zeta)?;
        let a = frame.point(0.0, t)?;
        let b = match self.mode {
            SequenceMode::NormalPair => frame.point(0.0, 2.0 * t)?,
            SequenceMode::TangentialPair => frame.point(t.sqrt(), t)?,
            SequenceMode::FixedRatio { lambda } => frame.point(lambda * t, t)?,
        };
        Ok((a, b))
    }
}

/// A boundary point with its inward normal and, for planar domains, its
/// arc-length parametrization.
#[derive(Clone, Debug)]
pub struct BoundaryFrame {
    pub zeta: Point,
    pub normal: Point,
    curve: Option<(BoundaryCurve, f64)>,
}

impl BoundaryFrame {
    pub fn at(domain: &DomainSpec, zeta: &Point) -> Result<Self> {
        let pr = domain.project(zeta)?;
        let scale = 1.0 + zeta.norm();
        if !(pr.distance <= 1e-9 * scale) {
            return Err(Error::InvalidArgument(format!(
                "{zeta} is not a boundary point (distance {:e})",
                pr.distance
            )));
        }
        let curve = match domain.boundary_curve() {
            Ok(c) => {
                let cp = c
                    .project([zeta[0], zeta[1]])
                    .ok_or_else(|| Error::ProjectionNotConverged(zeta.to_string()))?;
                Some((c, cp.param))
            }
            Err(_) => None,
        };
        Ok(BoundaryFrame {
            zeta: pr.foot,
            normal: pr.normal,
            curve,
        })
    }

    /// Point at `depth` along the inward normal of the boundary point reached by
    /// walking arc length `offset` from `zeta` (planar domains only when the
    /// offset is nonzero).
    pub fn point(&self, offset: f64, depth: f64) -> Result<Point> {
        if offset == 0.0 {
            return Ok(self.zeta + self.normal * depth);
        }
        let (c, s0) = self
            .curve
            .as_ref()
            .ok_or_else(|| Error::Unsupported("tangential offsets need a planar domain".into()))?;
        let s = c.walk(*s0, offset);
        let p = c.point(s);
        let n = c.inward_normal(s);
        Ok(Point::new2(p[0] + depth * n[0], p[1] + depth * n[1]))
    }
}

fn is_skippable(e: &Error) -> bool {
    matches!(
        e,
        Error::PointTooCloseToBoundary { .. } | Error::GridTooLarge(_)
    )
}

/// Distances and bounds for one pair. `None` for `c` leaves `na_bound` NaN.
fn evaluate_pair(
    domain: &DomainSpec,
    k: usize,
    t: Option<f64>,
    a: Point,
    b: Point,
    grid: &GridSpec,
    c: Option<f64>,
) -> Result<ExperimentRow> {
    let pair = PairData::in_domain(domain, a, b)?;
    let s = s_metric(&pair)?;
    let ghm = ghm_lower_bound(&pair)?;
    let na = match c {
        Some(c) => na_upper_bound(&pair, c)?,
        None => f64::NAN,
    };
    let t = t.unwrap_or(pair.d_a.max(pair.d_b));
    let mut row = ExperimentRow {
        k,
        t,
        a,
        b,
        d_a: pair.d_a,
        d_b: pair.d_b,
        sep: pair.sep,
        s,
        h: f64::NAN,
        h_minus_s: f64::NAN,
        h_over_s: f64::NAN,
        ghm,
        na_bound: na,
        error_estimate: f64::NAN,
        converged: false,
        status: RowStatus::Skipped,
    };
    match qh_distance(domain, &a, &b, grid) {
        Ok(r) => {
            row.h = r.value;
            row.h_minus_s = r.value - s;
            row.h_over_s = if s > 0.0 { r.value / s } else { f64::NAN };
            row.error_estimate = r.error_estimate;
            row.converged = r.converged;
            row.status = RowStatus::Ok;
            Ok(row)
        }
        Err(e) if is_skippable(&e) => Ok(row),
        Err(e) => Err(e),
    }
}

/// Runs every rung of the ladder (in parallel) and judges the finest resolved one.
pub fn run_asymptotics(spec: &SequenceSpec, c: f64) -> Result<ExperimentReport> {
    spec.validate()?;
    if !(c > 1.0) {
        return Err(Error::ConstantOutOfRange(c));
    }
    let rows = (0..=spec.levels)
        .into_par_iter()
        .map(|k| {
            let t = spec.scale(k);
            let (a, b) = spec.pair(k)?;
            evaluate_pair(&spec.domain, k, Some(t), a, b, &spec.grid(t), Some(c))
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = ladder_verdict(&rows);
    Ok(ExperimentReport {
        metadata: ReportMetadata {
            domain: Some(spec.domain.label()),
            mode: Some(format!("{};zeta={};t0={}", spec.mode, spec.zeta, spec.t0)),
            grid: Some(spec.grid_label()),
            c: Some(c),
            timestamp: None,
        },
        verdict,
        bounds: Vec::new(),
        rows,
    })
}

fn ladder_verdict(rows: &[ExperimentRow]) -> Option<Verdict> {
    let ok: Vec<&ExperimentRow> = rows.iter().filter(|r| r.status == RowStatus::Ok).collect();
    let last = ok.last()?;
    let inversions = ok
        .windows(2)
        .filter(|w| w[1].h_minus_s.abs() > w[0].h_minus_s.abs())
        .count();
    let ghm_violations = rows.iter().filter(|r| !r.ghm_ok()).count();
    let diff = last.h_minus_s.abs();
    let ratio = (last.h_over_s - 1.0).abs();
    Some(Verdict {
        diff_trend: diff,
        ratio_trend: ratio,
        finest_k: last.k,
        converged: last.converged,
        inversions,
        ghm_violations,
        passed: diff <= DIFF_TOL && ratio <= RATIO_TOL && last.converged && ghm_violations == 0,
    })
}

/// `grid` with its spacing capped at an eighth of the smaller depth of the pair.
fn pair_grid(domain: &DomainSpec, a: &Point, b: &Point, grid: &GridSpec) -> GridSpec {
    let d = domain.depth(a).min(domain.depth(b));
    let mut g = grid.clone();
    if d > 0.0 {
        g.spacing = g.spacing.min(d / 8.0);
    }
    g
}

/// Computes `h` for every pair (in parallel), checks the lower bound, and for
/// each `c` finds the largest depth `t*` below which the upper bound held for
/// all pairs. Rows carry the upper bound for the first constant. The grid
/// spacing of each pair is capped at an eighth of its smaller depth.
pub fn run_bound_suite(
    domain: &DomainSpec,
    pairs: &[(Point, Point)],
    c_values: &[f64],
    grid: &GridSpec,
) -> Result<ExperimentReport> {
    domain.validate()?;
    if let Some(&c) = c_values.iter().find(|&&c| !(c > 1.0)) {
        return Err(Error::ConstantOutOfRange(c));
    }
    let c0 = c_values.first().copied();
    let rows = pairs
        .par_iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let g = pair_grid(domain, a, b, grid);
            evaluate_pair(domain, k, None, *a, *b, &g, c0)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bounds = Vec::new();
    for &c in c_values {
        let mut checked: Vec<(f64, bool)> = Vec::new();
        for r in rows.iter().filter(|r| r.status == RowStatus::Ok) {
            let p = PairData::new(r.a, r.b, r.d_a, r.d_b)?;
            let bound = na_upper_bound(&p, c)?;
            checked.push((r.t, r.h <= bound + r.error_estimate));
        }
        checked.sort_by(|x, y| x.0.total_cmp(&y.0));
        let violations = checked.iter().filter(|x| !x.1).count();
        let t_star = match checked.iter().position(|x| !x.1) {
            None => checked.last().map_or(0.0, |x| x.0),
            Some(0) => 0.0,
            Some(i) => {
                // every pair at depth below the first failure passed
                let fail_t = checked[i].0;
                checked[..i]
                    .iter()
                    .rev()
                    .map(|x| x.0)
                    .find(|&t| t < fail_t)
                    .unwrap_or(0.0)
            }
        };
        bounds.push(BoundSummary {
            c,
            t_star,
            violations,
            tested: checked.len(),
        });
    }
    Ok(ExperimentReport {
        metadata: ReportMetadata {
            domain: Some(domain.label()),
            mode: Some("bounds".into()),
            grid: Some(format!(
                "spacing<=min({},d/8);margin={};stencil={}",
                grid.spacing,
                grid.margin,
                grid.stencil_for(domain.dim())
            )),
            c: c0,
            timestamp: None,
        },
        verdict: None,
        bounds,
        rows,
    })
}

/// Pairs used to probe the bounds at scale `r` near `zeta`: every pair of
/// points at depths `r/32` and `r/4` above the boundary points at arc-length
/// offsets `-r/2, 0, r/2`. Without a planar boundary parametrization only the
/// inward normal is used, at depths `r/32`, `r/8` and `r/4`.
pub fn probe_pairs(domain: &DomainSpec, zeta: &Point, r: f64) -> Result<Vec<(Point, Point)>> {
    let frame = BoundaryFrame::at(domain, zeta)?;
    let mut pts = Vec::new();
    if frame.curve.is_some() {
        for depth in [r / 32.0, r / 4.0] {
            for off in [-0.5 * r, 0.0, 0.5 * r] {
                pts.push(frame.point(off, depth)?);
            }
        }
    } else {
        for depth in [r / 32.0, r / 8.0, r / 4.0] {
            pts.push(frame.point(0.0, depth)?);
        }
    }
    let mut pairs = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            pairs.push((pts[i], pts[j]));
        }
    }
    Ok(pairs)
}

/// Probe pairs at the scales `r = 0.4, 0.2, 0.1, 0.05`.
pub fn suite_pairs(domain: &DomainSpec, zeta: &Point) -> Result<Vec<(Point, Point)>> {
    let mut all = Vec::new();
    for r in [0.4, 0.2, 0.1, 0.05] {
        all.extend(probe_pairs(domain, zeta, r)?);
    }
    Ok(all)
}

/// Details behind `estimate_best_constant`.
#[derive(Clone, Debug, PartialEq)]
pub struct BestConstant {
    /// Least admissible constant (`>= 1`; the bound needs `c > 1`, so `1.0`
    /// means every `c > 1` works).
    pub constant: f64,
    /// `max over pairs of (exp((h - err) / 2) - 1) sqrt(d_a d_b) / |a - b|`,
    /// which may be below 1.
    pub raw: f64,
    pub pairs: usize,
    pub rows: Vec<ExperimentRow>,
}

fn holds_at(rows: &[ExperimentRow], c: f64) -> bool {
    rows.iter().all(|r| {
        let q = r.sep / (r.d_a * r.d_b).sqrt();
        r.h <= 2.0 * (c * q).ln_1p() + r.error_estimate
    })
}

/// Bisection for the least `c` with `h <= na_bound(c) + err` on the probe pairs
/// at scale `depth` (grid spacing `depth / 256`).
pub fn estimate_best_constant_detailed(
    domain: &DomainSpec,
    zeta: &Point,
    depth: f64,
) -> Result<BestConstant> {
    if !(depth > 0.0) {
        return Err(Error::InvalidArgument("depth must be positive".into()));
    }
    let pairs = probe_pairs(domain, zeta, depth)?;
    let grid = GridSpec {
        spacing: depth / 256.0,
        ..Default::default()
    };
    let rows = pairs
        .par_iter()
        .enumerate()
        .map(|(k, (a, b))| evaluate_pair(domain, k, None, *a, *b, &grid, None))
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().any(|r| r.status != RowStatus::Ok) {
        return Err(Error::InvalidArgument(format!(
            "probe pairs at scale {depth} cannot be resolved by the grid"
        )));
    }
    let raw = rows
        .iter()
        .map(|r| ((0.5 * (r.h - r.error_estimate)).exp_m1()) * (r.d_a * r.d_b).sqrt() / r.sep)
        .fold(f64::NEG_INFINITY, f64::max);
    let constant = if holds_at(&rows, 1.0) {
        1.0
    } else {
        let mut hi = 2.0;
        while !holds_at(&rows, hi) {
            hi *= 2.0;
            if hi > 1e6 {
                return Ok(BestConstant {
                    constant: f64::INFINITY,
                    raw,
                    pairs: rows.len(),
                    rows,
                });
            }
        }
        let mut lo = 1.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if holds_at(&rows, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(BestConstant {
        constant,
        raw,
        pairs: rows.len(),
        rows,
    })
}

/// Least `c >= 1` such that the upper bound `2 log(1 + c |a-b| / sqrt(d_a d_b))`
/// covers `h` (up to its error estimate) on the probe pairs at scale `depth`.
pub fn estimate_best_constant(domain: &DomainSpec, zeta: &Point, depth: f64) -> Result<f64> {
    Ok(estimate_best_constant_detailed(domain, zeta, depth)?.constant)
}

/// `int omega*(d_D) / d_D |d gamma|` along a polyline.
pub fn correction_integral(
    domain: &DomainSpec,
    curve: &Curve,
    omega: &ModulusOfContinuity,
) -> Result<f64> {
    let mut total = 0.0;
    for w in curve.points().windows(2) {
        let (p, q) = (w[0], w[1]);
        let len = p.dist(&q);
        if len == 0.0 {
            continue;
        }
        let failure = std::cell::RefCell::new(None::<Error>);
        let f = |t: f64| {
            let d = domain.depth(&p.lerp(&q, t));
            if !(d > 0.0) {
                failure
                    .borrow_mut()
                    .get_or_insert(Error::CurveTouchesBoundary(d));
                return 0.0;
            }
            match omega_star(omega, d) {
                Ok(v) => len * v / d,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let v = quad::gauss_legendre_composite(&f, 0.0, 1.0, 2);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        total += v;
    }
    Ok(total)
}

/// One geodesic of the correction ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionSample {
    pub k: usize,
    /// Euclidean length of the geodesic.
    pub length: f64,
    pub integral: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionReport {
    pub samples: Vec<CorrectionSample>,
    /// Least-squares slope of `log integral` against `log length`.
    pub exponent: f64,
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_power_exponent(xy: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = xy
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Correction integral along the geodesics of every rung of a ladder, with the
/// fitted decay exponent in the geodesic length.
pub fn run_correction_ladder(
    spec: &SequenceSpec,
    omega: &ModulusOfContinuity,
) -> Result<CorrectionReport> {
    spec.validate()?;
    let samples = (0..=spec.levels)
        .into_par_iter()
        .map(|k| {
            let t = spec.scale(k);
            let (a, b) = spec.pair(k)?;
            let r = qh_distance(&spec.domain, &a, &b, &spec.grid(t))?;
            Ok(CorrectionSample {
                k,
                length: r.geodesic.euclidean_length(),
                integral: correction_integral(&spec.domain, &r.geodesic, omega)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = samples.iter().map(|s| (s.length, s.integral)).collect();
    Ok(CorrectionReport {
        exponent: fit_power_exponent(&xy),
        samples,
    })
}

/// Convergence verdicts of one modulus family against the expected ones.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusCheck {
    pub name: &'static str,
    pub dini: ModulusIntegral,
    /// Not evaluated when the Dini integral diverges.
    pub log_dini: Option<ModulusIntegral>,
    pub expect_dini: bool,
    pub expect_log_dini: Option<bool>,
    /// Closed-form Dini integral, when convergent.
    pub expect_value: Option<f64>,
}

impl ModulusCheck {
    pub fn passes(&self) -> bool {
        let dini_ok = self.dini.value.is_convergent() == self.expect_dini;
        let log_ok = match (&self.log_dini, self.expect_log_dini) {
            (Some(l), Some(e)) => l.value.is_convergent() == e,
            (None, None) => true,
            _ => false,
        };
        let value_ok = match (self.expect_value, self.dini.value.value()) {
            (Some(want), Some(got)) => (want - got).abs() <= 1e-4,
            (None, _) => true,
            _ => false,
        };
        dini_ok && log_ok && value_ok
    }
}

/// Dini and log-Dini verdicts for `t^0.5`, `1/log(e/t)` and `1/log(e/t)^2`.
pub fn modulus_matrix() -> Vec<ModulusCheck> {
    let cases = [
        (
            "t^0.5",
            ModulusOfContinuity::power(1.0, 0.5),
            true,
            Some(true),
            Some(2.0),
        ),
        (
            "1/log(e/t)",
            ModulusOfContinuity::log_power(1.0, 1.0),
            false,
            None,
            None,
        ),
        (
            "1/log(e/t)^2",
            ModulusOfContinuity::log_power(1.0, 2.0),
            true,
            Some(false),
            Some(1.0),
        ),
    ];
    cases
        .into_iter()
        .map(|(name, w, ed, el, ev)| {
            let dini = dini_integral(&w, 1e-9);
            let log_dini = dini
                .value
                .is_convergent()
                .then(|| log_dini_integral(&w, 1e-9));
            ModulusCheck {
                name,
                dini,
                log_dini,
                expect_dini: ed,
                expect_log_dini: el,
                expect_value: ev,
            }
        })
        .collect()
}

impl FromStr for SequenceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SequenceMode::parse(s, 1.0)
    }
}
