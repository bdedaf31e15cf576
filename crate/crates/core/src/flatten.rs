//! Flattening maps between a graph domain and the half-space, and checks of
//! their metric distortion.

use crate::error::{Error, Result};
use crate::geom::{reach_estimate, BoundaryCurve, DomainSpec, GraphDomain, Point};
use crate::metric::{halfspace_distance, PairData};
use crate::quad;
use crate::solver::{qh_distance, Curve, GridSpec};

/// Square matrix stored by columns, `dim <= 3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jacobian {
    pub cols: [[f64; 3]; 3],
    pub dim: usize,
}

impl Jacobian {
    fn from_cols(cols: &[Point]) -> Self {
        let dim = cols.len();
        let mut m = [[0.0; 3]; 3];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..dim {
                m[j][i] = c[i];
            }
        }
        Jacobian { cols: m, dim }
    }

    pub fn apply(&self, v: &Point) -> Point {
        let mut out = Point::zeros(self.dim);
        for i in 0..self.dim {
            let s: f64 = (0..self.dim).map(|j| self.cols[j][i] * v[j]).sum();
            out = out.with(i, s);
        }
        out
    }

    /// Singular values, ascending.
    pub fn singular_values(&self) -> Vec<f64> {
        let n = self.dim;
        let mut g = [[0.0; 3]; 3];
        for (i, row) in g.iter_mut().enumerate().take(n) {
            for (j, v) in row.iter_mut().enumerate().take(n) {
                *v = (0..n).map(|k| self.cols[i][k] * self.cols[j][k]).sum();
            }
        }
        let mut ev = match n {
            1 => vec![g[0][0]],
            2 => sym2_eigen(g[0][0], g[0][1], g[1][1]).to_vec(),
            _ => sym3_eigen(&g).to_vec(),
        };
        ev.sort_by(f64::total_cmp);
        ev.into_iter().map(|e| e.max(0.0).sqrt()).collect()
    }
}

fn sym2_eigen(a: f64, b: f64, c: f64) -> [f64; 2] {
    let m = 0.5 * (a + c);
    let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    [m - r, m + r]
}

/// Eigenvalues of a symmetric 3x3 matrix by the trigonometric method.
fn sym3_eigen(a: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if p1 <= 1e-300 {
        return [a[0][0], a[1][1], a[2][2]];
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let phi = (0.5 * det).clamp(-1.0, 1.0).acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [e3, 3.0 * q - e1 - e3, e1]
}

fn check_dim(expected: usize, p: &Point) -> Result<()> {
    if p.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: p.dim(),
        });
    }
    Ok(())
}

/// `xbar -> (f(x), x) + x_0 n_x` on a graph domain, with its reach cached.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFlattening {
    pub domain: GraphDomain,
    pub reach: f64,
}

impl NormalFlattening {
    /// Estimates the reach of the boundary over the window.
    pub fn new(domain: GraphDomain) -> Result<Self> {
        let reach = reach_estimate(&DomainSpec::Graph(domain.clone()), &domain.window)?;
        Ok(NormalFlattening { domain, reach })
    }

    pub fn with_reach(domain: GraphDomain, reach: f64) -> Self {
        NormalFlattening { domain, reach }
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn check(&self, xbar: &Point) -> Result<()> {
        check_dim(self.dim(), xbar)?;
        let w = &self.domain.window;
        if !(xbar.x0() >= 0.0)
            || (1..xbar.dim()).any(|i| !(xbar[i] >= w.min[i] && xbar[i] <= w.max[i]))
        {
            return Err(Error::PointOutsideDomain(format!(
                "{xbar} (flattening chart)"
            )));
        }
        if xbar.x0() >= self.reach {
            return Err(Error::ExceedsReach {
                depth: xbar.x0(),
                reach: self.reach,
            });
        }
        Ok(())
    }

    pub fn apply(&self, xbar: &Point) -> Result<Point> {
        self.check(xbar)?;
        let x = xbar.tangential();
        Ok(self.domain.boundary_point(x) + self.domain.inward_normal(x) * xbar.x0())
    }

    /// Closed-form differential: `e_0 -> n_x`, `e_j -> e~_j + x_0 dn/dx_j`.
    pub fn jacobian(&self, xbar: &Point) -> Result<Jacobian> {
        self.check(xbar)?;
        let dim = self.dim();
        let m = dim - 1;
        let x = xbar.tangential();
        let g = self.domain.grad(x);
        let hs = self.domain.hessian(x);
        let w = (1.0 + (0..m).map(|k| g[k] * g[k]).sum::<f64>()).sqrt();
        let n = self.domain.inward_normal(x);
        let mut cols = vec![n];
        for j in 0..m {
            let gh: f64 = (0..m).map(|k| g[k] * hs[k][j]).sum();
            let mut col = Point::zeros(dim);
            // tangent e~_j = g_j e_0 + e_j
            col = col.with(0, g[j]).with(j + 1, 1.0);
            // dn/dx_j = (0, -H e_j)/w - (1, -g) (g.H e_j)/w^3
            let mut dn = Point::zeros(dim).with(0, -gh / w.powi(3));
            for k in 0..m {
                dn = dn.with(k + 1, -hs[k][j] / w + g[k] * gh / w.powi(3));
            }
            cols.push(col + dn * xbar.x0());
        }
        Ok(Jacobian::from_cols(&cols))
    }
}

/// Normal flattening of a single point; estimates the reach on every call.
pub fn normal_flatten(domain: &GraphDomain, xbar: &Point) -> Result<Point> {
    NormalFlattening::new(domain.clone())?.apply(xbar)
}

/// `x -> (x_0 - f(x'), x')`.
pub fn planar_flatten(domain: &GraphDomain, x: &Point) -> Result<Point> {
    check_dim(domain.dim(), x)?;
    Ok(x.with(0, x.x0() - domain.f(x.tangential())))
}

/// Arc-length chart adapted to a pair: `(x_0, x_1) -> sigma(x_1) + x_0 n`, where
/// `sigma` walks the boundary by arc length from the foot of `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcLengthFlattening {
    pub curve: BoundaryCurve,
    pub a: Point,
    pub b: Point,
    /// Boundary parameters of the feet of `a` and `b`.
    pub foot_a: f64,
    pub foot_b: f64,
    pub d_a: f64,
    pub d_b: f64,
    /// Signed boundary arc length from the foot of `a` to the foot of `b`.
    pub ell: f64,
}

impl ArcLengthFlattening {
    pub fn new(domain: &DomainSpec, a: &Point, b: &Point) -> Result<Self> {
        let curve = domain.boundary_curve()?;
        let mut feet = [0.0; 2];
        let mut depths = [0.0; 2];
        for (k, p) in [a, b].into_iter().enumerate() {
            check_dim(2, p)?;
            if !domain.contains(p) {
                return Err(Error::PointOutsideDomain(p.to_string()));
            }
            let pr = curve
                .project([p[0], p[1]])
                .ok_or_else(|| Error::ProjectionNotConverged(p.to_string()))?;
            if !pr.unique {
                return Err(Error::FeetNotUnique);
            }
            feet[k] = pr.param;
            depths[k] = pr.dist;
        }
        let mut fb = feet[1];
        if curve.periodic() {
            // take the shorter way round
            let (lo, hi) = curve.range();
            let per = hi - lo;
            while fb - feet[0] > 0.5 * per {
                fb -= per;
            }
            while fb - feet[0] < -0.5 * per {
                fb += per;
            }
        }
        let ell = curve.arc_length(feet[0], fb);
        Ok(ArcLengthFlattening {
            curve,
            a: *a,
            b: *b,
            foot_a: feet[0],
            foot_b: fb,
            d_a: depths[0],
            d_b: depths[1],
            ell,
        })
    }

    pub fn alpha(&self) -> Point {
        Point::new2(self.d_a, 0.0)
    }

    pub fn beta(&self) -> Point {
        Point::new2(self.d_b, self.ell)
    }

    pub fn apply(&self, xbar: &Point) -> Result<Point> {
        check_dim(2, xbar)?;
        if !(xbar.x0() >= 0.0) {
            return Err(Error::PointOutsideDomain(format!(
                "{xbar} (flattening chart)"
            )));
        }
        let s = self.curve.walk(self.foot_a, xbar[1]);
        let p = self.curve.point(s);
        let n = self.curve.inward_normal(s);
        Ok(Point::new2(
            p[0] + xbar.x0() * n[0],
            p[1] + xbar.x0() * n[1],
        ))
    }
}

/// One-shot arc-length flattening of `xbar` for the pair `a`, `b`.
pub fn sigma_flatten(domain: &DomainSpec, a: &Point, b: &Point, xbar: &Point) -> Result<Point> {
    ArcLengthFlattening::new(domain, a, b)?.apply(xbar)
}

/// A flattening map whose differential can be checked.
#[derive(Clone, Debug, PartialEq)]
pub enum Flattening {
    Normal(NormalFlattening),
    Planar(GraphDomain),
    Sigma(ArcLengthFlattening),
}

/// Which distortion bounds apply to a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundChecks {
    pub lower: bool,
    pub upper: bool,
}

impl Flattening {
    pub fn apply(&self, x: &Point) -> Result<Point> {
        match self {
            Flattening::Normal(m) => m.apply(x),
            Flattening::Planar(g) => planar_flatten(g, x),
            Flattening::Sigma(m) => m.apply(x),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Flattening::Normal(m) => m.dim(),
            Flattening::Planar(g) => g.dim(),
            Flattening::Sigma(_) => 2,
        }
    }

    /// The normal chart only satisfies the lower bound: its tangential columns
    /// have length `sqrt(1 + |grad f|^2)` at `x_0 = 0`.
    pub fn checks(&self) -> BoundChecks {
        match self {
            Flattening::Normal(_) => BoundChecks {
                lower: true,
                upper: false,
            },
            Flattening::Planar(_) => BoundChecks {
                lower: false,
                upper: false,
            },
            Flattening::Sigma(_) => BoundChecks {
                lower: true,
                upper: true,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Flattening::Normal(_) => "normal",
            Flattening::Planar(_) => "planar",
            Flattening::Sigma(_) => "sigma",
        }
    }

    /// Height above the boundary in the map's own coordinates.
    fn height(&self, x: &Point) -> f64 {
        match self {
            Flattening::Planar(g) => x.x0() - g.f(x.tangential()),
            _ => x.x0(),
        }
    }
}

/// Singular values of a flattening differential against `1 -+ C x_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianBoundReport {
    pub point: Point,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub predicted_lower: f64,
    pub predicted_upper: f64,
    pub c_used: f64,
    pub checks: BoundChecks,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl JacobianBoundReport {
    /// True when every applicable bound holds.
    pub fn passes(&self) -> bool {
        (!self.checks.lower || self.lower_ok) && (!self.checks.upper || self.upper_ok)
    }
}

/// Slack allowed on both bounds.
pub const JACOBIAN_TOL: f64 = 1e-4;

/// Central finite-difference differential of `map` at `point` (step
/// `min(1e-5, x_0 / 10)`) compared with `1 - C x_0` and `1 + C x_0`.
pub fn jacobian_bounds(map: &Flattening, point: &Point, c: f64) -> Result<JacobianBoundReport> {
    check_dim(map.dim(), point)?;
    let x0 = map.height(point);
    if !(x0 >= 1e-4) {
        return Err(Error::StepUnderflow(x0));
    }
    let step = (1e-5f64).min(x0 / 10.0);
    let mut cols = Vec::with_capacity(point.dim());
    for k in 0..point.dim() {
        let fp = map.apply(&point.with(k, point[k] + step))?;
        let fm = map.apply(&point.with(k, point[k] - step))?;
        cols.push((fp - fm) * (0.5 / step));
    }
    let sv = Jacobian::from_cols(&cols).singular_values();
    let sigma_min = sv[0];
    let sigma_max = *sv.last().unwrap();
    let predicted_lower = 1.0 - c * x0;
    let predicted_upper = 1.0 + c * x0;
    Ok(JacobianBoundReport {
        point: *point,
        sigma_min,
        sigma_max,
        predicted_lower,
        predicted_upper,
        c_used: c,
        checks: map.checks(),
        lower_ok: sigma_min >= predicted_lower - JACOBIAN_TOL,
        upper_ok: sigma_max <= predicted_upper + JACOBIAN_TOL,
    })
}

/// Aggregate of `jacobian_bounds` over many points.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub map: &'static str,
    pub c: f64,
    pub checks: BoundChecks,
    pub points: usize,
    pub failures: usize,
    /// `min(sigma_min - (1 - C x_0))` over the sweep.
    pub lower_slack: f64,
    /// `min((1 + C x_0) - sigma_max)` over the sweep.
    pub upper_slack: f64,
    /// Report with the smallest applicable slack.
    pub worst: Option<JacobianBoundReport>,
}

impl SweepSummary {
    pub fn passes(&self) -> bool {
        self.failures == 0
    }
}

/// Runs `jacobian_bounds` at every point.
pub fn jacobian_sweep(map: &Flattening, points: &[Point], c: f64) -> Result<SweepSummary> {
    let mut out = SweepSummary {
        map: map.name(),
        c,
        checks: map.checks(),
        points: 0,
        failures: 0,
        lower_slack: f64::INFINITY,
        upper_slack: f64::INFINITY,
        worst: None,
    };
    let checks = out.checks;
    let mut worst_slack = f64::INFINITY;
    for p in points {
        let r = jacobian_bounds(map, p, c)?;
        let lo = r.sigma_min - r.predicted_lower;
        let hi = r.predicted_upper - r.sigma_max;
        out.lower_slack = out.lower_slack.min(lo);
        out.upper_slack = out.upper_slack.min(hi);
        let slack = match (checks.lower, checks.upper) {
            (true, true) => lo.min(hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => f64::INFINITY,
        };
        out.points += 1;
        if !r.passes() {
            out.failures += 1;
        }
        if slack < worst_slack || out.worst.is_none() {
            worst_slack = slack;
            out.worst = Some(r);
        }
    }
    Ok(out)
}

/// `n0 x n1` chart points with heights in `x0` and tangential coordinate in
/// `x1`. Points with `|x_1| < axis_gap` are pushed out to `+-axis_gap`.
pub fn chart_grid(
    n0: usize,
    n1: usize,
    x0: (f64, f64),
    x1: (f64, f64),
    axis_gap: f64,
) -> Vec<Point> {
    let lin = |n: usize, (lo, hi): (f64, f64), i: usize| {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let mut pts = Vec::with_capacity(n0 * n1);
    for i in 0..n0 {
        for j in 0..n1 {
            let mut y = lin(n1, x1, j);
            if y.abs() < axis_gap {
                y = if y < 0.0 { -axis_gap } else { axis_gap };
            }
            pts.push(Point::new2(lin(n0, x0, i), y));
        }
    }
    pts
}

/// The standard 10^3-point sweeps of a graph domain: the normal chart (lower
/// bound) and, for planar domains, the arc-length chart of a pair above
/// `x_1 = -0.2` and `x_1 = 0.2` (both bounds). Heights run up to
/// `min(0.2, 0.4 / C)`, tangential coordinates over the middle half of the
/// window, staying `1e-3` off the axis where the C^{1,1} family is not twice
/// differentiable.
pub fn standard_jacobian_sweeps(domain: &GraphDomain, c: f64) -> Result<Vec<SweepSummary>> {
    let x0_max = if c > 0.0 { (0.4 / c).min(0.2) } else { 0.2 };
    let hw = 0.5 * (domain.window.max[1] - domain.window.min[1]).min(2.0);
    let normal = Flattening::Normal(NormalFlattening::new(domain.clone())?);
    let mut out = Vec::new();
    if domain.dim() == 2 {
        let pts = chart_grid(40, 25, (1e-3, x0_max), (-0.5 * hw, 0.5 * hw), 1e-3);
        out.push(jacobian_sweep(&normal, &pts, c)?);
        let dspec = DomainSpec::Graph(domain.clone());
        let frame = |x1: f64| -> Point {
            let n = domain.inward_normal(&[x1]);
            domain.boundary_point(&[x1]) + n * 0.05
        };
        let sigma = Flattening::Sigma(ArcLengthFlattening::new(&dspec, &frame(-0.2), &frame(0.2))?);
        out.push(jacobian_sweep(&sigma, &pts, c)?);
    } else {
        let mut pts = Vec::with_capacity(1000);
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    let x0 = 1e-3 + (x0_max - 1e-3) * i as f64 / 9.0;
                    let y = -0.5 * hw + hw * j as f64 / 9.0;
                    let z = -0.5 * hw + hw * k as f64 / 9.0;
                    pts.push(Point::new3(x0, y, z));
                }
            }
        }
        out.push(jacobian_sweep(&normal, &pts, c)?);
    }
    Ok(out)
}

/// Weight along the curve in `curve_pushforward_check`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushforwardWeight {
    One,
    /// `1 / d_D`, with `d_D = x_0` in chart coordinates.
    InverseDepth,
}

impl PushforwardWeight {
    fn eval(&self, x0: f64) -> f64 {
        match self {
            PushforwardWeight::One => 1.0,
            PushforwardWeight::InverseDepth => 1.0 / x0,
        }
    }
}

/// `int F |d(phi o gamma)| - (int F |d gamma| - C int F d_D |d gamma|)` for a
/// polyline `gamma` in chart coordinates. Nonnegative when `C` bounds the
/// distortion of `phi`.
pub fn curve_pushforward_check(
    map: &NormalFlattening,
    curve: &Curve,
    weight: PushforwardWeight,
    c: f64,
) -> Result<f64> {
    for p in curve.points() {
        if !(p.x0() > 1e-9) {
            return Err(Error::CurveTouchesBoundary(p.x0()));
        }
        map.check(p)?;
    }
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for w in curve.points().windows(2) {
        let (p, q) = (w[0], w[1]);
        let v = q - p;
        let len = v.norm();
        if len == 0.0 {
            continue;
        }
        // the chart checks are convex, so valid endpoints make the segment valid
        let pushed = |t: f64| {
            let x = p.lerp(&q, t);
            map.jacobian(&x)
                .map_or(f64::NAN, |j| weight.eval(x.x0()) * j.apply(&v).norm())
        };
        let tol = 1e-13 * len / p.x0().min(q.x0());
        lhs += quad::adaptive_gauss(&pushed, 0.0, 1.0, tol);
        let plain = |t: f64| {
            let x0 = p.x0() + t * v[0];
            weight.eval(x0) * len * (1.0 - c * x0)
        };
        rhs += quad::adaptive_gauss(&plain, 0.0, 1.0, tol);
    }
    Ok(lhs - rhs)
}

/// Ratio of the normalized separations of a pair and its chart preimage:
/// `(|a - b| / 2 sqrt(d_a d_b)) / (|alpha - beta| / 2 sqrt(d_alpha d_beta))`.
pub fn asymptotic_ratio(pair: &PairData, chart_pair: &PairData) -> f64 {
    pair.normalized_sep() / chart_pair.normalized_sep()
}

/// Domain distance against the half-space distance of the chart preimages.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferSample {
    pub alpha: Point,
    pub beta: Point,
    pub a: Point,
    pub b: Point,
    pub h_domain: f64,
    pub h_halfspace: f64,
    pub error_estimate: f64,
    pub chart_sep: f64,
    pub ratio: f64,
}

impl TransferSample {
    /// Smallest `C'` with `|h_D - h_H| <= C' |alpha - beta| + 3 err` for this sample.
    pub fn constant(&self) -> f64 {
        (((self.h_domain - self.h_halfspace).abs() - 3.0 * self.error_estimate) / self.chart_sep)
            .max(0.0)
    }
}

/// Maps `alpha`, `beta` into the domain and compares the two distances.
pub fn transfer_sample(
    map: &NormalFlattening,
    alpha: &Point,
    beta: &Point,
    grid: &GridSpec,
) -> Result<TransferSample> {
    let a = map.apply(alpha)?;
    let b = map.apply(beta)?;
    let domain = DomainSpec::Graph(map.domain.clone());
    let r = qh_distance(&domain, &a, &b, grid)?;
    let h_half = halfspace_distance(alpha, beta)?;
    let pair = PairData::in_domain(&domain, a, b)?;
    let chart = PairData::new(*alpha, *beta, alpha.x0(), beta.x0())?;
    Ok(TransferSample {
        alpha: *alpha,
        beta: *beta,
        a,
        b,
        h_domain: r.value,
        h_halfspace: h_half,
        error_estimate: r.error_estimate,
        chart_sep: alpha.dist(beta),
        ratio: asymptotic_ratio(&pair, &chart),
    })
}

/// Empirical `C'`: the largest per-sample constant.
pub fn fit_transfer_constant(samples: &[TransferSample]) -> f64 {
    samples.iter().map(|s| s.constant()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{boundary_contact, GraphFamily};

    fn parab(kappa: f64) -> GraphDomain {
        GraphDomain::planar(GraphFamily::Paraboloid { kappa }, 1.0)
    }

    #[test]
    fn normal_flatten_examples() {
        let g = parab(1.0);
        let m = NormalFlattening::new(g.clone()).unwrap();
        assert!((m.reach - 1.0).abs() < 0.02, "{}", m.reach);
        let p = m.apply(&Point::new2(0.3, 0.0)).unwrap();
        assert!(p.dist(&Point::new2(0.3, 0.0)) < 1e-15);
        let p = m.apply(&Point::new2(0.1, 0.5)).unwrap();
        let r = 1.25f64.sqrt();
        let want = Point::new2(0.125 + 0.1 / r, 0.5 - 0.05 / r);
        assert!(p.dist(&want) < 1e-12);
        assert!((want[0] - 0.214443).abs() < 1e-6 && (want[1] - 0.455279).abs() < 1e-6);
        let c = boundary_contact(&DomainSpec::Graph(g), &p).unwrap();
        assert!((c.distance - 0.1).abs() < 1e-8);
        assert!(c.foot.dist(&Point::new2(0.125, 0.5)) < 1e-8);

        let flat = NormalFlattening::new(parab(0.0)).unwrap();
        let x = Point::new2(0.7, -0.2);
        assert_eq!(flat.apply(&x).unwrap(), x);
        assert!(matches!(
            m.apply(&Point::new2(1.5, 0.0)),
            Err(Error::ExceedsReach { .. })
        ));
    }

    #[test]
    fn planar_flatten_examples() {
        let g = parab(1.0);
        let p = planar_flatten(&g, &Point::new2(0.5, 0.4)).unwrap();
        assert!(p.dist(&Point::new2(0.42, 0.4)) < 1e-15);
        let x = Point::new2(0.5, 0.4);
        assert_eq!(planar_flatten(&parab(0.0), &x).unwrap(), x);
    }

    #[test]
    fn singular_values_small_matrices() {
        let j = Jacobian::from_cols(&[Point::new2(1.0, 0.0), Point::new2(-0.1, 1.0)]);
        let sv = j.singular_values();
        let want = (0.5 * (2.01 + (2.01f64 * 2.01 - 4.0).sqrt())).sqrt();
        assert!((sv[1] - want).abs() < 1e-14);
        assert!((sv[0] * sv[1] - 1.0).abs() < 1e-14);
        let j = Jacobian::from_cols(&[
            Point::new3(2.0, 0.0, 0.0),
            Point::new3(0.0, 0.0, 3.0),
            Point::new3(0.0, -1.0, 0.0),
        ]);
        let sv = j.singular_values();
        for (s, w) in sv.iter().zip([1.0, 2.0, 3.0]) {
            assert!((s - w).abs() < 1e-12);
        }
        let j = Jacobian::from_cols(&[
            Point::new3(1.0, 1.0, 0.0),
            Point::new3(0.0, 1.0, 1.0),
            Point::new3(1.0, 0.0, 1.0),
        ]);
        // circulant matrix: singular values 1, 1, 2
        let sv = j.singular_values();
        for (s, w) in sv.iter().zip([1.0, 1.0, 2.0]) {
            assert!((s - w).abs() < 1e-12, "{sv:?}");
        }
    }

    #[test]
    fn jacobian_at_vertex() {
        let m = Flattening::Normal(NormalFlattening::new(parab(1.0)).unwrap());
        let r = jacobian_bounds(&m, &Point::new2(0.1, 0.0), 1.0).unwrap();
        assert!((r.sigma_min - 0.9).abs() < 1e-4);
        assert!((r.sigma_max - 1.0).abs() < 1e-4);
        assert!(r.passes());
        assert!(matches!(
            jacobian_bounds(&m, &Point::new2(5e-5, 0.0), 1.0),
            Err(Error::StepUnderflow(_))
        ));
        let flat = Flattening::Normal(NormalFlattening::new(parab(0.0)).unwrap());
        let r = jacobian_bounds(&flat, &Point::new2(0.3, 0.2), 0.0).unwrap();
        assert!((r.sigma_min - 1.0).abs() < 1e-9 && (r.sigma_max - 1.0).abs() < 1e-9);
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        for fam in [
            GraphFamily::Paraboloid { kappa: 1.5 },
            GraphFamily::CosineBump {
                amplitude: 0.1,
                frequency: 2.0,
            },
            GraphFamily::C11 { kappa: 1.0 },
        ] {
            let m = NormalFlattening::new(GraphDomain::planar(fam, 1.0)).unwrap();
            let x = Point::new2(0.07, 0.31);
            let j = m.jacobian(&x).unwrap();
            let h = 1e-6;
            for k in 0..2 {
                let fd = (m.apply(&x.with(k, x[k] + h)).unwrap()
                    - m.apply(&x.with(k, x[k] - h)).unwrap())
                    * (0.5 / h);
                let col = j.apply(&Point::basis(2, k));
                assert!(fd.dist(&col) < 1e-7, "{fam:?} {k}");
            }
        }
        let g3 = GraphDomain::new(
            GraphFamily::Paraboloid { kappa: 1.0 },
            crate::geom::Aabb::new(Point::new3(-1.0, -1.0, -1.0), Point::new3(1.0, 1.0, 1.0)),
        )
        .unwrap();
        let m = NormalFlattening::with_reach(g3, 1.0);
        let x = Point::new3(0.1, 0.2, -0.3);
        let j = m.jacobian(&x).unwrap();
        for k in 0..3 {
            let h = 1e-6;
            let fd = (m.apply(&x.with(k, x[k] + h)).unwrap()
                - m.apply(&x.with(k, x[k] - h)).unwrap())
                * (0.5 / h);
            assert!(fd.dist(&j.apply(&Point::basis(3, k))) < 1e-7);
        }
    }

    #[test]
    fn sigma_flatten_round_trip() {
        let d = DomainSpec::Graph(parab(1.0));
        let a = Point::new2(0.2, 0.0);
        let b = Point::new2(0.22, 0.1);
        let m = ArcLengthFlattening::new(&d, &a, &b).unwrap();
        assert!(m.apply(&m.alpha()).unwrap().dist(&a) < 1e-8);
        assert!(m.apply(&m.beta()).unwrap().dist(&b) < 1e-8);
        let speed = |s: f64| (1.0 + s * s).sqrt();
        let ell = quad::adaptive_gauss(&speed, m.foot_a, m.foot_b, 1e-14);
        assert!((m.ell - ell).abs() < 1e-8);

        let h = DomainSpec::half_plane();
        let a = Point::new2(0.3, 1.0);
        let b = Point::new2(0.5, 1.4);
        let m = ArcLengthFlattening::new(&h, &a, &b).unwrap();
        assert!(m.apply(&m.alpha()).unwrap().dist(&a) < 1e-15);
        assert!(m.apply(&m.beta()).unwrap().dist(&b) < 1e-15);

        let disc = DomainSpec::unit_disc();
        assert!(matches!(
            ArcLengthFlattening::new(&disc, &Point::new2(0.0, 0.0), &Point::new2(0.5, 0.0)),
            Err(Error::FeetNotUnique)
        ));
    }

    #[test]
    fn sigma_chart_satisfies_both_bounds() {
        let d = DomainSpec::Graph(parab(2.0));
        let m = Flattening::Sigma(
            ArcLengthFlattening::new(&d, &Point::new2(0.05, -0.1), &Point::new2(0.1, 0.2)).unwrap(),
        );
        for &(x0, x1) in &[(0.01, 0.0), (0.1, 0.2), (0.2, -0.3)] {
            let r = jacobian_bounds(&m, &Point::new2(x0, x1), 2.0).unwrap();
            assert!(r.passes(), "{r:?}");
            assert!((r.sigma_max - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn pushforward_examples() {
        let m = NormalFlattening::new(parab(1.0)).unwrap();
        let seg = Curve::new(vec![Point::new2(0.1, -0.3), Point::new2(0.1, 0.3)]).unwrap();
        let margin = curve_pushforward_check(&m, &seg, PushforwardWeight::One, 1.0).unwrap();
        assert!(margin >= -1e-6, "{margin}");
        let without = curve_pushforward_check(&m, &seg, PushforwardWeight::One, 0.0).unwrap();
        assert!(without < margin);

        let flat = NormalFlattening::new(parab(0.0)).unwrap();
        let c = Curve::new(vec![Point::new2(0.2, 0.0), Point::new2(0.4, 0.3)]).unwrap();
        let len = c.euclidean_length();
        let margin = curve_pushforward_check(&flat, &c, PushforwardWeight::One, 0.5).unwrap();
        // identity: margin = C int x_0 |dgamma| = 0.5 * len * mean height
        assert!((margin - 0.5 * len * 0.3).abs() < 1e-12);
        let margin =
            curve_pushforward_check(&flat, &c, PushforwardWeight::InverseDepth, 0.5).unwrap();
        assert!((margin - 0.5 * len).abs() < 1e-12);
    }
}
