//! Test domains and their boundary geometry.

use std::f64::consts::PI;

use super::point::{Aabb, Point};
use crate::error::{Error, Result};
use crate::quad;

/// Boundary profile `x_0 = f(x)` of a graph domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphFamily {
    /// `f(x) = kappa |x|^2 / 2`, in 2-D or 3-D.
    Paraboloid { kappa: f64 },
    /// `f(x) = amplitude (1 - cos(frequency x))`, 2-D only.
    CosineBump { amplitude: f64, frequency: f64 },
    /// `f(x) = kappa x |x| / 2`: gradient is Lipschitz, second derivative jumps at 0. 2-D only.
    C11 { kappa: f64 },
}

impl GraphFamily {
    /// Profile value, slope and second derivative at the scalar argument `r`.
    #[inline]
    pub fn profile(&self, r: f64) -> (f64, f64, f64) {
        match *self {
            GraphFamily::Paraboloid { kappa } => (0.5 * kappa * r * r, kappa * r, kappa),
            GraphFamily::CosineBump {
                amplitude,
                frequency,
            } => {
                let (s, c) = (frequency * r).sin_cos();
                (
                    amplitude * (1.0 - c),
                    amplitude * frequency * s,
                    amplitude * frequency * frequency * c,
                )
            }
            GraphFamily::C11 { kappa } => (
                0.5 * kappa * r * r.abs(),
                kappa * r.abs(),
                kappa * r.signum() * if r == 0.0 { 0.0 } else { 1.0 },
            ),
        }
    }

    /// Lipschitz constant `L` of the gradient of `f`.
    pub fn gradient_lipschitz(&self) -> f64 {
        match *self {
            GraphFamily::Paraboloid { kappa } | GraphFamily::C11 { kappa } => kappa.abs(),
            GraphFamily::CosineBump {
                amplitude,
                frequency,
            } => (amplitude * frequency * frequency).abs(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GraphFamily::Paraboloid { .. } => "paraboloid",
            GraphFamily::CosineBump { .. } => "cosine-bump",
            GraphFamily::C11 { .. } => "c11",
        }
    }
}

/// The domain `{ x_0 > f(x) }` examined inside `window`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphDomain {
    pub family: GraphFamily,
    pub window: Aabb,
}

impl GraphDomain {
    pub fn new(family: GraphFamily, window: Aabb) -> Result<Self> {
        let dim = window.dim();
        if dim == 3 && !matches!(family, GraphFamily::Paraboloid { .. }) {
            return Err(Error::Unsupported(format!(
                "{} graph domains are planar only",
                family.name()
            )));
        }
        if window.is_empty() {
            return Err(Error::InvalidArgument("empty window".into()));
        }
        Ok(GraphDomain { family, window })
    }

    /// Planar graph domain with tangential window `[-half_width, half_width]`
    /// and normal window `[-half_width, half_width]`.
    pub fn planar(family: GraphFamily, half_width: f64) -> Self {
        let w = half_width;
        GraphDomain {
            family,
            window: Aabb::new(Point::new2(-w, -w), Point::new2(w, w)),
        }
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn f(&self, x: &[f64]) -> f64 {
        match x.len() {
            1 => self.family.profile(x[0]).0,
            _ => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                self.family.profile(r).0
            }
        }
    }

    /// Gradient of `f` (length `dim - 1`, padded with zero).
    pub fn grad(&self, x: &[f64]) -> [f64; 2] {
        match x.len() {
            1 => [self.family.profile(x[0]).1, 0.0],
            _ => {
                // only the paraboloid is allowed in 3-D
                let k = self.family.profile(0.0).2;
                [k * x[0], k * x[1]]
            }
        }
    }

    /// Hessian of `f`.
    pub fn hessian(&self, x: &[f64]) -> [[f64; 2]; 2] {
        match x.len() {
            1 => [[self.family.profile(x[0]).2, 0.0], [0.0, 0.0]],
            _ => {
                let k = self.family.profile(0.0).2;
                [[k, 0.0], [0.0, k]]
            }
        }
    }

    pub fn gradient_lipschitz(&self) -> f64 {
        self.family.gradient_lipschitz()
    }

    /// `(f(x), x)`.
    pub fn boundary_point(&self, x: &[f64]) -> Point {
        match x.len() {
            1 => Point::new2(self.f(x), x[0]),
            _ => Point::new3(self.f(x), x[0], x[1]),
        }
    }

    /// Inward unit normal at `(f(x), x)`: `(1, -grad f) / sqrt(1 + |grad f|^2)`.
    pub fn inward_normal(&self, x: &[f64]) -> Point {
        let g = self.grad(x);
        match x.len() {
            1 => Point::new2(1.0, -g[0]).normalized(),
            _ => Point::new3(1.0, -g[0], -g[1]).normalized(),
        }
    }

    fn radial_extent(&self) -> f64 {
        let w = &self.window;
        (1..w.dim())
            .map(|i| w.min[i].abs().max(w.max[i].abs()).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Level-set shapes centered at the origin, semi-axis `a` along `x_0`, `b` along `x_1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ImplicitShape {
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `|x_0/a|^p + |x_1/b|^p < 1`, `p >= 2`.
    Superellipse {
        a: f64,
        b: f64,
        p: f64,
    },
}

impl ImplicitShape {
    fn level(&self, p: &Point) -> f64 {
        match *self {
            ImplicitShape::Ellipse { a, b } => (p[0] / a).powi(2) + (p[1] / b).powi(2),
            ImplicitShape::Superellipse { a, b, p: e } => {
                (p[0] / a).abs().powf(e) + (p[1] / b).abs().powf(e)
            }
        }
    }
}

/// Immutable description of a test domain.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    /// `{ x_0 > 0 }` in dimension `dim`.
    HalfSpace {
        dim: usize,
    },
    Ball {
        center: Point,
        radius: f64,
    },
    Graph(GraphDomain),
    Implicit(ImplicitShape),
}

/// Nearest boundary point of an arbitrary point (inside or outside).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub foot: Point,
    /// Inward unit normal at `foot`.
    pub normal: Point,
    pub distance: f64,
    pub unique: bool,
    /// Boundary parameter of the foot for planar curved boundaries.
    pub param: Option<f64>,
}

impl DomainSpec {
    pub fn half_plane() -> Self {
        DomainSpec::HalfSpace { dim: 2 }
    }

    pub fn unit_disc() -> Self {
        DomainSpec::Ball {
            center: Point::new2(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::HalfSpace { dim } => *dim,
            DomainSpec::Ball { center, .. } => center.dim(),
            DomainSpec::Graph(g) => g.dim(),
            DomainSpec::Implicit(_) => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::HalfSpace { dim } if *dim != 2 && *dim != 3 => Err(Error::InvalidArgument(
                format!("half-space dimension {dim} not supported"),
            )),
            DomainSpec::Ball { radius, .. } if !(*radius > 0.0) => Err(Error::InvalidArgument(
                "ball radius must be positive".into(),
            )),
            DomainSpec::Implicit(ImplicitShape::Ellipse { a, b }) if !(*a > 0.0 && *b > 0.0) => {
                Err(Error::InvalidArgument(
                    "ellipse semi-axes must be positive".into(),
                ))
            }
            DomainSpec::Implicit(ImplicitShape::Superellipse { a, b, p })
                if !(*a > 0.0 && *b > 0.0 && *p >= 2.0) =>
            {
                Err(Error::InvalidArgument(
                    "superellipse needs positive semi-axes and exponent >= 2".into(),
                ))
            }
            _ => Ok(()),
        }
    }

    /// Bounding box used for grid construction. Unbounded directions are infinite.
    pub fn bounding_box(&self) -> Aabb {
        let inf = f64::INFINITY;
        match self {
            DomainSpec::HalfSpace { dim } => {
                let mut lo = Point::zeros(*dim);
                let mut hi = Point::zeros(*dim);
                for i in 0..*dim {
                    lo = lo.with(i, if i == 0 { 0.0 } else { -inf });
                    hi = hi.with(i, inf);
                }
                Aabb::new(lo, hi)
            }
            DomainSpec::Ball { center, radius } => Aabb::new(*center, *center).padded(*radius),
            DomainSpec::Graph(g) => g.window,
            DomainSpec::Implicit(s) => {
                let (a, b) = match *s {
                    ImplicitShape::Ellipse { a, b } | ImplicitShape::Superellipse { a, b, .. } => {
                        (a, b)
                    }
                };
                Aabb::new(Point::new2(-a, -b), Point::new2(a, b))
            }
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            DomainSpec::HalfSpace { .. } => p.x0() > 0.0,
            DomainSpec::Ball { center, radius } => p.dist(center) < *radius,
            DomainSpec::Graph(g) => p.x0() > g.f(p.tangential()),
            DomainSpec::Implicit(s) => s.level(p) < 1.0,
        }
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    #[inline]
    pub fn depth(&self, p: &Point) -> f64 {
        match self {
            DomainSpec::HalfSpace { .. } => p.x0(),
            DomainSpec::Ball { center, radius } => radius - p.dist(center),
            _ => match self.project(p) {
                Ok(pr) if self.contains(p) => pr.distance,
                Ok(pr) => -pr.distance,
                Err(_) => f64::NAN,
            },
        }
    }

    /// Nearest point of the boundary (restricted to the window for graph domains).
    pub fn project(&self, p: &Point) -> Result<Projection> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        match self {
            DomainSpec::HalfSpace { .. } => Ok(Projection {
                foot: p.with(0, 0.0),
                normal: Point::basis(p.dim(), 0),
                distance: p.x0().abs(),
                unique: true,
                param: if p.dim() == 2 { Some(p[1]) } else { None },
            }),
            DomainSpec::Ball { center, radius } => {
                let v = *p - *center;
                let r = v.norm();
                if r == 0.0 {
                    let e = Point::basis(p.dim(), 0);
                    return Ok(Projection {
                        foot: *center + e * *radius,
                        normal: -e,
                        distance: *radius,
                        unique: false,
                        param: Some(0.0),
                    });
                }
                let u = v * (1.0 / r);
                Ok(Projection {
                    foot: *center + u * *radius,
                    normal: -u,
                    distance: (radius - r).abs(),
                    unique: true,
                    param: if p.dim() == 2 {
                        Some(v[1].atan2(v[0]))
                    } else {
                        None
                    },
                })
            }
            DomainSpec::Graph(g) if g.dim() == 2 => {
                let curve = BoundaryCurve::Graph {
                    family: g.family,
                    lo: g.window.min[1],
                    hi: g.window.max[1],
                };
                curve
                    .project([p[0], p[1]])
                    .map(|cp| cp.into_projection())
                    .ok_or_else(|| Error::ProjectionNotConverged(p.to_string()))
            }
            DomainSpec::Graph(g) => {
                // Rotationally symmetric paraboloid: solve in the meridian plane.
                let rho = (p[1] * p[1] + p[2] * p[2]).sqrt();
                let big = g.radial_extent();
                let curve = BoundaryCurve::Graph {
                    family: g.family,
                    lo: -big,
                    hi: big,
                };
                let cp = curve
                    .project([p[0], rho])
                    .ok_or_else(|| Error::ProjectionNotConverged(p.to_string()))?;
                let (u1, u2) = if rho > 0.0 {
                    (p[1] / rho, p[2] / rho)
                } else {
                    (1.0, 0.0)
                };
                let s = cp.param;
                let unique = cp.unique && (rho > 0.0 || s.abs() < 1e-12);
                Ok(Projection {
                    foot: Point::new3(cp.foot[0], s * u1, s * u2),
                    normal: Point::new3(cp.normal[0], cp.normal[1] * u1, cp.normal[1] * u2),
                    distance: cp.dist,
                    unique,
                    param: None,
                })
            }
            DomainSpec::Implicit(shape) => {
                let curve = BoundaryCurve::from_shape(*shape);
                curve
                    .project([p[0], p[1]])
                    .map(|cp| cp.into_projection())
                    .ok_or_else(|| Error::ProjectionNotConverged(p.to_string()))
            }
        }
    }

    /// Parametrized boundary of a planar domain.
    pub fn boundary_curve(&self) -> Result<BoundaryCurve> {
        match self {
            DomainSpec::HalfSpace { dim: 2 } => Ok(BoundaryCurve::Line),
            DomainSpec::Ball { center, radius } if center.dim() == 2 => Ok(BoundaryCurve::Circle {
                center: [center[0], center[1]],
                radius: *radius,
            }),
            DomainSpec::Graph(g) if g.dim() == 2 => Ok(BoundaryCurve::Graph {
                family: g.family,
                lo: g.window.min[1],
                hi: g.window.max[1],
            }),
            DomainSpec::Implicit(s) => Ok(BoundaryCurve::from_shape(*s)),
            _ => Err(Error::Unsupported(
                "boundary parametrization is available for planar domains only".into(),
            )),
        }
    }

    /// Largest curvature of the boundary, when known in closed form.
    pub fn curvature_bound(&self) -> Option<f64> {
        match self {
            DomainSpec::HalfSpace { .. } => Some(0.0),
            DomainSpec::Ball { radius, .. } => Some(1.0 / radius),
            DomainSpec::Graph(g) => Some(g.gradient_lipschitz()),
            DomainSpec::Implicit(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            DomainSpec::HalfSpace { dim } => format!("halfspace(dim={dim})"),
            DomainSpec::Ball { center, radius } => format!("ball(center={center};radius={radius})"),
            DomainSpec::Graph(g) => match g.family {
                GraphFamily::Paraboloid { kappa } => {
                    format!("paraboloid(kappa={kappa};dim={})", g.dim())
                }
                GraphFamily::CosineBump {
                    amplitude,
                    frequency,
                } => format!("cosine-bump(amplitude={amplitude};frequency={frequency})"),
                GraphFamily::C11 { kappa } => format!("c11(kappa={kappa})"),
            },
            DomainSpec::Implicit(ImplicitShape::Ellipse { a, b }) => {
                format!("ellipse(a={a};b={b})")
            }
            DomainSpec::Implicit(ImplicitShape::Superellipse { a, b, p }) => {
                format!("superellipse(a={a};b={b};p={p})")
            }
        }
    }
}

/// A planar boundary curve `s -> c(s)` in `(x_0, x_1)` coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryCurve {
    /// `c(s) = (0, s)`.
    Line,
    /// `c(s) = center + r (cos s, sin s)`.
    Circle { center: [f64; 2], radius: f64 },
    /// `c(s) = (f(s), s)` for `s` in `[lo, hi]`.
    Graph {
        family: GraphFamily,
        lo: f64,
        hi: f64,
    },
    /// `c(s) = (a cos s, b sin s)`.
    Ellipse { a: f64, b: f64 },
    /// `c(s) = r(s) (cos s, sin s)` with `r` the polar radius of the level set.
    Superellipse { a: f64, b: f64, p: f64 },
}

/// Result of projecting onto a [`BoundaryCurve`].
#[derive(Clone, Copy, Debug)]
pub struct CurveProjection {
    pub param: f64,
    pub foot: [f64; 2],
    pub normal: [f64; 2],
    pub dist: f64,
    pub unique: bool,
}

impl CurveProjection {
    fn into_projection(self) -> Projection {
        Projection {
            foot: Point::new2(self.foot[0], self.foot[1]),
            normal: Point::new2(self.normal[0], self.normal[1]),
            distance: self.dist,
            unique: self.unique,
            param: Some(self.param),
        }
    }
}

const N_STARTS: usize = 11;

impl BoundaryCurve {
    fn from_shape(s: ImplicitShape) -> Self {
        match s {
            ImplicitShape::Ellipse { a, b } => BoundaryCurve::Ellipse { a, b },
            ImplicitShape::Superellipse { a, b, p } => BoundaryCurve::Superellipse { a, b, p },
        }
    }

    pub fn range(&self) -> (f64, f64) {
        match *self {
            BoundaryCurve::Line => (f64::NEG_INFINITY, f64::INFINITY),
            BoundaryCurve::Graph { lo, hi, .. } => (lo, hi),
            _ => (-PI, PI),
        }
    }

    pub fn periodic(&self) -> bool {
        !matches!(self, BoundaryCurve::Line | BoundaryCurve::Graph { .. })
    }

    fn superellipse_radius(a: f64, b: f64, p: f64, s: f64) -> f64 {
        let (sn, cs) = s.sin_cos();
        ((cs / a).abs().powf(p) + (sn / b).abs().powf(p)).powf(-1.0 / p)
    }

    pub fn point(&self, s: f64) -> [f64; 2] {
        match *self {
            BoundaryCurve::Line => [0.0, s],
            BoundaryCurve::Circle { center, radius } => {
                let (sn, cs) = s.sin_cos();
                [center[0] + radius * cs, center[1] + radius * sn]
            }
            BoundaryCurve::Graph { family, .. } => [family.profile(s).0, s],
            BoundaryCurve::Ellipse { a, b } => {
                let (sn, cs) = s.sin_cos();
                [a * cs, b * sn]
            }
            BoundaryCurve::Superellipse { a, b, p } => {
                let r = Self::superellipse_radius(a, b, p, s);
                let (sn, cs) = s.sin_cos();
                [r * cs, r * sn]
            }
        }
    }

    /// `(c(s), c'(s), c''(s))`.
    #[inline]
    pub fn jet(&self, s: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        match *self {
            BoundaryCurve::Line => ([0.0, s], [0.0, 1.0], [0.0, 0.0]),
            BoundaryCurve::Circle { center, radius } => {
                let (sn, cs) = s.sin_cos();
                (
                    [center[0] + radius * cs, center[1] + radius * sn],
                    [-radius * sn, radius * cs],
                    [-radius * cs, -radius * sn],
                )
            }
            BoundaryCurve::Graph { family, .. } => {
                let (f, df, d2f) = family.profile(s);
                ([f, s], [df, 1.0], [d2f, 0.0])
            }
            BoundaryCurve::Ellipse { a, b } => {
                let (sn, cs) = s.sin_cos();
                ([a * cs, b * sn], [-a * sn, b * cs], [-a * cs, -b * sn])
            }
            BoundaryCurve::Superellipse { .. } => {
                let h = 1e-5;
                let c = self.point(s);
                let cp = self.point(s + h);
                let cm = self.point(s - h);
                (
                    c,
                    [(cp[0] - cm[0]) / (2.0 * h), (cp[1] - cm[1]) / (2.0 * h)],
                    [
                        (cp[0] - 2.0 * c[0] + cm[0]) / (h * h),
                        (cp[1] - 2.0 * c[1] + cm[1]) / (h * h),
                    ],
                )
            }
        }
    }

    /// Unit tangent in the direction of increasing parameter.
    pub fn unit_tangent(&self, s: f64) -> [f64; 2] {
        let (_, d, _) = self.jet(s);
        let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
        [d[0] / n, d[1] / n]
    }

    /// Inward unit normal.
    pub fn inward_normal(&self, s: f64) -> [f64; 2] {
        let t = self.unit_tangent(s);
        match self {
            // x_0 increases into the domain: right-hand normal of (f', 1)
            BoundaryCurve::Line | BoundaryCurve::Graph { .. } => [t[1], -t[0]],
            // counter-clockwise closed curves: left-hand normal
            _ => [-t[1], t[0]],
        }
    }

    /// Speed `|c'(s)|`.
    pub fn speed(&self, s: f64) -> f64 {
        let (_, d, _) = self.jet(s);
        (d[0] * d[0] + d[1] * d[1]).sqrt()
    }

    /// Signed curvature with respect to the inward normal (positive for convex boundaries).
    pub fn curvature(&self, s: f64) -> f64 {
        let (_, d1, d2) = self.jet(s);
        let sp = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
        let n = self.inward_normal(s);
        (d2[0] * n[0] + d2[1] * n[1]) / (sp * sp)
    }

    /// Arc length from `s0` to `s1` (signed).
    pub fn arc_length(&self, s0: f64, s1: f64) -> f64 {
        match *self {
            BoundaryCurve::Line => s1 - s0,
            BoundaryCurve::Circle { radius, .. } => radius * (s1 - s0),
            _ => {
                let f = |s: f64| self.speed(s);
                let panels = (((s1 - s0).abs() / 0.05).ceil() as usize).clamp(1, 4096);
                let mut breaks = Vec::new();
                if matches!(self, BoundaryCurve::Graph { .. })
                    && s0.min(s1) < 0.0
                    && s0.max(s1) > 0.0
                {
                    breaks.push(0.0);
                }
                let (lo, hi, sign) = if s1 >= s0 {
                    (s0, s1, 1.0)
                } else {
                    (s1, s0, -1.0)
                };
                let mut knots = vec![lo];
                knots.extend(breaks);
                knots.push(hi);
                let total: f64 = knots
                    .windows(2)
                    .map(|w| quad::gauss_legendre_composite(&f, w[0], w[1], panels))
                    .sum();
                sign * total
            }
        }
    }

    /// Parameter reached by walking signed arc length `ell` from `s0`.
    pub fn walk(&self, s0: f64, ell: f64) -> f64 {
        match *self {
            BoundaryCurve::Line => s0 + ell,
            BoundaryCurve::Circle { radius, .. } => s0 + ell / radius,
            _ => {
                let mut s = s0 + ell / self.speed(s0);
                for _ in 0..60 {
                    let r = self.arc_length(s0, s) - ell;
                    let step = r / self.speed(s);
                    s -= step;
                    if step.abs() <= 1e-15 * (1.0 + s.abs()) {
                        break;
                    }
                }
                s
            }
        }
    }

    #[inline]
    fn g(&self, q: [f64; 2], s: f64) -> f64 {
        let c = self.point(s);
        let (dx, dy) = (q[0] - c[0], q[1] - c[1]);
        0.5 * (dx * dx + dy * dy)
    }

    #[inline]
    fn fix(&self, s: f64) -> f64 {
        let (lo, hi) = self.range();
        if self.periodic() {
            let w = hi - lo;
            lo + (s - lo).rem_euclid(w)
        } else {
            s.clamp(lo, hi)
        }
    }

    /// Safeguarded Newton descent on `|q - c(s)|^2 / 2` from `s0`.
    fn local_min(&self, q: [f64; 2], s0: f64) -> (f64, f64) {
        let mut s = self.fix(s0);
        let mut g = self.g(q, s);
        for _ in 0..100 {
            let (c, d1, d2) = self.jet(s);
            let r = [q[0] - c[0], q[1] - c[1]];
            let gp = -(r[0] * d1[0] + r[1] * d1[1]);
            if gp == 0.0 {
                break;
            }
            let gn = d1[0] * d1[0] + d1[1] * d1[1];
            let gpp = gn - (r[0] * d2[0] + r[1] * d2[1]);
            let mut step = if gpp > 0.0 { -gp / gpp } else { -gp / gn };
            let mut accepted = None;
            for _ in 0..60 {
                let sn = self.fix(s + step);
                let gn = self.g(q, sn);
                if gn <= g {
                    accepted = Some((sn, gn));
                    break;
                }
                step *= 0.5;
            }
            match accepted {
                Some((sn, gn)) => {
                    let moved = (sn - s).abs();
                    s = sn;
                    g = gn;
                    if moved <= 1e-15 * (1.0 + s.abs()) {
                        break;
                    }
                }
                None => break,
            }
        }
        (s, g)
    }

    /// Global nearest point by multi-start Newton.
    pub fn project(&self, q: [f64; 2]) -> Option<CurveProjection> {
        match *self {
            BoundaryCurve::Line => {
                return Some(CurveProjection {
                    param: q[1],
                    foot: [0.0, q[1]],
                    normal: [1.0, 0.0],
                    dist: q[0].abs(),
                    unique: true,
                })
            }
            BoundaryCurve::Circle { center, radius } => {
                let v = [q[0] - center[0], q[1] - center[1]];
                let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
                let s = if r > 0.0 { v[1].atan2(v[0]) } else { 0.0 };
                return Some(CurveProjection {
                    param: s,
                    foot: self.point(s),
                    normal: self.inward_normal(s),
                    dist: (radius - r).abs(),
                    unique: r > 0.0,
                });
            }
            _ => {}
        }
        let (lo, hi) = self.range();
        let mut cands: Vec<(f64, f64)> = Vec::with_capacity(N_STARTS + 1);
        let guess = match *self {
            BoundaryCurve::Graph { .. } => q[1],
            BoundaryCurve::Ellipse { a, b } => (q[1] / b).atan2(q[0] / a),
            _ => q[1].atan2(q[0]),
        };
        let first = self.local_min(q, guess);
        cands.push(first);
        // Every boundary point at parameter s is at least |q_1 - s| away from q,
        // so on a graph the global minimizer lies within the current best radius.
        let (blo, bhi) = match *self {
            BoundaryCurve::Graph { .. } => {
                let r = (2.0 * first.1).sqrt();
                ((q[1] - r).max(lo), (q[1] + r).min(hi))
            }
            _ => (lo, hi),
        };
        for i in 0..N_STARTS {
            let s0 = if self.periodic() {
                blo + (i as f64 + 0.5) / N_STARTS as f64 * (bhi - blo)
            } else {
                blo + i as f64 / (N_STARTS - 1) as f64 * (bhi - blo)
            };
            cands.push(self.local_min(q, s0));
        }
        let (best_s, best_g) = cands
            .iter()
            .copied()
            .filter(|c| c.1.is_finite())
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)))?;
        let best_d = (2.0 * best_g).sqrt();
        let foot = self.point(best_s);
        let sep_tol = 1e-4 * best_d + 1e-12;
        let unique = !cands.iter().any(|&(s, g)| {
            let d = (2.0 * g).sqrt();
            let c = self.point(s);
            let apart = ((c[0] - foot[0]).powi(2) + (c[1] - foot[1]).powi(2)).sqrt() > sep_tol;
            apart && (d - best_d).abs() <= 1e-9 * best_d.max(1e-300)
        });
        Some(CurveProjection {
            param: best_s,
            foot,
            normal: self.inward_normal(best_s),
            dist: best_d,
            unique,
        })
    }
}
