use super::domain::{BoundaryCurve, DomainSpec};
use super::point::{Aabb, Point};
use crate::error::{Error, Result};

/// Distance to the boundary together with the nearest boundary point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryContact {
    /// `d_D(x)`.
    pub distance: f64,
    /// Nearest boundary point `pi(x)`.
    pub foot: Point,
    /// Inward unit normal at the foot.
    pub normal: Point,
    pub unique: bool,
}

/// Nearest boundary point of an interior point.
pub fn boundary_contact(domain: &DomainSpec, x: &Point) -> Result<BoundaryContact> {
    if x.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: x.dim(),
        });
    }
    if !x.is_finite() || !domain.contains(x) {
        return Err(Error::PointOutsideDomain(x.to_string()));
    }
    if let DomainSpec::Graph(g) = domain {
        let w = &g.window;
        if (1..x.dim()).any(|i| x[i] < w.min[i] || x[i] > w.max[i]) {
            return Err(Error::PointOutsideDomain(format!("{x} (outside window)")));
        }
    }
    let pr = domain.project(x)?;
    Ok(BoundaryContact {
        distance: pr.distance,
        foot: pr.foot,
        normal: pr.normal,
        unique: pr.unique,
    })
}

const REACH_SAMPLES: usize = 256;
const REACH_BISECTIONS: usize = 20;

/// Boundary points with inward normals that fall inside `region`.
fn boundary_sample(domain: &DomainSpec, region: &Aabb) -> Vec<(Point, Point)> {
    let dense = 4096;
    let mut all = Vec::new();
    match domain {
        DomainSpec::Ball { center, radius } if center.dim() == 3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            for i in 0..dense {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / dense as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * i as f64;
                let u = Point::new3(z, r * phi.cos(), r * phi.sin());
                all.push((*center + u * *radius, -u));
            }
        }
        DomainSpec::Graph(g) if g.dim() == 3 => {
            let side = 64;
            let w = &g.window;
            for i in 0..side {
                for j in 0..side {
                    let x1 = w.min[1] + (i as f64 + 0.5) / side as f64 * w.extent(1);
                    let x2 = w.min[2] + (j as f64 + 0.5) / side as f64 * w.extent(2);
                    let x = [x1, x2];
                    all.push((g.boundary_point(&x), g.inward_normal(&x)));
                }
            }
        }
        _ => {
            if let Ok(curve) = domain.boundary_curve() {
                let (lo, hi) = match curve {
                    BoundaryCurve::Line => (region.min[1], region.max[1]),
                    _ => curve.range(),
                };
                for i in 0..dense {
                    let s = lo + (i as f64 + 0.5) / dense as f64 * (hi - lo);
                    let c = curve.point(s);
                    let n = curve.inward_normal(s);
                    all.push((Point::new2(c[0], c[1]), Point::new2(n[0], n[1])));
                }
            }
        }
    }
    let inside: Vec<_> = all
        .into_iter()
        .filter(|(p, _)| region.contains(p))
        .collect();
    if inside.len() <= REACH_SAMPLES {
        return inside;
    }
    (0..REACH_SAMPLES)
        .map(|k| inside[k * inside.len() / REACH_SAMPLES])
        .collect()
}

fn ball_clear(domain: &DomainSpec, center: &Point, radius: f64) -> bool {
    match domain.project(center) {
        Ok(pr) => pr.distance >= radius * (1.0 - 1e-9) - 1e-13,
        Err(_) => false,
    }
}

fn largest_clear_radius(domain: &DomainSpec, q: &Point, dir: &Point, r_max: f64) -> f64 {
    if ball_clear(domain, &(*q + *dir * r_max), r_max) {
        return r_max;
    }
    let (mut lo, mut hi) = (0.0, r_max);
    for _ in 0..REACH_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if ball_clear(domain, &(*q + *dir * mid), mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Lower estimate of the reach from the two-ball test: the largest `R` such that
/// every sampled boundary point in `region` has interior and exterior tangent
/// balls of radius `R`. Returns `f64::INFINITY` for a half-space.
pub fn reach_estimate(domain: &DomainSpec, region: &Aabb) -> Result<f64> {
    if let DomainSpec::HalfSpace { .. } = domain {
        if region.min.x0() <= 0.0 && region.max.x0() >= 0.0 {
            return Ok(f64::INFINITY);
        }
        return Err(Error::RegionMissesBoundary);
    }
    let samples = boundary_sample(domain, region);
    if samples.is_empty() {
        return Err(Error::RegionMissesBoundary);
    }
    let r_max = 10.0
        * region
            .diameter()
            .max(domain.bounding_box().diameter().min(1e3));
    let r_max = if r_max.is_finite() { r_max } else { 1e3 };
    let mut reach = f64::INFINITY;
    for (q, n) in &samples {
        let inner = largest_clear_radius(domain, q, n, r_max);
        let outer = largest_clear_radius(domain, q, &(-*n), r_max);
        reach = reach.min(inner).min(outer);
    }
    Ok(reach)
}
