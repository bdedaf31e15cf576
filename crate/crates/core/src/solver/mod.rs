//! Numerical quasi-hyperbolic distance: grid shortest paths, geodesic
//! relaxation and a two-level error estimate.

mod curve;
mod grid;
mod refine;

pub use curve::{qh_length, segment_qh_length, Curve};
pub use grid::{GridSpec, Stencil};
pub use refine::{refine_geodesic, refine_geodesic_with, RefineOptions};

use grid::{shortest_path, Lattice};

use crate::error::{Error, Result};
use crate::geom::{boundary_contact, Aabb, DomainSpec, Point};

/// Outcome of `qh_distance`.
#[derive(Clone, Debug, PartialEq)]
pub struct QhDistanceResult {
    /// Extrapolated distance.
    pub value: f64,
    /// Length of the relaxed geodesic found at `spacing`.
    pub value_coarse: f64,
    /// Same at `spacing / 2`.
    pub value_fine: f64,
    /// Relaxed geodesic from the fine level; starts at `a`, ends at `b`.
    pub geodesic: Curve,
    pub spacing: f64,
    /// `|value_coarse - value_fine|` plus the quadrature tolerance of the two
    /// length evaluations.
    pub error_estimate: f64,
    pub converged: bool,
}

const MAX_ENLARGEMENTS: usize = 4;

/// Relative error left by the quadrature and by the stopping rule of the
/// relaxation, which both levels share and the level difference cannot see.
const RESIDUAL_SLACK: f64 = 5e-7;

/// Vertices used when relaxing a path of Euclidean length `len` found at
/// spacing `h`. The fine level gets at least twice the segments of the coarse
/// one so that the polyline error also shows up in the level difference.
fn vertex_budget(len: f64, h: f64, min_segments: usize, max_segments: usize) -> usize {
    let n = (len / (2.0 * h)).ceil().max(1.0) as usize;
    n.next_power_of_two()
        .max(min_segments)
        .clamp(32, max_segments)
        + 1
}

struct Level {
    curve: Curve,
    value: f64,
}

#[allow(clippy::too_many_arguments)]
fn solve_level(
    domain: &DomainSpec,
    a: &Point,
    b: &Point,
    bbox: &Aabb,
    h: f64,
    grid: &GridSpec,
    band: Option<(&Curve, f64)>,
    segments: (usize, usize),
) -> Result<Level> {
    let lat = Lattice::covering(bbox, h)?;
    let mask = band.map(|(c, r)| lat.band(c.points(), r));
    let path = shortest_path(
        domain,
        a,
        b,
        &lat,
        grid.stencil_for(a.dim()),
        grid.margin * h,
        mask.as_deref(),
    )?;
    let raw = Curve::new(path)?;
    let opts = RefineOptions {
        vertices: vertex_budget(raw.euclidean_length(), h, segments.0, segments.1),
        ..Default::default()
    };
    let curve = refine_geodesic_with(domain, &raw, &opts)?;
    let value = qh_length(domain, &curve)?;
    Ok(Level { curve, value })
}

/// True when the curve passes within `gap` of a box face that does not lie on
/// the domain's own bounding box.
fn hugs_box(curve: &Curve, bbox: &Aabb, outer: &Aabb, gap: f64) -> bool {
    let dim = bbox.dim();
    curve.points().iter().any(|p| {
        (0..dim).any(|i| {
            (bbox.min[i] > outer.min[i] && p[i] - bbox.min[i] < gap)
                || (bbox.max[i] < outer.max[i] && bbox.max[i] - p[i] < gap)
        })
    })
}

/// Quasi-hyperbolic distance between interior points `a` and `b`.
///
/// Shortest paths are taken on the lattice of active nodes (depth at least
/// `margin * spacing`), relaxed by `refine_geodesic`, and measured with
/// `qh_length`. The search is repeated at half the spacing inside a band around
/// the first curve; the two lengths give the reported value (second-order
/// extrapolation) and `error_estimate`. Without an explicit box the search box
/// grows until the geodesic stays clear of its faces.
pub fn qh_distance(
    domain: &DomainSpec,
    a: &Point,
    b: &Point,
    grid: &GridSpec,
) -> Result<QhDistanceResult> {
    let dim = domain.dim();
    grid.validate(dim)?;
    let h = grid.spacing;
    let required = grid.margin * h;
    for p in [a, b] {
        let c = boundary_contact(domain, p)?;
        if c.distance < required {
            return Err(Error::PointTooCloseToBoundary {
                point: p.to_string(),
                distance: c.distance,
                required,
            });
        }
        if let Some(bx) = &grid.bbox {
            if !bx.contains(p) {
                return Err(Error::InvalidArgument(format!(
                    "{p} lies outside the grid box"
                )));
            }
        }
    }
    if a == b {
        return Ok(QhDistanceResult {
            value: 0.0,
            value_coarse: 0.0,
            value_fine: 0.0,
            geodesic: Curve::new(vec![*a, *b])?,
            spacing: h,
            error_estimate: 0.0,
            converged: true,
        });
    }

    let outer = domain.bounding_box();
    let sep = a.dist(b);
    let mut pad = 0.5 * sep + (grid.margin + 3.0) * h;
    let mut attempt = 0;
    let (bbox, coarse) = loop {
        let bbox = match &grid.bbox {
            Some(bx) => *bx,
            None => Aabb::around(&[*a, *b]).padded(pad).intersect(&outer),
        };
        let can_grow = grid.bbox.is_none() && attempt < MAX_ENLARGEMENTS;
        match solve_level(domain, a, b, &bbox, h, grid, None, (0, 512)) {
            Ok(level) if can_grow && hugs_box(&level.curve, &bbox, &outer, 2.0 * h) => {}
            Ok(level) => break (bbox, level),
            Err(Error::Disconnected) if can_grow => {}
            Err(e) => return Err(e),
        }
        pad *= 2.0;
        attempt += 1;
    };
    let fine = solve_level(
        domain,
        a,
        b,
        &bbox,
        0.5 * h,
        grid,
        Some((&coarse.curve, 8.0 * h)),
        (2 * (coarse.curve.len() - 1), 1024),
    )?;

    let value = fine.value + (fine.value - coarse.value) / 3.0;
    let err = (coarse.value - fine.value).abs() + RESIDUAL_SLACK * value;
    Ok(QhDistanceResult {
        value,
        value_coarse: coarse.value,
        value_fine: fine.value,
        geodesic: fine.curve,
        spacing: h,
        error_estimate: err,
        converged: err < 5e-3 * value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::halfspace_distance;

    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / y
    }

    #[test]
    fn half_plane_examples() {
        let h = DomainSpec::half_plane();
        let g = GridSpec::default();
        for (a, b) in [
            (Point::new2(1.0, 0.0), Point::new2(1.0, 1.0)),
            (Point::new2(1.0, 0.2), Point::new2(4.0, 0.2)),
        ] {
            let r = qh_distance(&h, &a, &b, &g).unwrap();
            let exact = halfspace_distance(&a, &b).unwrap();
            assert!(rel(r.value, exact) < 1e-2, "{} vs {exact}", r.value);
            assert_eq!(r.geodesic.start(), a);
            assert_eq!(r.geodesic.end(), b);
            assert!(r.converged);
        }
    }

    #[test]
    fn disc_radial_example() {
        let d = DomainSpec::unit_disc();
        let r = qh_distance(
            &d,
            &Point::new2(0.0, 0.0),
            &Point::new2(0.5, 0.0),
            &GridSpec::default(),
        )
        .unwrap();
        assert!(rel(r.value, 2f64.ln()) < 1e-2, "{}", r.value);
        assert!(r.value > 2f64.ln() - r.error_estimate - 1e-6);
    }

    #[test]
    fn margin_precondition_and_coincident_points() {
        let h = DomainSpec::half_plane();
        let g = GridSpec::default();
        let near = Point::new2(0.05, 0.0);
        assert!(matches!(
            qh_distance(&h, &near, &Point::new2(1.0, 0.0), &g),
            Err(Error::PointTooCloseToBoundary { .. })
        ));
        let p = Point::new2(0.7, 0.1);
        let r = qh_distance(&h, &p, &p, &g).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn explicit_box_too_small_is_disconnected() {
        let h = DomainSpec::half_plane();
        // A slab thinner than the margin: every node is inactive.
        let g = GridSpec {
            bbox: Some(Aabb::new(Point::new2(0.01, -1.0), Point::new2(0.05, 1.0))),
            margin: 4.0,
            spacing: 1.0 / 256.0,
            ..Default::default()
        };
        let r = qh_distance(&h, &Point::new2(0.04, -0.5), &Point::new2(0.04, 0.5), &g);
        assert!(matches!(r, Err(Error::Disconnected)), "{r:?}");
    }
}
