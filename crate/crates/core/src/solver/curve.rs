use std::cell::Cell;

use crate::error::{Error, Result};
use crate::geom::{DomainSpec, Point};
use crate::quad;

/// Polyline with cumulative Euclidean arc length per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    points: Vec<Point>,
    cumlen: Vec<f64>,
}

impl Curve {
    /// Needs at least two points of equal dimension. Repeated points are allowed
    /// and contribute zero-length segments.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument(
                "a curve needs at least 2 points".into(),
            ));
        }
        let dim = points[0].dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite curve point {p}"
            )));
        }
        let mut cumlen = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        cumlen.push(0.0);
        for w in points.windows(2) {
            acc += w[0].dist(&w[1]);
            cumlen.push(acc);
        }
        Ok(Curve { points, cumlen })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn arc_lengths(&self) -> &[f64] {
        &self.cumlen
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> Point {
        self.points[0]
    }

    pub fn end(&self) -> Point {
        *self.points.last().unwrap()
    }

    pub fn euclidean_length(&self) -> f64 {
        *self.cumlen.last().unwrap()
    }

    pub fn reversed(&self) -> Curve {
        let mut pts = self.points.clone();
        pts.reverse();
        Curve::new(pts).expect("reversal keeps a valid curve")
    }

    /// Point at Euclidean arc length `s` from the start.
    pub fn point_at_length(&self, s: f64) -> Point {
        let s = s.clamp(0.0, self.euclidean_length());
        let k = self
            .cumlen
            .partition_point(|&c| c < s)
            .max(1)
            .min(self.len() - 1);
        let (l0, l1) = (self.cumlen[k - 1], self.cumlen[k]);
        if l1 <= l0 {
            return self.points[k];
        }
        self.points[k - 1].lerp(&self.points[k], (s - l0) / (l1 - l0))
    }

    /// Euclidean distance from `p` to the polyline.
    pub fn distance_to(&self, p: &Point) -> f64 {
        self.points
            .windows(2)
            .map(|w| segment_distance(p, &w[0], &w[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Hausdorff distance between two polylines, measured from the vertices of
    /// each curve (after subdividing every segment into `per_segment` pieces)
    /// to the other polyline.
    pub fn hausdorff(&self, other: &Curve, per_segment: usize) -> f64 {
        fn one_way(a: &Curve, b: &Curve, k: usize) -> f64 {
            let mut worst: f64 = 0.0;
            for w in a.points.windows(2) {
                for i in 0..=k {
                    let p = w[0].lerp(&w[1], i as f64 / k as f64);
                    worst = worst.max(b.distance_to(&p));
                }
            }
            worst
        }
        let k = per_segment.max(1);
        one_way(self, other, k).max(one_way(other, self, k))
    }
}

pub(crate) fn segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let ab = *b - *a;
    let l2 = ab.dot(&ab);
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((*p - *a).dot(&ab) / l2).clamp(0.0, 1.0);
    p.dist(&a.lerp(b, t))
}

/// Three-point Simpson estimate of `int 1/d` along a straight edge of length `len`.
#[inline]
pub(crate) fn simpson_edge(len: f64, d0: f64, dm: f64, d1: f64) -> f64 {
    len / 6.0 * (1.0 / d0 + 4.0 / dm + 1.0 / d1)
}

const MIN_DEPTH: f64 = 1e-9;

/// Quasi-hyperbolic length of one straight segment by adaptive Simpson.
pub fn segment_qh_length(domain: &DomainSpec, p: &Point, q: &Point) -> Result<f64> {
    let len = p.dist(q);
    if len == 0.0 {
        return Ok(0.0);
    }
    let worst = Cell::new(f64::INFINITY);
    let f = |t: f64| {
        let d = domain.depth(&p.lerp(q, t));
        if !(d >= MIN_DEPTH) {
            worst.set(
                worst
                    .get()
                    .min(if d.is_nan() { f64::NEG_INFINITY } else { d }),
            );
            return 0.0;
        }
        len / d
    };
    let v = quad::adaptive_simpson(&f, 0.0, 1.0, 1e-8, 0.0);
    let w = worst.get();
    if w < MIN_DEPTH {
        return Err(Error::CurveTouchesBoundary(w));
    }
    Ok(v)
}

/// `int ||d gamma|| / d_D` along the polyline, by adaptive composite Simpson on
/// every segment. Zero-length segments are skipped.
pub fn qh_length(domain: &DomainSpec, curve: &Curve) -> Result<f64> {
    let mut total = 0.0;
    for w in curve.points().windows(2) {
        total += segment_qh_length(domain, &w[0], &w[1])?;
    }
    Ok(total)
}
