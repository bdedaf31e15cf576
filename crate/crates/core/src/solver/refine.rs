use super::curve::{qh_length, simpson_edge, Curve};
use crate::error::{Error, Result};
use crate::geom::{DomainSpec, Point};

/// Smallest depth a refined vertex may reach.
const MIN_VERTEX_DEPTH: f64 = 1e-6;

/// Controls for `refine_geodesic_with`.
#[derive(Clone, Debug, PartialEq)]
pub struct RefineOptions {
    /// Number of vertices of the output polyline (at least 3).
    pub vertices: usize,
    pub max_sweeps: usize,
    /// A sweep whose decrease is below `rel_tol * length` ends the descent.
    pub rel_tol: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            vertices: 129,
            max_sweeps: 500,
            rel_tol: 1e-7,
        }
    }
}

/// Local descent on the discrete quasi-hyperbolic length with default options.
pub fn refine_geodesic(domain: &DomainSpec, initial: &Curve) -> Result<Curve> {
    refine_geodesic_with(domain, initial, &RefineOptions::default())
}

/// Coarse-to-fine descent: at 9, 17, 33, ... vertices the current curve is
/// resampled uniformly in quasi-hyperbolic arc length, then relaxed by
/// Gauss-Seidel sweeps that move each interior vertex down the finite-difference
/// gradient with a step of at most `d_D / 4`. Endpoints stay fixed. If the
/// result is not shorter than the input, the input is returned.
pub fn refine_geodesic_with(
    domain: &DomainSpec,
    initial: &Curve,
    opts: &RefineOptions,
) -> Result<Curve> {
    for p in initial.points() {
        let d = domain.depth(p);
        if !(d >= MIN_VERTEX_DEPTH) {
            return Err(Error::CurveTouchesBoundary(d));
        }
    }
    if initial.euclidean_length() == 0.0 {
        return Ok(initial.clone());
    }
    let target = opts.vertices.max(3) - 1;
    let mut levels = Vec::new();
    let mut n = 8;
    while n < target {
        levels.push(n);
        n *= 2;
    }
    levels.push(target);

    let mut current: Vec<Point> = initial.points().to_vec();
    let mut refined = false;
    for &segs in &levels {
        let Some(pts) = resample_qh(domain, &current, segs) else {
            continue;
        };
        let mut chain = Chain::new(domain, pts);
        chain.relax(opts.max_sweeps, opts.rel_tol);
        current = chain.pts;
        refined = true;
    }
    if !refined {
        return Err(Error::CurveTouchesBoundary(
            initial
                .points()
                .iter()
                .map(|p| domain.depth(p))
                .fold(f64::INFINITY, f64::min),
        ));
    }
    let out = Curve::new(current)?;
    let new_len = qh_length(domain, &out)?;
    match qh_length(domain, initial) {
        Ok(old_len) if old_len <= new_len => Ok(initial.clone()),
        _ => Ok(out),
    }
}

fn edge_weight(domain: &DomainSpec, p: &Point, dp: f64, q: &Point, dq: f64) -> f64 {
    let len = p.dist(q);
    if len == 0.0 {
        return 0.0;
    }
    let dm = domain.depth(&p.midpoint(q));
    if !(dm > 0.0) {
        return f64::INFINITY;
    }
    simpson_edge(len, dp, dm, dq)
}

/// Points on `pts` splitting it into `segs` pieces of equal quasi-hyperbolic
/// length. `None` when some new vertex is too close to the boundary.
fn resample_qh(domain: &DomainSpec, pts: &[Point], segs: usize) -> Option<Vec<Point>> {
    let depths: Vec<f64> = pts.iter().map(|p| domain.depth(p)).collect();
    let mut cum = vec![0.0];
    for i in 0..pts.len() - 1 {
        let w = edge_weight(domain, &pts[i], depths[i], &pts[i + 1], depths[i + 1]);
        if !w.is_finite() {
            return None;
        }
        cum.push(cum[i] + w);
    }
    let total = *cum.last().unwrap();
    if !(total > 0.0) {
        return None;
    }
    let mut out = Vec::with_capacity(segs + 1);
    out.push(pts[0]);
    let mut j = 0;
    for k in 1..segs {
        let t = total * k as f64 / segs as f64;
        while j + 1 < cum.len() - 1 && cum[j + 1] < t {
            j += 1;
        }
        let span = cum[j + 1] - cum[j];
        let f = if span > 0.0 { (t - cum[j]) / span } else { 0.0 };
        let p = pts[j].lerp(&pts[j + 1], f.clamp(0.0, 1.0));
        if !(domain.depth(&p) >= MIN_VERTEX_DEPTH) {
            return None;
        }
        out.push(p);
    }
    out.push(*pts.last().unwrap());
    Some(out)
}

struct Chain<'a> {
    domain: &'a DomainSpec,
    pts: Vec<Point>,
    depth: Vec<f64>,
    step: Vec<f64>,
}

impl<'a> Chain<'a> {
    fn new(domain: &'a DomainSpec, pts: Vec<Point>) -> Self {
        let depth: Vec<f64> = pts.iter().map(|p| domain.depth(p)).collect();
        let step = depth.iter().map(|d| d / 16.0).collect();
        Chain {
            domain,
            pts,
            depth,
            step,
        }
    }

    fn total(&self) -> f64 {
        (0..self.pts.len() - 1)
            .map(|i| {
                edge_weight(
                    self.domain,
                    &self.pts[i],
                    self.depth[i],
                    &self.pts[i + 1],
                    self.depth[i + 1],
                )
            })
            .sum()
    }

    /// Length of the two edges at vertex `i` if it sat at `p` with depth `d`.
    fn local(&self, i: usize, p: &Point, d: f64) -> f64 {
        edge_weight(self.domain, &self.pts[i - 1], self.depth[i - 1], p, d)
            + edge_weight(self.domain, p, d, &self.pts[i + 1], self.depth[i + 1])
    }

    fn local_at(&self, i: usize, p: &Point) -> f64 {
        let d = self.domain.depth(p);
        if !(d >= MIN_VERTEX_DEPTH) {
            return f64::INFINITY;
        }
        self.local(i, p, d)
    }

    /// One Gauss-Seidel sweep; returns the decrease of the total length.
    fn sweep(&mut self) -> f64 {
        let dim = self.pts[0].dim();
        let mut gain = 0.0;
        for i in 1..self.pts.len() - 1 {
            let p = self.pts[i];
            let d = self.depth[i];
            let f0 = self.local(i, &p, d);
            let eps = 1e-6 * d;
            let mut g = Point::zeros(dim);
            for k in 0..dim {
                let fp = self.local_at(i, &p.with(k, p[k] + eps));
                let fm = self.local_at(i, &p.with(k, p[k] - eps));
                g = g.with(k, (fp - fm) / (2.0 * eps));
            }
            let gn = g.norm();
            if !(gn > 0.0) || !gn.is_finite() {
                continue;
            }
            let dir = g * (-1.0 / gn);
            let mut tau = (2.0 * self.step[i]).min(d / 4.0);
            let floor = 1e-13 * d.max(p.norm());
            let mut accepted = false;
            while tau > floor {
                let q = p + dir * tau;
                let dq = self.domain.depth(&q);
                if dq >= MIN_VERTEX_DEPTH {
                    let f1 = self.local(i, &q, dq);
                    if f1 < f0 {
                        self.pts[i] = q;
                        self.depth[i] = dq;
                        self.step[i] = tau;
                        gain += f0 - f1;
                        accepted = true;
                        break;
                    }
                }
                tau *= 0.5;
            }
            if !accepted {
                self.step[i] = tau.max(floor);
            }
        }
        gain
    }

    fn relax(&mut self, max_sweeps: usize, rel_tol: f64) {
        let total = self.total();
        for _ in 0..max_sweeps {
            let gain = self.sweep();
            if gain < rel_tol * total {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{halfspace_distance, halfspace_geodesic};

    #[test]
    fn chord_relaxes_onto_orthogonal_circle() {
        let h = DomainSpec::half_plane();
        let a = Point::new2(1.0, 0.0);
        let b = Point::new2(1.0, 1.0);
        let chord = Curve::new(vec![a, b]).unwrap();
        let out = refine_geodesic(&h, &chord).unwrap();
        assert_eq!(out.start(), a);
        assert_eq!(out.end(), b);
        let exact = halfspace_geodesic(&a, &b, 400).unwrap();
        assert!(
            out.hausdorff(&exact, 4) < 2e-3,
            "{}",
            out.hausdorff(&exact, 4)
        );
        let len = qh_length(&h, &out).unwrap();
        let d = halfspace_distance(&a, &b).unwrap();
        assert!(len >= d - 1e-9 && len < d * (1.0 + 1e-4), "{len} vs {d}");
    }

    #[test]
    fn geodesic_segments_are_fixed_points() {
        let h = DomainSpec::half_plane();
        let seg = Curve::new(vec![Point::new2(1.0, 0.3), Point::new2(4.0, 0.3)]).unwrap();
        let out = refine_geodesic(&h, &seg).unwrap();
        assert!(out.hausdorff(&seg, 2) < 1e-9);

        let disc = DomainSpec::unit_disc();
        let seg = Curve::new(vec![Point::new2(0.0, 0.0), Point::new2(0.5, 0.0)]).unwrap();
        let out = refine_geodesic(&disc, &seg).unwrap();
        assert!(out.hausdorff(&seg, 2) < 1e-6);
    }

    #[test]
    fn boundary_vertices_are_rejected() {
        let h = DomainSpec::half_plane();
        let c = Curve::new(vec![Point::new2(1e-7, 0.0), Point::new2(1.0, 0.0)]).unwrap();
        assert!(matches!(
            refine_geodesic(&h, &c),
            Err(Error::CurveTouchesBoundary(_))
        ));
    }
}
