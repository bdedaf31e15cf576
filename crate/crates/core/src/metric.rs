//! Closed-form comparison quantities for the quasi-hyperbolic metric.
//!
//! Everything is evaluated in `asinh` / `ln_1p` form so that small
//! separations do not cancel.

use crate::error::{Error, Result};
use crate::geom::{boundary_contact, DomainSpec, Point};
use crate::solver::Curve;

/// Two points with their boundary distances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairData {
    pub a: Point,
    pub b: Point,
    pub d_a: f64,
    pub d_b: f64,
    pub sep: f64,
}

impl PairData {
    pub fn new(a: Point, b: Point, d_a: f64, d_b: f64) -> Result<Self> {
        if !(d_a > 0.0 && d_b > 0.0) {
            return Err(Error::NonpositiveDistance(d_a, d_b));
        }
        Ok(PairData {
            a,
            b,
            d_a,
            d_b,
            sep: a.dist(&b),
        })
    }

    /// Pair with exact boundary distances taken from `domain`.
    pub fn in_domain(domain: &DomainSpec, a: Point, b: Point) -> Result<Self> {
        let da = boundary_contact(domain, &a)?.distance;
        let db = boundary_contact(domain, &b)?.distance;
        Self::new(a, b, da, db)
    }

    /// `sep / sqrt(d_a d_b)`.
    pub fn normalized_sep(&self) -> f64 {
        self.sep / (self.d_a * self.d_b).sqrt()
    }

    fn check(&self) -> Result<()> {
        if !(self.d_a > 0.0 && self.d_b > 0.0) {
            return Err(Error::NonpositiveDistance(self.d_a, self.d_b));
        }
        Ok(())
    }
}

/// `s_D(a, b) = 2 asinh(|a - b| / (2 sqrt(d_a d_b)))`.
pub fn s_metric(p: &PairData) -> Result<f64> {
    p.check()?;
    Ok(2.0 * (0.5 * p.normalized_sep()).asinh())
}

/// Universal lower bound `2 log((d_a + d_b + |a-b|) / (2 sqrt(d_a d_b)))`.
pub fn ghm_lower_bound(p: &PairData) -> Result<f64> {
    p.check()?;
    let g = (p.d_a * p.d_b).sqrt();
    // d_a + d_b - 2g = (sqrt(d_a) - sqrt(d_b))^2, kept separate to avoid cancellation
    let excess = (p.d_a.sqrt() - p.d_b.sqrt()).powi(2) + p.sep;
    Ok(2.0 * (excess / (2.0 * g)).ln_1p())
}

/// Upper bound `2 log(1 + c |a-b| / sqrt(d_a d_b))`, `c > 1`.
pub fn na_upper_bound(p: &PairData, c: f64) -> Result<f64> {
    if !(c > 1.0) {
        return Err(Error::ConstantOutOfRange(c));
    }
    p.check()?;
    Ok(2.0 * (c * p.normalized_sep()).ln_1p())
}

fn check_upper(a: &Point, b: &Point) -> Result<()> {
    for p in [a, b] {
        if !(p.x0() > 0.0) || !p.is_finite() {
            return Err(Error::PointOutsideDomain(p.to_string()));
        }
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// Exact quasi-hyperbolic distance of the half-space `{x_0 > 0}`.
pub fn halfspace_distance(a: &Point, b: &Point) -> Result<f64> {
    check_upper(a, b)?;
    s_metric(&PairData::new(*a, *b, a.x0(), b.x0())?)
}

/// Half-space geodesic from `a` to `b` sampled at `m >= 2` points, equally
/// spaced in hyperbolic arc length: a circle orthogonal to `{x_0 = 0}`, or a
/// normal segment when the tangential coordinates agree.
pub fn halfspace_geodesic(a: &Point, b: &Point, m: usize) -> Result<Curve> {
    check_upper(a, b)?;
    if m < 2 {
        return Err(Error::InvalidArgument(
            "geodesic needs at least 2 samples".into(),
        ));
    }
    // tangential direction and offset
    let mut tan = *b - *a;
    tan = tan.with(0, 0.0);
    let offset = tan.norm();
    let scale = a.x0().max(b.x0());
    let mut pts = Vec::with_capacity(m);
    if offset <= 1e-14 * scale {
        // vertical: equal steps in log x_0
        let (la, lb) = (a.x0().ln(), b.x0().ln());
        for i in 0..m {
            let t = i as f64 / (m - 1) as f64;
            let mut p = a.lerp(b, t);
            p = p.with(0, (la + t * (lb - la)).exp());
            pts.push(p);
        }
    } else {
        let u = tan * (1.0 / offset);
        // circle centered on the boundary at tangential offset c from a, radius r
        let c = (offset * offset + b.x0() * b.x0() - a.x0() * a.x0()) / (2.0 * offset);
        let r = (c * c + a.x0() * a.x0()).sqrt();
        // angle psi from the tangential axis; hyperbolic arc length is log tan(psi / 2)
        let psi_a = a.x0().atan2(-c);
        let psi_b = b.x0().atan2(offset - c);
        let arc = |psi: f64| (0.5 * psi).tan().ln();
        let (sa, sb) = (arc(psi_a), arc(psi_b));
        let base = a.with(0, 0.0);
        for i in 0..m {
            let t = i as f64 / (m - 1) as f64;
            let psi = if i == 0 {
                psi_a
            } else if i == m - 1 {
                psi_b
            } else {
                2.0 * (sa + t * (sb - sa)).exp().atan()
            };
            let along = c + r * psi.cos();
            let height = r * psi.sin();
            pts.push((base + u * along).with(0, height));
        }
        pts[0] = *a;
        pts[m - 1] = *b;
    }
    Curve::new(pts)
}

/// `log(1 + t) - asinh(t / 2)`, positive for `t > 0`.
pub fn margin_asinh_log(t: f64) -> f64 {
    let h = 0.5 * t;
    let root = (1.0 + h * h).sqrt();
    // (1 + t) - (h + root) = t / (1 + h + root)
    let gap = t / (1.0 + h + root);
    (gap / (h + root)).ln_1p()
}

/// `1 + c t - (1 + t)^{c'}` with `c = 2c' - 1`; positive for `0 < t < 1`, `c'` in `(1, 2]`.
pub fn margin_power(t: f64, c_prime: f64) -> f64 {
    let c = 2.0 * c_prime - 1.0;
    c * t - (c_prime * t.ln_1p()).exp_m1()
}

/// `1 + c t - c'(1 + t)` with `c = 2c' - 1`; positive for `t > 1`, `c' > 1`.
pub fn margin_linear(t: f64, c_prime: f64) -> f64 {
    (c_prime - 1.0) * (t - 1.0)
}

/// `log q + asinh(t) - asinh(q t)`, positive for `q > 1`, `t > 0`.
pub fn margin_asinh_scaling(q: f64, t: f64) -> f64 {
    let rt = (1.0 + t * t).sqrt();
    let rqt = (1.0 + q * q * t * t).sqrt();
    // q (t + rt) / (q t + rqt) = 1 + (q rt - rqt) / (q t + rqt),
    // q rt - rqt = (q^2 - 1) / (q rt + rqt)
    let num = (q * q - 1.0) / (q * rt + rqt);
    (num / (q * t + rqt)).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: Point, b: Point) -> PairData {
        PairData::new(a, b, a.x0(), b.x0()).unwrap()
    }

    #[test]
    fn s_metric_examples() {
        let p = Point::new2(1.0, 0.3);
        assert_eq!(s_metric(&pair(p, p)).unwrap(), 0.0);
        let v = s_metric(&pair(Point::new2(1.0, 0.0), Point::new2(4.0, 0.0))).unwrap();
        assert!((v - 4f64.ln()).abs() < 1e-12);
        let v = s_metric(&pair(Point::new2(1.0, 0.0), Point::new2(1.0, 1.0))).unwrap();
        assert!((v - 0.962_423_650_119_206_9).abs() < 1e-12);
        // log form
        let (sep, da, db): (f64, f64, f64) = (1.0, 1.0, 1.0);
        let log_form =
            2.0 * ((sep + (sep * sep + 4.0 * da * db).sqrt()) / (2.0 * (da * db).sqrt())).ln();
        assert!((v - log_form).abs() < 1e-12);
    }

    #[test]
    fn ghm_examples() {
        let v = ghm_lower_bound(&pair(Point::new2(1.0, 0.0), Point::new2(4.0, 0.0))).unwrap();
        assert!((v - 2.0 * 2f64.ln()).abs() < 1e-12);
        let v = ghm_lower_bound(&pair(Point::new2(1.0, 0.0), Point::new2(1.0, 1.0))).unwrap();
        assert!((v - 2.0 * 1.5f64.ln()).abs() < 1e-12);
        let p = Point::new2(2.0, 0.0);
        assert_eq!(ghm_lower_bound(&pair(p, p)).unwrap(), 0.0);
    }

    #[test]
    fn na_examples() {
        let p = pair(Point::new2(1.0, 0.0), Point::new2(1.0, 1.0));
        assert!((na_upper_bound(&p, 1.8).unwrap() - 2.0 * 2.8f64.ln()).abs() < 1e-12);
        let q = pair(Point::new2(1.0, 0.0), Point::new2(4.0, 0.0));
        assert!((na_upper_bound(&q, 1.1).unwrap() - 2.0 * 2.65f64.ln()).abs() < 1e-12);
        let z = pair(Point::new2(1.0, 0.0), Point::new2(1.0, 0.0));
        assert_eq!(na_upper_bound(&z, 3.0).unwrap(), 0.0);
        assert!(matches!(
            na_upper_bound(&p, 1.0),
            Err(Error::ConstantOutOfRange(_))
        ));
    }

    #[test]
    fn nonpositive_distances() {
        let a = Point::new2(1.0, 0.0);
        assert!(PairData::new(a, a, 0.0, 1.0).is_err());
        let bad = PairData {
            a,
            b: a,
            d_a: -1.0,
            d_b: 1.0,
            sep: 0.0,
        };
        assert!(matches!(
            s_metric(&bad),
            Err(Error::NonpositiveDistance(..))
        ));
        assert!(halfspace_distance(&Point::new2(-1.0, 0.0), &a).is_err());
    }

    #[test]
    fn halfspace_geodesic_shapes() {
        let a = Point::new2(1.0, 0.0);
        let b = Point::new2(1.0, 1.0);
        let g = halfspace_geodesic(&a, &b, 33).unwrap();
        let centre = Point::new2(0.0, 0.5);
        let r = 1.25f64.sqrt();
        for p in g.points() {
            assert!((p.dist(&centre) - r).abs() < 1e-12);
        }
        let v = halfspace_geodesic(&a, &Point::new2(4.0, 0.0), 5).unwrap();
        assert!(v.points().iter().all(|p| p[1] == 0.0));
        let chord = halfspace_geodesic(&a, &b, 2).unwrap();
        assert_eq!(chord.points(), &[a, b]);
    }

    #[test]
    fn inequality_margins_match_naive_forms() {
        for &t in &[0.01f64, 0.3, 1.0, 5.0, 40.0] {
            let naive = (1.0f64 + t).ln() - (0.5 * t).asinh();
            assert!((margin_asinh_log(t) - naive).abs() < 1e-13);
            for &q in &[1.1f64, 2.0, 7.0] {
                let naive = q.ln() + t.asinh() - (q * t).asinh();
                assert!((margin_asinh_scaling(q, t) - naive).abs() < 1e-12);
            }
        }
        for &t in &[0.1f64, 0.5, 0.9] {
            for &cp in &[1.2f64, 1.5, 2.0] {
                let naive = 1.0 + (2.0 * cp - 1.0) * t - (1.0 + t).powf(cp);
                assert!((margin_power(t, cp) - naive).abs() < 1e-13);
                let t2 = 1.0 / t;
                let naive = 1.0 + (2.0 * cp - 1.0) * t2 - cp * (1.0 + t2);
                assert!((margin_linear(t2, cp) - naive).abs() < 1e-12);
            }
        }
    }
}
