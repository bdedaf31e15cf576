use proptest::prelude::*;
use qhmetric::geom::{DomainSpec, ImplicitShape, Point};
use qhmetric::metric::{ghm_lower_bound, halfspace_distance, halfspace_geodesic, PairData};
use qhmetric::solver::{qh_distance, qh_length, Curve, GridSpec};

fn ellipse() -> DomainSpec {
    DomainSpec::Implicit(ImplicitShape::Ellipse { a: 2.0, b: 1.0 })
}

/// Point of the unit disc with radius at most `r_max`.
fn disc_point(r_max: f64) -> impl Strategy<Value = Point> {
    (0.0f64..r_max, -3.2f64..3.2).prop_map(|(r, th)| Point::new2(r * th.cos(), r * th.sin()))
}

fn ellipse_point() -> impl Strategy<Value = Point> {
    (0.0f64..0.8, -3.2f64..3.2).prop_map(|(r, th)| Point::new2(2.0 * r * th.cos(), r * th.sin()))
}

fn grid() -> GridSpec {
    GridSpec::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lower_bound_respected(idx in 0usize..2, u in 0.0f64..1.0, v in 0.0f64..1.0, w in 0.0f64..1.0, z in 0.0f64..1.0) {
        let domain = if idx == 0 { DomainSpec::unit_disc() } else { ellipse() };
        let s = if idx == 0 { 1.0 } else { 2.0 };
        let a = Point::new2(s * 0.8 * (2.0 * u - 1.0), 0.8 * (2.0 * v - 1.0));
        let b = Point::new2(s * 0.8 * (2.0 * w - 1.0), 0.8 * (2.0 * z - 1.0));
        prop_assume!(domain.contains(&a) && domain.contains(&b));
        prop_assume!(domain.depth(&a) > 0.1 && domain.depth(&b) > 0.1);
        let r = qh_distance(&domain, &a, &b, &grid()).unwrap();
        let pd = PairData::in_domain(&domain, a, b).unwrap();
        prop_assert!(r.value + r.error_estimate >= ghm_lower_bound(&pd).unwrap());
        prop_assert_eq!(r.geodesic.start(), a);
        prop_assert_eq!(r.geodesic.end(), b);
    }

    #[test]
    fn value_below_any_joining_curve(a in ellipse_point(), b in ellipse_point()) {
        let domain = ellipse();
        prop_assume!(domain.depth(&a) > 0.1 && domain.depth(&b) > 0.1);
        let r = qh_distance(&domain, &a, &b, &grid()).unwrap();
        let chord = Curve::new(vec![a, b]).unwrap();
        prop_assert!(r.value <= qh_length(&domain, &chord).unwrap() + r.error_estimate);
    }

    #[test]
    fn value_below_halfspace_arc(a in prop::array::uniform2(0.3f64..1.5), b in prop::array::uniform2(0.3f64..1.5)) {
        let domain = DomainSpec::half_plane();
        let (a, b) = (Point::new2(a[0], a[1]), Point::new2(b[0], b[1]));
        let r = qh_distance(&domain, &a, &b, &grid()).unwrap();
        let arc = halfspace_geodesic(&a, &b, 400).unwrap();
        prop_assert!(r.value <= qh_length(&domain, &arc).unwrap() + r.error_estimate);
        let exact = halfspace_distance(&a, &b).unwrap();
        prop_assert!((r.value - exact).abs() <= 1e-2 * exact);
    }

    #[test]
    fn symmetric(a in disc_point(0.8), b in disc_point(0.8)) {
        let domain = DomainSpec::unit_disc();
        let ab = qh_distance(&domain, &a, &b, &grid()).unwrap();
        let ba = qh_distance(&domain, &b, &a, &grid()).unwrap();
        prop_assert!(
            (ab.value - ba.value).abs() <= ab.error_estimate.max(ba.error_estimate),
            "{} vs {} (err {} / {})", ab.value, ba.value, ab.error_estimate, ba.error_estimate
        );
    }

    #[test]
    fn triangle_inequality(a in disc_point(0.8), b in disc_point(0.8), c in disc_point(0.8)) {
        let domain = DomainSpec::unit_disc();
        let ab = qh_distance(&domain, &a, &b, &grid()).unwrap();
        let bc = qh_distance(&domain, &b, &c, &grid()).unwrap();
        let ac = qh_distance(&domain, &a, &c, &grid()).unwrap();
        let err = ab.error_estimate.max(bc.error_estimate).max(ac.error_estimate);
        prop_assert!(ac.value <= ab.value + bc.value + 2.0 * err);
    }

    #[test]
    fn insensitive_to_margin(a in disc_point(0.85), b in disc_point(0.85)) {
        let domain = DomainSpec::unit_disc();
        let runs: Vec<_> = [3.0, 4.0, 6.0]
            .iter()
            .map(|&m| qh_distance(&domain, &a, &b, &GridSpec { margin: m, ..grid() }).unwrap())
            .collect();
        let err = runs.iter().map(|r| r.error_estimate).fold(0.0, f64::max);
        for r in &runs[1..] {
            prop_assert!(
                (r.value - runs[0].value).abs() <= 2.0 * err,
                "{} vs {} (err {})", r.value, runs[0].value, err
            );
        }
    }
}
