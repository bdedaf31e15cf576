use proptest::prelude::*;
use qhmetric::experiments::{SequenceMode, SequenceSpec};
use qhmetric::flatten::{
    asymptotic_ratio, chart_grid, fit_transfer_constant, jacobian_sweep, normal_flatten,
    transfer_sample, Flattening, NormalFlattening,
};
use qhmetric::geom::{boundary_contact, DomainSpec, GraphDomain, GraphFamily, Point};
use qhmetric::metric::PairData;
use qhmetric::solver::GridSpec;

fn parab(kappa: f64) -> GraphDomain {
    GraphDomain::planar(GraphFamily::Paraboloid { kappa }, 1.0)
}

proptest! {
    #[test]
    fn normal_flatten_round_trip(kappa in 0.5f64..2.0, f0 in 0.01f64..0.9, x1 in -0.5f64..0.5) {
        let g = parab(kappa);
        let x0 = f0 / kappa;
        let p = normal_flatten(&g, &Point::new2(x0, x1)).unwrap();
        let c = boundary_contact(&DomainSpec::Graph(g), &p).unwrap();
        prop_assert!((c.distance - x0).abs() < 1e-8, "{} vs {x0}", c.distance);
        prop_assert!((c.foot[1] - x1).abs() < 1e-8);
    }
}

#[test]
fn lower_jacobian_bound_on_other_families() {
    let families = [
        GraphFamily::CosineBump {
            amplitude: 0.1,
            frequency: 2.0,
        },
        GraphFamily::C11 { kappa: 1.0 },
    ];
    for family in families {
        let g = GraphDomain::planar(family, 1.0);
        let c = g.gradient_lipschitz();
        let map = Flattening::Normal(NormalFlattening::new(g).unwrap());
        let pts = chart_grid(40, 25, (1e-3, 0.2), (-0.5, 0.5), 1e-3);
        let s = jacobian_sweep(&map, &pts, c).unwrap();
        assert_eq!(s.points, 1000);
        assert!(s.passes(), "{family:?}: {s:?}");
    }
}

#[test]
fn distance_transfer_constant() {
    let nf = NormalFlattening::new(parab(1.0)).unwrap();
    let chart_pairs = [
        ((0.05, -0.1), (0.05, 0.1)),
        ((0.02, 0.0), (0.04, 0.15)),
        ((0.01, -0.05), (0.03, 0.05)),
        ((0.01, 0.1), (0.01, 0.2)),
        ((0.005, 0.0), (0.02, 0.03)),
    ];
    let samples: Vec<_> = chart_pairs
        .iter()
        .map(|&((p0, p1), (q0, q1))| {
            let (alpha, beta) = (Point::new2(p0, p1), Point::new2(q0, q1));
            let grid = GridSpec::with_spacing(p0.min(q0) / 8.0);
            transfer_sample(&nf, &alpha, &beta, &grid).unwrap()
        })
        .collect();
    let c = fit_transfer_constant(&samples);
    eprintln!("fitted transfer constant: {c}");
    for s in &samples {
        let bound = c * s.chart_sep + 3.0 * s.error_estimate;
        assert!((s.h_domain - s.h_halfspace).abs() <= bound + 1e-12);
    }
    // second-order agreement: the constant is of the order of the curvature
    assert!(c.is_finite() && c < 5.0, "{c}");
}

#[test]
fn asymptotic_ratio_at_finest_ladder_scale() {
    for family in [
        GraphFamily::Paraboloid { kappa: 1.0 },
        GraphFamily::C11 { kappa: 1.0 },
    ] {
        let domain = DomainSpec::Graph(GraphDomain::planar(family, 1.0));
        let spec = SequenceSpec::new(
            domain.clone(),
            Point::new2(0.0, 0.0),
            SequenceMode::TangentialPair,
        );
        let (a, b) = spec.pair(spec.levels).unwrap();
        let (ca, cb) = (
            boundary_contact(&domain, &a).unwrap(),
            boundary_contact(&domain, &b).unwrap(),
        );
        let alpha = Point::new2(ca.distance, ca.foot[1]);
        let beta = Point::new2(cb.distance, cb.foot[1]);
        let pair = PairData::new(a, b, ca.distance, cb.distance).unwrap();
        let chart = PairData::new(alpha, beta, alpha.x0(), beta.x0()).unwrap();
        let r = asymptotic_ratio(&pair, &chart);
        assert!((r - 1.0).abs() <= 0.02, "{family:?}: ratio {r}");
    }
}
