use qhmetric::experiments::{
    estimate_best_constant, estimate_best_constant_detailed, probe_pairs, render_report,
    run_asymptotics, run_bound_suite, run_correction_ladder, ReportFormat, RowStatus, SequenceMode,
    SequenceSpec,
};
use qhmetric::geom::{DomainSpec, GraphDomain, GraphFamily, ModulusOfContinuity, Point};
use qhmetric::solver::GridSpec;
use rand::{Rng, SeedableRng};

fn disc_ladder(mode: SequenceMode, levels: usize) -> SequenceSpec {
    let mut spec = SequenceSpec::new(DomainSpec::unit_disc(), Point::new2(1.0, 0.0), mode);
    spec.levels = levels;
    spec
}

fn paraboloid() -> DomainSpec {
    DomainSpec::Graph(GraphDomain::planar(
        GraphFamily::Paraboloid { kappa: 1.0 },
        1.0,
    ))
}

#[test]
fn half_plane_bound_suite() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let pairs: Vec<(Point, Point)> = (0..100)
        .map(|_| {
            let mut p = || Point::new2(rng.gen_range(0.25..2.0), rng.gen_range(-1.5..1.5));
            (p(), p())
        })
        .collect();
    let rep = run_bound_suite(
        &DomainSpec::half_plane(),
        &pairs,
        &[1.01],
        &GridSpec::default(),
    )
    .unwrap();
    assert_eq!(rep.rows.len(), 100);
    assert_eq!(rep.ghm_violations(), 0);
    let b = &rep.bounds[0];
    assert_eq!(b.violations, 0);
    let deepest = rep
        .rows
        .iter()
        .map(|r| r.d_a.max(r.d_b))
        .fold(0.0, f64::max);
    assert_eq!(b.t_star, deepest);
    for r in &rep.rows {
        assert!((r.h - r.s).abs() <= r.error_estimate, "{r:?}");
    }
}

#[test]
fn disc_bound_suite_is_ghm_clean() {
    let disc = DomainSpec::unit_disc();
    let pairs: Vec<(Point, Point)> = (0..12)
        .map(|i| {
            let th = i as f64 * 0.5;
            let r = 0.8 - 0.05 * (i % 4) as f64;
            (
                Point::new2(0.0, 0.0),
                Point::new2(r * th.cos(), r * th.sin()),
            )
        })
        .collect();
    let rep = run_bound_suite(&disc, &pairs, &[1.2], &GridSpec::default()).unwrap();
    assert_eq!(rep.ghm_violations(), 0);
}

#[test]
fn paraboloid_has_validated_neighborhood() {
    let pairs = probe_pairs(&paraboloid(), &Point::new2(0.0, 0.0), 0.1).unwrap();
    let rep = run_bound_suite(&paraboloid(), &pairs, &[1.2], &GridSpec::default()).unwrap();
    assert_eq!(rep.ghm_violations(), 0);
    assert!(rep.bounds[0].t_star > 0.0, "{:?}", rep.bounds);
}

#[test]
fn half_plane_ladders_are_exact() {
    for mode in [
        SequenceMode::NormalPair,
        SequenceMode::TangentialPair,
        SequenceMode::FixedRatio { lambda: 2.0 },
    ] {
        let mut spec = SequenceSpec::new(DomainSpec::half_plane(), Point::new2(0.0, 0.0), mode);
        spec.levels = 5;
        let rep = run_asymptotics(&spec, 1.2).unwrap();
        assert_eq!(rep.rows.len(), 6);
        for r in &rep.rows {
            assert_eq!(r.status, RowStatus::Ok);
            assert!(r.h_minus_s.abs() <= r.error_estimate, "{mode}: {r:?}");
        }
    }
}

#[test]
fn disc_difference_shrinks_down_the_ladder() {
    let rep = run_asymptotics(&disc_ladder(SequenceMode::TangentialPair, 8), 1.2).unwrap();
    let v = rep.verdict.clone().unwrap();
    assert!(v.inversions <= 1, "{v:?}");
    assert!(v.passed, "{v:?}");
    assert_eq!(rep.ghm_violations(), 0);
}

#[test]
fn ladder_depth_is_limited() {
    let spec = disc_ladder(SequenceMode::NormalPair, 13);
    assert!(run_asymptotics(&spec, 1.2).is_err());
}

#[test]
fn reports_are_reproducible() {
    let spec = disc_ladder(SequenceMode::TangentialPair, 3);
    let one = run_asymptotics(&spec, 1.2).unwrap();
    let two = run_asymptotics(&spec, 1.2).unwrap();
    for fmt in [ReportFormat::Csv, ReportFormat::Json] {
        assert_eq!(
            render_report(&one, fmt).unwrap(),
            render_report(&two, fmt).unwrap()
        );
    }
}

#[test]
fn best_constant_examples() {
    let zeta = Point::new2(0.0, 0.0);
    for depth in [0.25, 0.0625] {
        let c = estimate_best_constant(&DomainSpec::half_plane(), &zeta, depth).unwrap();
        assert!(c <= 1.01, "half-plane at {depth}: {c}");
    }
    let disc = DomainSpec::unit_disc();
    let zeta = Point::new2(1.0, 0.0);
    let at = |d: f64| estimate_best_constant_detailed(&disc, &zeta, d).unwrap();
    let (c1, c2) = (at(0.1), at(0.05));
    assert!(c1.constant >= 1.0 && c1.constant <= 1.5, "{}", c1.constant);
    assert!(c2.constant <= c1.constant + 0.05);
    assert!(c1.raw > 0.0 && c1.raw.is_finite());
}

#[test]
fn correction_integral_decays() {
    let mut spec = SequenceSpec::new(
        paraboloid(),
        Point::new2(0.0, 0.0),
        SequenceMode::TangentialPair,
    );
    spec.levels = 3;
    let omega = ModulusOfContinuity::power(1.0, 1.0).capped(2.0);
    let rep = run_correction_ladder(&spec, &omega).unwrap();
    assert_eq!(rep.samples.len(), 4);
    assert!(rep.exponent > 0.0, "{rep:?}");
    for w in rep.samples.windows(2) {
        assert!(w[1].integral < w[0].integral);
    }
}
