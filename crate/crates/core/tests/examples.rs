//! Runs the library code of every example.

#[path = "../examples/asymptotics.rs"]
mod asymptotics;
#[path = "../examples/bounds.rs"]
mod bounds;
#[path = "../examples/correction.rs"]
mod correction;
#[path = "../examples/distance.rs"]
mod distance;
#[path = "../examples/flattening.rs"]
mod flattening;
#[path = "../examples/geodesic.rs"]
mod geodesic;
#[path = "../examples/modulus.rs"]
mod modulus;
#[path = "../examples/reports.rs"]
mod reports;

#[test]
fn distance_example() {
    for r in distance::run_example().unwrap() {
        assert!(r.converged, "{}", r.label);
        assert!(
            (r.value - r.reference).abs() <= 1e-3 * r.reference,
            "{}",
            r.label
        );
    }
}

#[test]
fn geodesic_example() {
    let s = geodesic::run_example().unwrap();
    assert!(s.max_deviation < 2e-3);
    let exact = 2.0 * 1f64.asinh();
    assert!((s.value - exact).abs() < 1e-4);
    assert!(s.relaxed_chord_length < s.chord_length);
    assert!((s.relaxed_chord_length - exact).abs() < 1e-4);
}

#[test]
fn asymptotics_example() {
    let rep = asymptotics::run_example(4).unwrap();
    assert_eq!(rep.rows.len(), 5);
    let first = rep.rows[0].h_minus_s.abs();
    let last = rep.rows[4].h_minus_s.abs();
    assert!(last < first);
}

#[test]
fn bounds_example() {
    let s = bounds::run_example().unwrap();
    assert_eq!(s.suite.ghm_violations(), 0);
    for (_, c) in &s.constants {
        assert!(c.constant >= 1.0 && c.constant <= 1.5);
    }
}

#[test]
fn flattening_example() {
    let s = flattening::run_example(1.0).unwrap();
    assert!((s.sigma_min_at_vertex - 0.9).abs() < 1e-4);
    assert!(s.sweeps.iter().all(|w| w.passes()));
    assert!(s.pushforward_margin >= -1e-6);
    // the planar chart only shifts by the height of the graph
    assert!((s.planar_image[0] - (0.1 - 0.045)).abs() < 1e-12);
}

#[test]
fn modulus_example() {
    let s = modulus::run_example().unwrap();
    assert!(s.checks.iter().all(|c| c.passes()));
    let at_one = s.omega_star.iter().find(|(x, _)| *x == 1.0).unwrap().1;
    assert!((at_one - 2.0).abs() < 1e-6);
}

#[test]
fn correction_example() {
    let rep = correction::run_example(2).unwrap();
    assert!(rep.exponent > 0.0);
}

#[test]
fn reports_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = reports::run_example(dir.path()).unwrap();
    assert_eq!(out.len(), 2);
    assert!(out.iter().all(|(p, same)| *same && p.exists()));
}
