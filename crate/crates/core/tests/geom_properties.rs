use std::f64::consts::PI;

use proptest::prelude::*;
use qhmetric::geom::{
    boundary_contact, omega_star, DomainSpec, GraphDomain, GraphFamily, ImplicitShape,
    ModulusOfContinuity, Point,
};

/// Independent boundary parametrizations, written out here rather than taken
/// from the library.
#[derive(Clone, Copy, Debug)]
enum Oracle {
    Graph(fn(f64) -> f64, f64),
    Ellipse(f64, f64),
    Superellipse(f64, f64, f64),
    Circle(f64),
}

fn parab(s: f64) -> f64 {
    0.5 * s * s
}
fn bump(s: f64) -> f64 {
    0.1 * (1.0 - (2.0 * s).cos())
}
fn c11(s: f64) -> f64 {
    0.5 * s * s.abs()
}

impl Oracle {
    fn range(&self) -> (f64, f64) {
        match *self {
            Oracle::Graph(_, w) => (-w, w),
            _ => (-PI, PI),
        }
    }

    fn point(&self, s: f64) -> [f64; 2] {
        match *self {
            Oracle::Graph(f, _) => [f(s), s],
            Oracle::Ellipse(a, b) => [a * s.cos(), b * s.sin()],
            Oracle::Superellipse(a, b, p) => {
                let r = ((s.cos() / a).abs().powf(p) + (s.sin() / b).abs().powf(p)).powf(-1.0 / p);
                [r * s.cos(), r * s.sin()]
            }
            Oracle::Circle(r) => [r * s.cos(), r * s.sin()],
        }
    }

    fn dist(&self, s: f64, x: [f64; 2]) -> f64 {
        let p = self.point(s);
        ((p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2)).sqrt()
    }

    /// Dense sampling followed by golden-section refinement around the best sample.
    fn nearest(&self, x: [f64; 2]) -> (f64, f64) {
        let (lo, hi) = self.range();
        let n = 20_000;
        let step = (hi - lo) / n as f64;
        let best = (0..=n)
            .map(|i| lo + i as f64 * step)
            .min_by(|&s, &t| self.dist(s, x).total_cmp(&self.dist(t, x)))
            .unwrap();
        let (mut a, mut b) = (best - step, best + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if self.dist(c, x) < self.dist(d, x) {
                b = d;
            } else {
                a = c;
            }
        }
        let s = 0.5 * (a + b);
        (s, self.dist(s, x))
    }
}

fn cases() -> Vec<(DomainSpec, Oracle)> {
    let graph = |family| DomainSpec::Graph(GraphDomain::planar(family, 1.0));
    vec![
        (DomainSpec::unit_disc(), Oracle::Circle(1.0)),
        (
            graph(GraphFamily::Paraboloid { kappa: 1.0 }),
            Oracle::Graph(parab, 1.0),
        ),
        (
            graph(GraphFamily::CosineBump {
                amplitude: 0.1,
                frequency: 2.0,
            }),
            Oracle::Graph(bump, 1.0),
        ),
        (
            graph(GraphFamily::C11 { kappa: 1.0 }),
            Oracle::Graph(c11, 1.0),
        ),
        (
            DomainSpec::Implicit(ImplicitShape::Ellipse { a: 2.0, b: 1.0 }),
            Oracle::Ellipse(2.0, 1.0),
        ),
        (
            DomainSpec::Implicit(ImplicitShape::Superellipse {
                a: 1.0,
                b: 1.0,
                p: 4.0,
            }),
            Oracle::Superellipse(1.0, 1.0, 4.0),
        ),
    ]
}

/// Interior sample from unit-square coordinates.
fn sample(oracle: &Oracle, u: f64, v: f64) -> [f64; 2] {
    match *oracle {
        Oracle::Graph(f, _) => {
            let x1 = -0.5 + u;
            [f(x1) + 0.01 + 0.3 * v, x1]
        }
        _ => {
            let s = -PI + 2.0 * PI * u;
            let p = oracle.point(s);
            let k = 0.05 + 0.9 * v;
            [k * p[0], k * p[1]]
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contact_distance_matches_brute_force(idx in 0usize..6, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let (domain, oracle) = &cases()[idx];
        let x = sample(oracle, u, v);
        let c = boundary_contact(domain, &Point::new2(x[0], x[1])).unwrap();
        let (_, brute) = oracle.nearest(x);
        prop_assert!((c.distance - brute).abs() <= 1e-6 * brute, "{} vs {brute}", c.distance);
        prop_assert!((c.foot.dist(&Point::new2(x[0], x[1])) - c.distance).abs() < 1e-9);
        prop_assert!((c.normal.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_is_orthogonal_to_tangent(idx in 0usize..6, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let (domain, oracle) = &cases()[idx];
        let x = sample(oracle, u, v);
        let c = boundary_contact(domain, &Point::new2(x[0], x[1])).unwrap();
        // the parameter of the foot itself is well conditioned, unlike that of x
        let (s, _) = oracle.nearest([c.foot[0], c.foot[1]]);
        let h = 1e-6;
        let (p, q) = (oracle.point(s + h), oracle.point(s - h));
        let t = Point::new2(p[0] - q[0], p[1] - q[1]).normalized();
        prop_assert!(c.normal.dot(&t).abs() < 1e-8, "dot = {}", c.normal.dot(&t));
    }

    #[test]
    fn projection_unique_below_half_inverse_curvature(
        kappa in 0.5f64..3.0,
        x0f in 0.0f64..0.999,
        x1 in -0.5f64..0.5,
    ) {
        let g = GraphDomain::planar(GraphFamily::Paraboloid { kappa }, 1.0);
        let x0 = g.f(&[x1]) + 1e-4 + x0f * (0.5 / kappa - 1e-4 - g.f(&[x1])).max(0.0);
        prop_assume!(x0 < 0.5 / kappa);
        let c = boundary_contact(&DomainSpec::Graph(g), &Point::new2(x0, x1)).unwrap();
        prop_assert!(c.unique);
    }

    #[test]
    fn graph_gradient_is_lipschitz(idx in 0usize..3, p in -1.0f64..1.0, q in -1.0f64..1.0) {
        let family = [
            GraphFamily::Paraboloid { kappa: 1.5 },
            GraphFamily::CosineBump { amplitude: 0.1, frequency: 2.0 },
            GraphFamily::C11 { kappa: 0.7 },
        ][idx];
        let g = GraphDomain::planar(family, 1.0);
        prop_assert_eq!(g.f(&[0.0]), 0.0);
        prop_assert_eq!(g.grad(&[0.0])[0], 0.0);
        let l = g.gradient_lipschitz();
        prop_assert!((g.grad(&[p])[0] - g.grad(&[q])[0]).abs() <= l * (p - q).abs() + 1e-14);
    }
}

#[test]
fn omega_star_monotonicity() {
    let moduli = [
        ModulusOfContinuity::capped_linear(),
        ModulusOfContinuity::power(1.0, 0.5).capped(2.0),
        ModulusOfContinuity::log_power(1.0, 2.0),
    ];
    for w in &moduli {
        let grid: Vec<f64> = (0..=120)
            .map(|i| 10f64.powf(-8.0 + i as f64 * 0.1))
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&s| omega_star(w, s).unwrap()).collect();
        for i in 1..grid.len() {
            let tol = 1e-9 * vals[i].abs();
            assert!(
                vals[i] >= vals[i - 1] - tol,
                "{w:?} decreases at {}",
                grid[i]
            );
            assert!(
                vals[i] / grid[i] <= vals[i - 1] / grid[i - 1] * (1.0 + 1e-9),
                "{w:?}: omega*(s)/s increases at {}",
                grid[i]
            );
        }
    }
}
