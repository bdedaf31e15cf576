//! Flattening maps of a parabolic boundary: the normal chart, the planar
//! chart and the arc-length chart, with their Jacobian distortion sweeps and a
//! pushforward length check.
//!
//! `cargo run --release --example flattening`
#![allow(dead_code)]

use qhmetric::flatten::{
    curve_pushforward_check, jacobian_bounds, normal_flatten, planar_flatten, sigma_flatten,
    standard_jacobian_sweeps, Flattening, NormalFlattening, PushforwardWeight, SweepSummary,
};
use qhmetric::geom::{DomainSpec, GraphDomain, GraphFamily, Point};
use qhmetric::solver::Curve;
use qhmetric::Result;

pub struct FlatteningSummary {
    pub normal_image: Point,
    pub planar_image: Point,
    pub sigma_image: Point,
    pub sigma_min_at_vertex: f64,
    pub sweeps: Vec<SweepSummary>,
    pub pushforward_margin: f64,
}

pub fn run_example(kappa: f64) -> Result<FlatteningSummary> {
    let g = GraphDomain::planar(GraphFamily::Paraboloid { kappa }, 1.0);
    let chart = Point::new2(0.1, 0.3);
    let normal_image = normal_flatten(&g, &chart)?;
    let planar_image = planar_flatten(&g, &chart)?;
    let dom = DomainSpec::Graph(g.clone());
    let (a, b) = (Point::new2(0.2, -0.3), Point::new2(0.25, 0.4));
    let sigma_image = sigma_flatten(&dom, &a, &b, &chart)?;

    let nf = NormalFlattening::new(g.clone())?;
    let at_vertex = jacobian_bounds(
        &Flattening::Normal(nf.clone()),
        &Point::new2(0.1, 0.0),
        kappa,
    )?;
    let sweeps = standard_jacobian_sweeps(&g, kappa)?;

    let curve = Curve::new(vec![
        Point::new2(0.02, -0.5),
        Point::new2(0.15, -0.1),
        Point::new2(0.05, 0.2),
        Point::new2(0.1, 0.5),
    ])?;
    let pushforward_margin =
        curve_pushforward_check(&nf, &curve, PushforwardWeight::InverseDepth, kappa)?.min(
            curve_pushforward_check(&nf, &curve, PushforwardWeight::One, kappa)?,
        );
    Ok(FlatteningSummary {
        normal_image,
        planar_image,
        sigma_image,
        sigma_min_at_vertex: at_vertex.sigma_min,
        sweeps,
        pushforward_margin,
    })
}

fn main() -> Result<()> {
    let s = run_example(1.0)?;
    println!("chart point (0.1, 0.3)");
    println!(
        "  normal -> ({:.6}, {:.6})",
        s.normal_image[0], s.normal_image[1]
    );
    println!(
        "  planar -> ({:.6}, {:.6})",
        s.planar_image[0], s.planar_image[1]
    );
    println!(
        "  sigma  -> ({:.6}, {:.6})",
        s.sigma_image[0], s.sigma_image[1]
    );
    println!(
        "smallest singular value at (0.1, 0): {:.6}",
        s.sigma_min_at_vertex
    );
    for w in &s.sweeps {
        println!(
            "{} sweep: {} points, {} failures",
            w.map, w.points, w.failures
        );
    }
    println!("pushforward margin: {:.4}", s.pushforward_margin);
    Ok(())
}
