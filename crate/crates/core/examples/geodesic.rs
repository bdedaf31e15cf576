//! Geodesic extraction: the grid geodesic between two points of the
//! half-plane lies on the circle orthogonal to the boundary.
//!
//! `cargo run --release --example geodesic`
#![allow(dead_code)]

use qhmetric::geom::{DomainSpec, Point};
use qhmetric::metric::halfspace_geodesic;
use qhmetric::solver::{qh_distance, qh_length, refine_geodesic, Curve, GridSpec};
use qhmetric::Result;

pub struct GeodesicSummary {
    pub value: f64,
    pub vertices: usize,
    /// Largest distance from a vertex to the exact arc.
    pub max_deviation: f64,
    /// Length of the straight chord and of the chord after relaxation.
    pub chord_length: f64,
    pub relaxed_chord_length: f64,
    pub geodesic: Curve,
}

pub fn run_example() -> Result<GeodesicSummary> {
    let domain = DomainSpec::half_plane();
    let (a, b) = (Point::new2(1.0, -1.0), Point::new2(1.0, 1.0));
    let r = qh_distance(&domain, &a, &b, &GridSpec::default())?;
    let exact = halfspace_geodesic(&a, &b, 2000)?;
    let max_deviation = r
        .geodesic
        .points()
        .iter()
        .map(|p| exact.distance_to(p))
        .fold(0.0, f64::max);

    let chord = Curve::new(vec![a, b])?;
    let relaxed = refine_geodesic(&domain, &chord)?;
    Ok(GeodesicSummary {
        value: r.value,
        vertices: r.geodesic.len(),
        max_deviation,
        chord_length: qh_length(&domain, &chord)?,
        relaxed_chord_length: qh_length(&domain, &relaxed)?,
        geodesic: r.geodesic,
    })
}

fn main() -> Result<()> {
    let s = run_example()?;
    println!("h = {:.8} over {} vertices", s.value, s.vertices);
    println!("max distance to the exact arc: {:.2e}", s.max_deviation);
    println!(
        "straight chord {:.6} -> relaxed {:.6}",
        s.chord_length, s.relaxed_chord_length
    );
    println!("x0,x1");
    for p in s.geodesic.points().iter().step_by(8) {
        println!("{:.6},{:.6}", p[0], p[1]);
    }
    Ok(())
}
