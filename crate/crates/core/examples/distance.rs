//! Distances computed on the grid against closed forms.
//!
//! `cargo run --release --example distance`
#![allow(dead_code)]

use qhmetric::geom::{DomainSpec, Point};
use qhmetric::metric::halfspace_distance;
use qhmetric::solver::{qh_distance, GridSpec};
use qhmetric::Result;

pub struct DistanceRow {
    pub label: &'static str,
    pub value: f64,
    pub reference: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

pub fn run_example() -> Result<Vec<DistanceRow>> {
    let grid = GridSpec::default();
    let hp = DomainSpec::half_plane();
    let disc = DomainSpec::unit_disc();
    let cases: [(&'static str, &DomainSpec, Point, Point, f64); 3] = [
        (
            "half-plane, same depth",
            &hp,
            Point::new2(1.0, 0.0),
            Point::new2(1.0, 1.0),
            halfspace_distance(&Point::new2(1.0, 0.0), &Point::new2(1.0, 1.0))?,
        ),
        (
            "half-plane, oblique",
            &hp,
            Point::new2(0.5, -1.0),
            Point::new2(2.0, 1.0),
            halfspace_distance(&Point::new2(0.5, -1.0), &Point::new2(2.0, 1.0))?,
        ),
        // along a radius the distance is int dr / (1 - r)
        (
            "disc, radial",
            &disc,
            Point::new2(0.0, 0.0),
            Point::new2(0.5, 0.0),
            std::f64::consts::LN_2,
        ),
    ];
    let mut rows = Vec::new();
    for (label, domain, a, b, reference) in cases {
        let r = qh_distance(domain, &a, &b, &grid)?;
        rows.push(DistanceRow {
            label,
            value: r.value,
            reference,
            error_estimate: r.error_estimate,
            converged: r.converged,
        });
    }
    Ok(rows)
}

fn main() -> Result<()> {
    for r in run_example()? {
        println!(
            "{:<24} h = {:.8}  exact = {:.8}  rel err = {:.1e}  estimate = {:.1e}  converged = {}",
            r.label,
            r.value,
            r.reference,
            (r.value - r.reference).abs() / r.reference,
            r.error_estimate,
            r.converged
        );
    }
    Ok(())
}
