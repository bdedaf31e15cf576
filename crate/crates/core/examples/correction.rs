//! The correction integral `int omega*(d) / d` along geodesics of shrinking
//! length near a parabolic boundary point, with its fitted decay exponent.
//!
//! `cargo run --release --example correction`
#![allow(dead_code)]

use qhmetric::experiments::{run_correction_ladder, CorrectionReport, SequenceMode, SequenceSpec};
use qhmetric::geom::{DomainSpec, GraphDomain, GraphFamily, ModulusOfContinuity, Point};
use qhmetric::Result;

pub fn run_example(levels: usize) -> Result<CorrectionReport> {
    let kappa = 1.0;
    let domain = DomainSpec::Graph(GraphDomain::planar(GraphFamily::Paraboloid { kappa }, 1.0));
    let mut spec = SequenceSpec::new(domain, Point::new2(0.0, 0.0), SequenceMode::TangentialPair);
    spec.levels = levels;
    // the normal field is kappa-Lipschitz, and unit normals differ by at most 2
    let omega = ModulusOfContinuity::power(kappa, 1.0).capped(2.0);
    run_correction_ladder(&spec, &omega)
}

fn main() -> Result<()> {
    let rep = run_example(5)?;
    for s in &rep.samples {
        println!(
            "k = {}: length {:.5}, integral {:.5e}",
            s.k, s.length, s.integral
        );
    }
    println!("fitted exponent: {:.3}", rep.exponent);
    Ok(())
}
