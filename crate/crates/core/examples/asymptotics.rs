//! Boundary ladder on the unit disc: pairs at depth t, tangential offset
//! sqrt(t), for t = 0.125 * 2^-k. Both h - s and h / s - 1 shrink as the pair
//! approaches the boundary.
//!
//! `cargo run --release --example asymptotics`
#![allow(dead_code)]

use qhmetric::experiments::{run_asymptotics, ExperimentReport, SequenceMode, SequenceSpec};
use qhmetric::geom::{DomainSpec, Point};
use qhmetric::Result;

pub fn run_example(levels: usize) -> Result<ExperimentReport> {
    let mut spec = SequenceSpec::new(
        DomainSpec::unit_disc(),
        Point::new2(1.0, 0.0),
        SequenceMode::TangentialPair,
    );
    spec.levels = levels;
    run_asymptotics(&spec, 1.2)
}

fn main() -> Result<()> {
    let rep = run_example(8)?;
    println!(
        "{:>2} {:>10} {:>10} {:>10} {:>11} {:>10}",
        "k", "t", "s", "h", "h - s", "h/s - 1"
    );
    for r in &rep.rows {
        println!(
            "{:>2} {:>10.3e} {:>10.5} {:>10.5} {:>11.2e} {:>10.2e}",
            r.k,
            r.t,
            r.s,
            r.h,
            r.h_minus_s,
            r.h_over_s - 1.0
        );
    }
    if let Some(v) = &rep.verdict {
        println!(
            "finest rung {}: |h - s| = {:.3e}, |h/s - 1| = {:.3e}, passed = {}",
            v.finest_k, v.diff_trend, v.ratio_trend, v.passed
        );
    }
    Ok(())
}
