//! Two-sided bounds near a boundary point: the lower bound must always hold,
//! the upper bound `2 log(1 + c q)` only close enough to the boundary. Also
//! estimates the least admissible constant at a few scales.
//!
//! `cargo run --release --example bounds`
#![allow(dead_code)]

use qhmetric::experiments::{
    estimate_best_constant_detailed, probe_pairs, run_bound_suite, BestConstant, ExperimentReport,
};
use qhmetric::geom::{DomainSpec, Point};
use qhmetric::solver::GridSpec;
use qhmetric::Result;

pub struct BoundsSummary {
    pub suite: ExperimentReport,
    /// `(depth, estimate)` pairs.
    pub constants: Vec<(f64, BestConstant)>,
}

pub fn run_example() -> Result<BoundsSummary> {
    let disc = DomainSpec::unit_disc();
    let zeta = Point::new2(1.0, 0.0);
    let mut pairs = Vec::new();
    for r in [0.4, 0.2, 0.1] {
        pairs.extend(probe_pairs(&disc, &zeta, r)?);
    }
    let suite = run_bound_suite(&disc, &pairs, &[1.01, 1.2, 2.0], &GridSpec::default())?;
    let constants = [1.0 / 8.0, 1.0 / 32.0]
        .into_iter()
        .map(|d| Ok((d, estimate_best_constant_detailed(&disc, &zeta, d)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundsSummary { suite, constants })
}

fn main() -> Result<()> {
    let s = run_example()?;
    println!(
        "{} pairs, {} lower-bound violations",
        s.suite.rows.len(),
        s.suite.ghm_violations()
    );
    for b in &s.suite.bounds {
        println!(
            "c = {:<5} t* = {:.4}  ({} of {} pairs above the bound)",
            b.c, b.t_star, b.violations, b.tested
        );
    }
    for (d, c) in &s.constants {
        println!(
            "depth {:.4}: least constant {:.4} (raw ratio {:.4}, {} pairs)",
            d, c.constant, c.raw, c.pairs
        );
    }
    Ok(())
}
