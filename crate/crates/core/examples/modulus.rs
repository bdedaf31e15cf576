//! Modulus-of-continuity calculus: Dini and log-Dini verdicts for the
//! reference families and the majorant omega*.
//!
//! `cargo run --release --example modulus`
#![allow(dead_code)]

use qhmetric::experiments::{modulus_matrix, ModulusCheck};
use qhmetric::geom::{omega_star, ModulusOfContinuity};
use qhmetric::Result;

pub struct ModulusSummary {
    pub checks: Vec<ModulusCheck>,
    /// `(s, omega*(s))` for the capped linear modulus.
    pub omega_star: Vec<(f64, f64)>,
}

pub fn run_example() -> Result<ModulusSummary> {
    let w = ModulusOfContinuity::capped_linear();
    let omega_star = [0.01, 0.1, 0.5, 1.0, 4.0]
        .into_iter()
        .map(|s| Ok((s, omega_star(&w, s)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModulusSummary {
        checks: modulus_matrix(),
        omega_star,
    })
}

fn main() -> Result<()> {
    let s = run_example()?;
    let show = |v: Option<f64>| v.map_or("divergent".to_string(), |x| format!("{x:.6}"));
    for c in &s.checks {
        let log = c
            .log_dini
            .as_ref()
            .map_or("not applicable".to_string(), |l| show(l.value.value()));
        println!(
            "{:<14} dini {:<10} log-dini {:<14} {}",
            c.name,
            show(c.dini.value.value()),
            log,
            if c.passes() {
                "as expected"
            } else {
                "UNEXPECTED"
            }
        );
    }
    for (x, v) in &s.omega_star {
        println!("omega*({x}) = {v:.8}");
    }
    Ok(())
}
