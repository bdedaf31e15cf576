//! Machine-readable reports: run a short ladder, write it as CSV and JSON,
//! read both back.
//!
//! `cargo run --release --example reports [DIR]`
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use qhmetric::experiments::{
    emit_report, parse_report, run_asymptotics, ReportFormat, SequenceMode, SequenceSpec,
};
use qhmetric::geom::{DomainSpec, Point};
use qhmetric::Result;

/// Writes `ladder.csv` and `ladder.json` into `dir`; returns the paths and
/// whether each parses back to the same report.
pub fn run_example(dir: &Path) -> Result<Vec<(PathBuf, bool)>> {
    let mut spec = SequenceSpec::new(
        DomainSpec::unit_disc(),
        Point::new2(1.0, 0.0),
        SequenceMode::NormalPair,
    );
    spec.levels = 4;
    let report = run_asymptotics(&spec, 1.2)?;
    let mut out = Vec::new();
    for (name, fmt) in [
        ("ladder.csv", ReportFormat::Csv),
        ("ladder.json", ReportFormat::Json),
    ] {
        let path = dir.join(name);
        emit_report(&report, fmt, &path)?;
        let back = parse_report(&std::fs::read_to_string(&path)?, fmt)?;
        // parsing rounds to the printed precision, so compare re-emitted text
        let again = dir.join(format!("again-{name}"));
        emit_report(&back, fmt, &again)?;
        let same = std::fs::read(&path)? == std::fs::read(&again)?;
        std::fs::remove_file(&again)?;
        out.push((path, same));
    }
    Ok(out)
}

fn main() -> Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    for (path, same) in run_example(&dir)? {
        println!(
            "{}: round trip {}",
            path.display(),
            if same { "identical" } else { "DIFFERS" }
        );
    }
    Ok(())
}
