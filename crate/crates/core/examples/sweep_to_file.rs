//! Programmatic sweep written as CSV and JSON, the same output the `qufti
//! sweep` subcommand produces.
//!
//! cargo run --example sweep_to_file -- /tmp/qufti_sweep

use std::fs::File;
use std::path::PathBuf;

use qufti::sweep::{write_json, write_sweep_csv};
use qufti::{sweep, ModelSelection, PhiGrid, ProbabilityMethod, RunConfig, WeightSpec};

fn main() -> qufti::Result<()> {
    let stem = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("qufti_sweep"));
    let config = RunConfig {
        n: Some(5),
        weights: WeightSpec::Index0,
        grid: PhiGrid::logarithmic(1e-4, 1e-1, 13),
        model: ModelSelection::Both,
        methods: vec![ProbabilityMethod::Exact, ProbabilityMethod::ClosedForm, ProbabilityMethod::Truncated],
        ..RunConfig::default()
    };
    let out = sweep(&config)?;

    let csv_path = stem.with_extension("csv");
    let json_path = stem.with_extension("json");
    write_sweep_csv(&out, File::create(&csv_path)?)?;
    write_json(&out, File::create(&json_path)?)?;
    println!("{} rows -> {} and {}", out.rows.len(), csv_path.display(), json_path.display());

    for row in out.rows.iter().filter(|r| r.method == ProbabilityMethod::Truncated) {
        println!(
            "phi = {:.3e} {} truncation error = {:.3e}",
            row.phi,
            row.model,
            row.truncation_error.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
