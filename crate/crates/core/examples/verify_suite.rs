//! Run the seeded self-checks, then the same suite with a corrupted
//! interferometer to show the unitarity check catching it.
//!
//! cargo run --release --example verify_suite

use qufti::{run_verify, VerifyOptions};

fn main() -> qufti::Result<()> {
    let report = run_verify(&VerifyOptions::default())?;
    println!("{report}\n");

    let corrupted = run_verify(&VerifyOptions { n_max: 4, cases: 5, corrupt_unitary: true, ..VerifyOptions::default() })?;
    println!("{corrupted}");
    Ok(())
}
