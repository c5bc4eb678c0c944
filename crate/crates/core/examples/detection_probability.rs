//! Exact, truncated and closed-form coincidence probabilities for both
//! photon models, and the ratio of their losses.
//!
//! cargo run --example detection_probability

use qufti::probability::probability;
use qufti::{Execution, PhotonModel, ProbabilityMethod, WeightVector};

fn main() -> qufti::Result<()> {
    let weights = WeightVector::linear(4)?;
    println!("weights {:?}, B - A²/n = {}", weights.as_slice(), weights.spread());
    println!("{:>8} {:>5} {:>20} {:>20} {:>20}", "phi", "model", "exact", "truncated", "closed_form");

    for phi in [1e-4, 1e-3, 1e-2, 5e-2] {
        let mut loss = [0.0; 2];
        for (i, model) in PhotonModel::ALL.into_iter().enumerate() {
            let p = |method| probability(&weights, phi, model, method, Execution::Serial).map(|r| r.value);
            let exact = p(ProbabilityMethod::Exact)?;
            let fmt = |r: qufti::Result<f64>| r.map(|v| format!("{v:.15}")).unwrap_or_else(|_| "out of range".into());
            println!(
                "{phi:>8.0e} {:>5} {exact:>20.15} {:>20} {:>20}",
                model.tag(),
                fmt(p(ProbabilityMethod::Truncated)),
                fmt(p(ProbabilityMethod::ClosedForm)),
            );
            loss[i] = 1.0 - exact;
        }
        println!("{:>8} (1 - P_I) / (1 - P_D) = {:.6}", "", loss[0] / loss[1]);
    }
    Ok(())
}
