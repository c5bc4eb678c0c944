//! Phase sensitivity from error propagation, for indistinguishable and
//! distinguishable photons, against the small-phase analytic values.
//!
//! cargo run --example sensitivity

use std::f64::consts::FRAC_1_SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qufti::{sensitivity_analytic, sensitivity_numerical, sensitivity_ratio, PhotonModel, WeightVector};

fn main() -> qufti::Result<()> {
    let phi = 1e-3;
    println!(" n  numerical I   analytic I   numerical D   analytic D   ratio");
    for n in 2..=8 {
        let w = WeightVector::linear(n)?;
        let m = w.moments();
        let ni = sensitivity_numerical(PhotonModel::Indistinguishable, &w, phi)?.value;
        let nd = sensitivity_numerical(PhotonModel::Distinguishable, &w, phi)?.value;
        let ai = sensitivity_analytic(PhotonModel::Indistinguishable, &m)?.value;
        let ad = sensitivity_analytic(PhotonModel::Distinguishable, &m)?.value;
        println!("{n:>2}  {ni:>11.6}  {ai:>11.6}  {nd:>12.6}  {ad:>11.6}  {:.6}", ni / nd);
    }

    println!("\nrandom weights in [-5, 5] (1/√2 = {FRAC_1_SQRT_2:.6}):");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..6 {
        let n = rng.gen_range(2..=7);
        let w = WeightVector::new((0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())?;
        println!("  n = {n}  ratio = {:.6}", sensitivity_ratio(&w, phi)?);
    }

    // Equal weights leave the probability flat: no phase information.
    let flat = WeightVector::constant(4, 2.0)?;
    let r = sensitivity_numerical(PhotonModel::Indistinguishable, &flat, phi)?;
    println!("\nequal weights: divergent = {}", r.divergent);
    Ok(())
}
