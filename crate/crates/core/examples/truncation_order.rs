//! Keeping only the identity permutation and the n(n-1)/2 transpositions
//! reproduces the exact permanent up to a third-order remainder.
//!
//! cargo run --example truncation_order

use qufti::{build_unitary, permanent_ryser, permanent_truncated, WeightVector};

fn main() -> qufti::Result<()> {
    for n in 3..=6 {
        let weights = WeightVector::linear(n)?;
        let moments = weights.moments();
        let kept = 1 + n * (n - 1) / 2;
        let total: usize = (1..=n).product();
        println!("n = {n}: {kept} of {total} amplitudes kept");
        let mut previous: Option<f64> = None;
        for k in 0..5 {
            let phi = 1e-3 / f64::from(1 << k);
            let u = build_unitary(&weights, phi)?;
            let err = (permanent_ryser(u.matrix())? - permanent_truncated(&u, &moments)?.value).norm();
            let ratio = previous.map(|p| format!("{:.4}", p / err)).unwrap_or_default();
            println!("  phi = {phi:.3e}  error = {err:.3e}  halving ratio = {ratio}");
            previous = Some(err);
        }
    }
    Ok(())
}
