//! Build the interferometer for a few weight choices and inspect it.
//!
//! cargo run --example interferometer

use qufti::{build_fourier, build_unitary, WeightVector};

fn main() -> qufti::Result<()> {
    let v = build_fourier(4)?;
    println!("4-mode Fourier transform, first row:");
    for z in v.row(0) {
        print!(" {:+.4}{:+.4}i", z.re, z.im);
    }
    println!("\n");

    let weights = WeightVector::linear(4)?;
    let moments = weights.moments();
    println!(
        "weights {:?}: A = {}, B = {}, B - A²/n = {}",
        weights.as_slice(),
        moments.linear_sum(),
        moments.square_sum(),
        moments.spread()
    );

    for phi in [0.0, 0.01, 0.5] {
        let u = build_unitary(&weights, phi)?;
        let t = u.distinguishable();
        println!(
            "phi = {phi:<5} |U†U - I| = {:.2e}  max row/col deviation of T = {:.2e}",
            u.unitarity_defect(),
            t.stochasticity_defect()
        );
        for row in t.matrix().rows() {
            println!("    {}", row.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join("  "));
        }
    }

    // A global offset on the weights only changes a global phase.
    let shifted = weights.shifted(3.5)?;
    let a = build_unitary(&weights, 0.3)?;
    let b = build_unitary(&shifted, 0.3)?;
    let diff = a
        .matrix()
        .iter()
        .zip(b.matrix().iter())
        .fold(0.0f64, |m, (x, y)| m.max((x.norm() - y.norm()).abs()));
    println!("\nmax | |U| - |U shifted| | = {diff:.2e}");
    Ok(())
}
