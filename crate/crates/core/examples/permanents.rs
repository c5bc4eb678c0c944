//! Compare the direct permutation sum with Ryser's formula and time Ryser
//! on larger matrices.
//!
//! cargo run --release --example permanents

use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qufti::{permanent_naive, permanent_ryser, permanent_ryser_with, Execution};

fn main() -> qufti::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!(" n  relative difference (Ryser vs direct sum)");
    for n in 1..=9 {
        let m = Array2::from_shape_fn((n, n), |_| Complex64::new(rng.gen(), rng.gen()));
        let naive = permanent_naive(&m)?;
        let fast = permanent_ryser(&m)?;
        println!("{n:>2}  {:.3e}", (fast - naive).norm() / naive.norm());
    }

    let ones: Array2<f64> = Array2::ones((10, 10));
    println!("\nperm(ones 10x10) = {} (10! = 3628800)", permanent_ryser(&ones)?);

    println!("\n n  serial        parallel");
    for n in [16, 18, 20, 22] {
        let m = Array2::from_shape_fn((n, n), |_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let t = Instant::now();
        let s = permanent_ryser_with(&m, Execution::Serial)?;
        let ts = t.elapsed();
        let t = Instant::now();
        let p = permanent_ryser_with(&m, Execution::Parallel)?;
        let tp = t.elapsed();
        println!("{n:>2}  {ts:>10.2?}  {tp:>10.2?}   |diff|/|perm| = {:.1e}", (s - p).norm() / s.norm());
    }
    Ok(())
}
