//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qufti::probability::probability;
use qufti::verify::truncation_ratios;
use qufti::{
    build_unitary, permanent_naive, permanent_ryser, sensitivity_numerical, sensitivity_ratio, sweep, Execution,
    ModelSelection, PhiGrid, PhotonModel, ProbabilityMethod, RunConfig, WeightSpec, WeightVector,
};

const SEED: u64 = 2024;

struct Outcome {
    passed: bool,
    detail: String,
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize, bound: f64) -> WeightVector {
    WeightVector::new((0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).unwrap()
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    out.detail = format!("{}; {:.2?} (limit {:?})", out.detail, elapsed, limit);
    out.passed &= in_time;
    out
}

/// Δφ(I)/Δφ(D) = 1/√2 within 1% for linear weights, n = 2..6.
fn sqrt2_enhancement() -> Outcome {
    let target = FRAC_1_SQRT_2;
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        let r = sensitivity_ratio(&WeightVector::linear(n).unwrap(), 1e-3).unwrap();
        worst = worst.max((r - target).abs() / target);
    }
    Outcome { passed: worst <= 0.01, detail: format!("worst relative deviation {worst:.3e} (tol 1e-2)") }
}

/// |P_exact - P_closed| <= 10 φ³ max|f|³ at φ = 1e-3, n <= 8, 20 weight vectors each.
fn closed_form_probabilities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let phi: f64 = 1e-3;
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        for _ in 0..20 {
            let w = random_weights(&mut rng, n, 5.0);
            let bound = 10.0 * phi.powi(3) * w.max_abs().powi(3);
            for model in PhotonModel::ALL {
                let p = |method| probability(&w, phi, model, method, Execution::Serial).unwrap().value;
                let err = (p(ProbabilityMethod::Exact) - p(ProbabilityMethod::ClosedForm)).abs();
                worst = worst.max(err / bound);
            }
        }
    }
    Outcome { passed: worst <= 1.0, detail: format!("worst error/bound {worst:.3e} (tol 1)") }
}

/// Truncation error shrinks by 6..10 per halving of φ, n = 3, 4, 5.
fn sigma2_truncation() -> Outcome {
    let mut all = Vec::new();
    for n in 3..=5 {
        all.extend(truncation_ratios(&WeightVector::linear(n).unwrap(), 1e-3).unwrap());
    }
    let lo = all.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = all.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Outcome {
        passed: lo >= 6.0 && hi <= 10.0,
        detail: format!("halving ratios in [{lo:.4}, {hi:.4}] (required [6, 10])"),
    }
}

/// Ryser vs direct sum, 20 random complex matrices per n <= 8.
fn permanent_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        for _ in 0..20 {
            let m = Array2::from_shape_fn((n, n), |_| Complex64::new(rng.gen(), rng.gen()));
            let naive = permanent_naive(&m).unwrap();
            let fast = permanent_ryser(&m).unwrap();
            worst = worst.max((fast - naive).norm() / naive.norm());
        }
    }
    Outcome { passed: worst <= 1e-9, detail: format!("worst relative error {worst:.3e} (tol 1e-9)") }
}

/// Unitarity of U and double stochasticity of T for n <= 20.
fn unitarity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let (mut worst_u, mut worst_t): (f64, f64) = (0.0, 0.0);
    for n in 1..=20 {
        for _ in 0..10 {
            let w = random_weights(&mut rng, n, 10.0);
            let u = build_unitary(&w, rng.gen_range(-PI..=PI)).unwrap();
            worst_u = worst_u.max(u.unitarity_defect());
            worst_t = worst_t.max(u.distinguishable().stochasticity_defect());
        }
    }
    Outcome {
        passed: worst_u < 1e-10 && worst_t < 1e-10,
        detail: format!("max |U†U - I| {worst_u:.3e}, max |sum(T) - 1| {worst_t:.3e} (tol 1e-10)"),
    }
}

/// n = 2, f = (1, 2): numerical Δφ matches √(n/(8(Bn - A²))) = 0.5 and not
/// the form with A in place of A².
fn typo_resolution() -> Outcome {
    let w = WeightVector::new(vec![1.0, 2.0]).unwrap();
    let numeric = sensitivity_numerical(PhotonModel::Indistinguishable, &w, 1e-3).unwrap().value;
    let (a, b, n) = (3.0f64, 5.0f64, 2.0f64);
    let with_square = (n / (8.0 * (b * n - a * a))).sqrt();
    let as_printed = (n / (8.0 * (b * n - a))).sqrt();
    let dev_square = (numeric - with_square).abs() / with_square;
    let dev_printed = (numeric - as_printed).abs() / as_printed;
    Outcome {
        passed: dev_square <= 0.01 && dev_printed > 0.01,
        detail: format!(
            "numerical {numeric:.6}; A² form {with_square:.6} (dev {dev_square:.2e}); A form {as_printed:.6} (dev {dev_printed:.2e})"
        ),
    }
}

/// n = 20, 100 phase points, both models, exact method.
fn desk_scale_sweep() -> Outcome {
    let config = RunConfig {
        n: Some(20),
        weights: WeightSpec::Linear,
        grid: PhiGrid::linear(1e-4, 1e-2, 100),
        model: ModelSelection::Both,
        methods: vec![ProbabilityMethod::Exact],
        parallel: true,
        ..RunConfig::default()
    };
    let out = sweep(&config).unwrap();
    let complete = out.rows.len() == 200 && out.rows.iter().all(|r| r.probability.is_some() && r.sensitivity.is_some());
    Outcome { passed: complete, detail: format!("{} rows", out.rows.len()) }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        ("1 sqrt2 sensitivity enhancement", Duration::from_secs(1), sqrt2_enhancement),
        ("2 closed-form probabilities", Duration::from_secs(10), closed_form_probabilities),
        ("3 identity+transposition truncation", Duration::from_secs(5), sigma2_truncation),
        ("4 permanent oracle equivalence", Duration::from_secs(10), permanent_oracle),
        ("5 unitarity and double stochasticity", Duration::from_secs(5), unitarity),
        ("6 A-squared sensitivity form", Duration::from_secs(5), typo_resolution),
        ("7 desk-scale n=20 sweep", Duration::from_secs(300), desk_scale_sweep),
    ];

    let mut failures = 0;
    for (name, limit, run) in criteria {
        let out = timed(limit, run);
        println!("criterion {name}: {} ({})", if out.passed { "PASS" } else { "FAIL" }, out.detail);
        if !out.passed {
            failures += 1;
        }
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failures);
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
