//! Self-checks over seeded random inputs.
//!
//! Each check records the worst measured quantity against its tolerance so a
//! report shows how close to the limit a run came, not just pass/fail.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{QuftiError, Result};
use crate::interferometer::{build_unitary, WeightVector, UNITARITY_TOLERANCE};
use crate::permanent::{permanent_naive, permanent_ryser, permanent_truncated, NAIVE_MAX_N};
use crate::probability::{
    prob_distinguishable_closed, prob_distinguishable_exact, prob_indistinguishable_closed,
    prob_indistinguishable_exact,
};
use crate::sensitivity::sensitivity_ratio;

/// Largest `n` the suite accepts; the permanent check enumerates `n!` terms.
pub const VERIFY_MAX_N: usize = 8;

pub const PERMANENT_RELATIVE_TOLERANCE: f64 = 1e-9;
pub const RATIO_TOLERANCE: f64 = 0.01;
pub const SMALL_PHASE: f64 = 1e-3;
/// Halving φ must shrink the truncation error by a factor in `[6, 10]`.
pub const TRUNCATION_RATIO_RANGE: (f64, f64) = (6.0, 10.0);
/// `|P_exact - P_closed| <= CLOSED_FORM_FACTOR · φ³ · max|f|³`.
pub const CLOSED_FORM_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub n_max: usize,
    pub cases: usize,
    pub seed: u64,
    /// Negative control: perturb one element of every unitary before the
    /// unitarity check.
    pub corrupt_unitary: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { n_max: 7, cases: 20, seed: 42, corrupt_unitary: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub n_max: usize,
    pub cases: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify: seed={} n_max={} cases={}", self.seed, self.n_max, self.cases)?;
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {:<22} measured={:.3e} tolerance={:.3e}  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.tolerance,
                c.detail
            )?;
        }
        write!(f, "{}", if self.all_passed() { "all checks passed" } else { "some checks FAILED" })
    }
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize, bound: f64) -> WeightVector {
    WeightVector::new((0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).expect("finite weights")
}

fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((n, n), |_| Complex64::new(rng.gen(), rng.gen()))
}

fn check_permanents(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=opts.n_max {
        for _ in 0..opts.cases {
            let m = random_complex(rng, n);
            let naive = permanent_naive(&m)?;
            let fast = permanent_ryser(&m)?;
            worst = worst.max((fast - naive).norm() / (1.0 + naive.norm()));
        }
    }
    Ok(CheckOutcome {
        name: "permanent_oracle",
        measured: worst,
        tolerance: PERMANENT_RELATIVE_TOLERANCE,
        passed: worst <= PERMANENT_RELATIVE_TOLERANCE,
        detail: "Ryser vs direct permutation sum".into(),
    })
}

fn check_unitarity(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=opts.n_max {
        for _ in 0..opts.cases {
            let w = random_weights(rng, n, 10.0);
            let phi = rng.gen_range(-PI..=PI);
            let mut u = build_unitary(&w, phi)?;
            if opts.corrupt_unitary {
                u.perturb_element(0, n - 1, Complex64::new(1e-6, 0.0));
            }
            worst = worst.max(u.unitarity_defect());
            worst = worst.max(u.distinguishable().stochasticity_defect());
        }
    }
    Ok(CheckOutcome {
        name: "unitarity",
        measured: worst,
        tolerance: UNITARITY_TOLERANCE,
        passed: worst < UNITARITY_TOLERANCE,
        detail: "max |U†U - I| and |row/column sums of T - 1|".into(),
    })
}

/// Truncation error ratios over three consecutive halvings of φ.
pub fn truncation_ratios(weights: &WeightVector, phi: f64) -> Result<Vec<f64>> {
    let moments = weights.moments();
    let errors: Vec<f64> = (0..3)
        .map(|k| {
            let p = phi / f64::from(1 << k);
            let u = build_unitary(weights, p)?;
            let exact = permanent_ryser(u.matrix())?;
            Ok((exact - permanent_truncated(&u, &moments)?.value).norm())
        })
        .collect::<Result<_>>()?;
    Ok(errors.windows(2).map(|e| e[0] / e[1]).collect())
}

fn check_truncation(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let (lo, hi) = TRUNCATION_RATIO_RANGE;
    let mut worst: f64 = 0.0;
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for n in 2..=opts.n_max.max(2) {
        for _ in 0..opts.cases {
            let w = random_weights(rng, n, 2.0);
            for r in truncation_ratios(&w, SMALL_PHASE)? {
                worst = worst.max((r - 8.0).abs());
                range = (range.0.min(r), range.1.max(r));
            }
        }
    }
    Ok(CheckOutcome {
        name: "truncation_order",
        measured: worst,
        tolerance: 2.0,
        passed: range.0 >= lo && range.1 <= hi,
        detail: format!("halving ratios in [{:.3}, {:.3}], expected 8 ± 2", range.0, range.1),
    })
}

fn check_closed_form(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let phi = SMALL_PHASE;
    let mut worst: f64 = 0.0;
    for _ in 0..opts.cases {
        let n = rng.gen_range(1..=opts.n_max);
        let w = random_weights(rng, n, 5.0);
        let m = w.moments();
        let bound = CLOSED_FORM_FACTOR * phi.powi(3) * w.max_abs().powi(3);
        let u = build_unitary(&w, phi)?;
        let ei = (prob_indistinguishable_exact(&u)?.value - prob_indistinguishable_closed(&m, phi)?.value).abs();
        let ed = (prob_distinguishable_exact(&u.distinguishable())?.value - prob_distinguishable_closed(&m, phi)?.value).abs();
        worst = worst.max(ei.max(ed) / bound);
    }
    Ok(CheckOutcome {
        name: "closed_form",
        measured: worst,
        tolerance: 1.0,
        passed: worst <= 1.0,
        detail: format!("|P_exact - P_closed| / ({CLOSED_FORM_FACTOR}·φ³·max|f|³) at φ = {phi}"),
    })
}

fn check_ratio(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < opts.cases {
        let n = rng.gen_range(2..=opts.n_max.max(2));
        let w = random_weights(rng, n, 5.0);
        if w.spread() < 0.25 {
            continue;
        }
        let ratio = sensitivity_ratio(&w, SMALL_PHASE)?;
        worst = worst.max((ratio - FRAC_1_SQRT_2).abs());
        done += 1;
    }
    Ok(CheckOutcome {
        name: "ratio_universality",
        measured: worst,
        tolerance: RATIO_TOLERANCE,
        passed: worst <= RATIO_TOLERANCE,
        detail: format!("|Δφ(I)/Δφ(D) - 1/√2| at φ = {SMALL_PHASE}"),
    })
}

/// Run every check. Each check draws from its own stream derived from the
/// seed, so results do not depend on which other checks ran.
pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.n_max == 0 || opts.n_max > VERIFY_MAX_N.min(NAIVE_MAX_N) {
        return Err(QuftiError::InvalidConfig(format!(
            "--n for verify must be between 1 and {VERIFY_MAX_N} (got {})",
            opts.n_max
        )));
    }
    if opts.cases == 0 {
        return Err(QuftiError::InvalidConfig("--cases must be at least 1".into()));
    }
    type Check = fn(&VerifyOptions, &mut ChaCha8Rng) -> Result<CheckOutcome>;
    let checks: [Check; 5] = [check_permanents, check_unitarity, check_truncation, check_closed_form, check_ratio];
    let outcomes = checks
        .iter()
        .enumerate()
        .map(|(i, check)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            check(opts, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(VerifyReport { seed: opts.seed, n_max: opts.n_max, cases: opts.cases, checks: outcomes })
}
