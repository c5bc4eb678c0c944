//! Photon-counting phase estimation in quantum Fourier transform interferometers.
//!
//! An n-mode interferometer `U = V Φ V†` (discrete Fourier transform, a
//! diagonal layer of phases `exp(i φ f_j)`, inverse transform) is fed one
//! photon per input port. The probability of one photon leaving every output
//! port is `|perm(U)|²` when the photons are indistinguishable and `perm(T)`,
//! `T = |U|²`, when they are fully distinguishable. From these the crate
//! computes the error-propagation phase sensitivity and compares it with the
//! small-phase closed forms, under which the two regimes differ by exactly
//! `√2` for every `n` and every choice of weights.
//!
//! ```
//! use qufti::{build_unitary, prob_indistinguishable_exact, WeightVector};
//!
//! let weights = WeightVector::new(vec![0.0, 1.0]).unwrap();
//! let u = build_unitary(&weights, 0.3).unwrap();
//! let p = prob_indistinguishable_exact(&u).unwrap();
//! assert!((p.value - 0.3f64.cos().powi(2)).abs() < 1e-14);
//! ```
//!
//! Modules:
//! - [`interferometer`]: weight vectors, their moments, `U` and `T`.
//! - [`permanent`]: direct and Ryser permanents, and the small-phase
//!   truncation that keeps the identity and all transpositions.
//! - [`probability`]: exact, closed-form and truncated detection probabilities.
//! - [`sensitivity`]: numerical and analytic `Δφ`.
//! - [`config`], [`sweep`], [`verify`]: the run harness behind the `qufti` binary.

pub mod config;
pub mod error;
pub mod interferometer;
pub mod permanent;
pub mod probability;
pub mod sensitivity;
pub mod sweep;
pub mod verify;

pub use config::{ModelSelection, OutputFormat, PhiGrid, RunConfig, WeightSpec};
pub use error::{QuftiError, Result};
pub use interferometer::{
    build_distinguishable_matrix, build_fourier, build_unitary, DistinguishableMatrix, QuftiUnitary,
    WeightMoments, WeightVector,
};
pub use permanent::{
    permanent_naive, permanent_ryser, permanent_ryser_with, permanent_truncated, Execution, PermanentMethod,
    PermanentValue,
};
pub use probability::{
    prob_distinguishable_closed, prob_distinguishable_exact, prob_indistinguishable_closed,
    prob_indistinguishable_exact, probability, PhotonModel, ProbabilityMethod, ProbabilityResult,
};
pub use sensitivity::{
    sensitivity_analytic, sensitivity_numerical, sensitivity_ratio, SensitivityMethod, SensitivityResult,
};
pub use sweep::{run_sensitivity, run_sweep, sensitivity_table, sweep, SweepOutput, SweepRow};
pub use verify::{run_verify, VerifyOptions, VerifyReport};
