//! Probability of detecting exactly one photon in every output port.
//!
//! Indistinguishable photons interfere, giving `|perm(U)|²`. Fully
//! distinguishable photons do not, giving `perm(T)` with `T = |U|²`. Both
//! are also available from their second-order small-phase forms, which
//! depend on the weights only through `B - A²/n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QuftiError, Result};
use crate::interferometer::{build_unitary, DistinguishableMatrix, QuftiUnitary, WeightMoments, WeightVector};
use crate::permanent::{permanent_ryser_with, permanent_truncated, Execution};

/// Allowed rounding excursion outside `[0, 1]` before a value is rejected.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Imaginary part allowed on the permanent of a real nonnegative matrix.
pub const REAL_PERMANENT_TOLERANCE: f64 = 1e-10;

/// `B - A²/n` at or below this is treated as equal weights.
pub const DEGENERATE_SPREAD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PhotonModel {
    #[serde(rename = "I")]
    Indistinguishable,
    #[serde(rename = "D")]
    Distinguishable,
}

impl PhotonModel {
    pub const ALL: [PhotonModel; 2] = [PhotonModel::Indistinguishable, PhotonModel::Distinguishable];

    pub fn tag(self) -> &'static str {
        match self {
            PhotonModel::Indistinguishable => "I",
            PhotonModel::Distinguishable => "D",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhotonModel::Indistinguishable => "indistinguishable",
            PhotonModel::Distinguishable => "distinguishable",
        }
    }
}

impl fmt::Display for PhotonModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilityMethod {
    Exact,
    ClosedForm,
    Truncated,
}

impl ProbabilityMethod {
    pub fn tag(self) -> &'static str {
        match self {
            ProbabilityMethod::Exact => "exact",
            ProbabilityMethod::ClosedForm => "closed_form",
            ProbabilityMethod::Truncated => "truncated",
        }
    }
}

impl fmt::Display for ProbabilityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ProbabilityMethod {
    type Err = QuftiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(ProbabilityMethod::Exact),
            "closed_form" | "closed-form" | "closed" => Ok(ProbabilityMethod::ClosedForm),
            "truncated" => Ok(ProbabilityMethod::Truncated),
            other => Err(QuftiError::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityResult {
    pub value: f64,
    pub model: PhotonModel,
    pub method: ProbabilityMethod,
    pub phi: f64,
    pub n: usize,
    /// Equal weights: the probability is flat to second order and the
    /// sensitivity derived from it is undefined.
    pub degenerate: bool,
}

/// Clamp rounding excursions; reject anything larger.
pub fn clamp_probability(raw: f64) -> Result<f64> {
    if !raw.is_finite() || !(-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&raw) {
        return Err(QuftiError::ProbabilityOutOfRange { value: raw });
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// Same window as [`clamp_probability`], but an excursion means the
/// approximation has been pushed past the small-phase regime.
fn clamp_approximation(raw: f64, phi: f64) -> Result<f64> {
    clamp_probability(raw).map_err(|_| QuftiError::OutsideSmallPhaseRegime { phi, value: raw })
}

fn is_degenerate(spread: f64) -> bool {
    spread <= DEGENERATE_SPREAD
}

pub fn prob_indistinguishable_exact(u: &QuftiUnitary) -> Result<ProbabilityResult> {
    prob_indistinguishable_exact_with(u, Execution::Serial)
}

pub fn prob_indistinguishable_exact_with(u: &QuftiUnitary, execution: Execution) -> Result<ProbabilityResult> {
    let perm = permanent_ryser_with(u.matrix(), execution)?;
    Ok(ProbabilityResult {
        value: clamp_probability(perm.norm_sqr())?,
        model: PhotonModel::Indistinguishable,
        method: ProbabilityMethod::Exact,
        phi: u.phi(),
        n: u.n(),
        degenerate: is_degenerate(u.weights().spread()),
    })
}

pub fn prob_distinguishable_exact(t: &DistinguishableMatrix) -> Result<ProbabilityResult> {
    prob_distinguishable_exact_with(t, Execution::Serial)
}

/// `perm(T)`. `T` is real, so the permanent is evaluated in real arithmetic
/// and carries no imaginary part at all.
pub fn prob_distinguishable_exact_with(t: &DistinguishableMatrix, execution: Execution) -> Result<ProbabilityResult> {
    let perm = permanent_ryser_with(t.matrix(), execution)?;
    Ok(ProbabilityResult {
        value: clamp_probability(perm)?,
        model: PhotonModel::Distinguishable,
        method: ProbabilityMethod::Exact,
        phi: t.phi(),
        n: t.n(),
        degenerate: is_degenerate(t.weights().spread()),
    })
}

/// Complex-valued check used when a distinguishable permanent has been
/// routed through complex arithmetic.
pub fn real_part_checked(value: num_complex::Complex64) -> Result<f64> {
    if value.im.abs() >= REAL_PERMANENT_TOLERANCE * value.norm().max(1.0) {
        return Err(QuftiError::ComplexDistinguishablePermanent { imag: value.im });
    }
    Ok(value.re)
}

fn closed_form(moments: &WeightMoments, phi: f64, coefficient: f64, model: PhotonModel) -> Result<ProbabilityResult> {
    if !phi.is_finite() {
        return Err(QuftiError::NonFinitePhase(phi));
    }
    let raw = 1.0 - coefficient * phi * phi * moments.spread();
    if raw < 0.0 {
        return Err(QuftiError::OutsideSmallPhaseRegime { phi, value: raw });
    }
    Ok(ProbabilityResult {
        value: raw.min(1.0),
        model,
        method: ProbabilityMethod::ClosedForm,
        phi,
        n: moments.n(),
        degenerate: is_degenerate(moments.spread()),
    })
}

/// `1 - 2φ²(B - A²/n)`.
pub fn prob_indistinguishable_closed(moments: &WeightMoments, phi: f64) -> Result<ProbabilityResult> {
    closed_form(moments, phi, 2.0, PhotonModel::Indistinguishable)
}

/// `1 - φ²(B - A²/n)`.
pub fn prob_distinguishable_closed(moments: &WeightMoments, phi: f64) -> Result<ProbabilityResult> {
    closed_form(moments, phi, 1.0, PhotonModel::Distinguishable)
}

/// `|σ₀ + σ₂|²` from [`permanent_truncated`].
pub fn prob_indistinguishable_truncated(u: &QuftiUnitary, moments: &WeightMoments) -> Result<ProbabilityResult> {
    let amp = permanent_truncated(u, moments)?.value;
    Ok(ProbabilityResult {
        value: clamp_approximation(amp.norm_sqr(), u.phi())?,
        model: PhotonModel::Indistinguishable,
        method: ProbabilityMethod::Truncated,
        phi: u.phi(),
        n: u.n(),
        degenerate: is_degenerate(moments.spread()),
    })
}

/// Squared modulus of the identity amplitude alone,
/// `|1 + iφA/n - φ²B/(2n)|^(2n)`, before any range check.
pub fn identity_term_probability(moments: &WeightMoments, phi: f64) -> f64 {
    let n = moments.n() as f64;
    let diagonal = num_complex::Complex64::new(
        1.0 - phi * phi * moments.square_sum() / (2.0 * n),
        phi * moments.linear_sum() / n,
    );
    diagonal.norm_sqr().powi(moments.n() as i32)
}

/// Truncated distinguishable probability. Off-diagonal entries of `T` are
/// already second order, so every non-identity permutation is at least
/// fourth order and only the identity term survives.
pub fn prob_distinguishable_truncated(moments: &WeightMoments, phi: f64) -> Result<ProbabilityResult> {
    if !phi.is_finite() {
        return Err(QuftiError::NonFinitePhase(phi));
    }
    Ok(ProbabilityResult {
        value: clamp_approximation(identity_term_probability(moments, phi), phi)?,
        model: PhotonModel::Distinguishable,
        method: ProbabilityMethod::Truncated,
        phi,
        n: moments.n(),
        degenerate: is_degenerate(moments.spread()),
    })
}

/// Evaluate one (model, method) pair at one phase.
pub fn probability(
    weights: &WeightVector,
    phi: f64,
    model: PhotonModel,
    method: ProbabilityMethod,
    execution: Execution,
) -> Result<ProbabilityResult> {
    match (model, method) {
        (PhotonModel::Indistinguishable, ProbabilityMethod::Exact) => {
            prob_indistinguishable_exact_with(&build_unitary(weights, phi)?, execution)
        }
        (PhotonModel::Distinguishable, ProbabilityMethod::Exact) => {
            prob_distinguishable_exact_with(&build_unitary(weights, phi)?.distinguishable(), execution)
        }
        (PhotonModel::Indistinguishable, ProbabilityMethod::ClosedForm) => {
            prob_indistinguishable_closed(&weights.moments(), phi)
        }
        (PhotonModel::Distinguishable, ProbabilityMethod::ClosedForm) => {
            prob_distinguishable_closed(&weights.moments(), phi)
        }
        (PhotonModel::Indistinguishable, ProbabilityMethod::Truncated) => {
            prob_indistinguishable_truncated(&build_unitary(weights, phi)?, &weights.moments())
        }
        (PhotonModel::Distinguishable, ProbabilityMethod::Truncated) => {
            prob_distinguishable_truncated(&weights.moments(), phi)
        }
    }
}
