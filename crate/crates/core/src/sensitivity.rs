//! Phase sensitivity by error propagation.
//!
//! For a two-outcome projective measurement `⟨Ô⟩ = ⟨Ô²⟩ = P`, so
//! `Δφ = √(P - P²) / |dP/dφ|`. The numerical route differentiates the exact
//! probability by central differences; the analytic route uses the
//! small-phase forms `P = 1 - κ φ² (B - A²/n)` with `κ = 2` or `1`, whose
//! limit is `Δφ = 1 / √(4 κ (B - A²/n))`.

use serde::{Deserialize, Serialize};

use crate::error::{QuftiError, Result};
use crate::interferometer::{WeightMoments, WeightVector};
use crate::permanent::Execution;
use crate::probability::{probability, PhotonModel, ProbabilityMethod, DEGENERATE_SPREAD};

/// `|dP/dφ|` below this is reported as a divergent sensitivity.
pub const DIVERGENCE_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityMethod {
    Numerical,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityResult {
    /// `+∞` when `divergent` is set.
    pub value: f64,
    pub model: PhotonModel,
    pub method: SensitivityMethod,
    pub phi: f64,
    pub derivative_step: Option<f64>,
    pub divergent: bool,
}

impl SensitivityResult {
    /// The finite value, or `None` when divergent.
    pub fn finite(&self) -> Option<f64> {
        (!self.divergent).then_some(self.value)
    }
}

/// Central-difference step `max(1e-6, 1e-3 |φ|)`.
pub fn derivative_step(phi: f64) -> f64 {
    (1e-3 * phi.abs()).max(1e-6)
}

/// Error propagation on an arbitrary probability curve `P(φ)`.
///
/// `degenerate` forces the divergent flag; equal weights leave a probability
/// that is flat up to rounding noise, which finite differences would
/// otherwise turn into a meaningless finite number.
pub fn sensitivity_from_curve<F>(model: PhotonModel, phi: f64, degenerate: bool, curve: F) -> Result<SensitivityResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !phi.is_finite() {
        return Err(QuftiError::NonFinitePhase(phi));
    }
    if phi == 0.0 {
        return Err(QuftiError::ZeroPhase);
    }
    let h = derivative_step(phi);
    let p = curve(phi)?;
    let slope = (curve(phi + h)? - curve(phi - h)?) / (2.0 * h);
    let divergent = degenerate || slope.abs() < DIVERGENCE_THRESHOLD;
    let value = if divergent {
        f64::INFINITY
    } else {
        (p - p * p).max(0.0).sqrt() / slope.abs()
    };
    Ok(SensitivityResult {
        value,
        model,
        method: SensitivityMethod::Numerical,
        phi,
        derivative_step: Some(h),
        divergent,
    })
}

/// `Δφ` from finite differences of the exact permanent probabilities.
pub fn sensitivity_numerical(model: PhotonModel, weights: &WeightVector, phi: f64) -> Result<SensitivityResult> {
    sensitivity_numerical_with(model, weights, phi, Execution::Serial)
}

pub fn sensitivity_numerical_with(
    model: PhotonModel,
    weights: &WeightVector,
    phi: f64,
    execution: Execution,
) -> Result<SensitivityResult> {
    let degenerate = weights.spread() <= DEGENERATE_SPREAD;
    sensitivity_from_curve(model, phi, degenerate, |x| {
        Ok(probability(weights, x, model, ProbabilityMethod::Exact, execution)?.value)
    })
}

/// Small-phase limit: `√(n / (8(Bn - A²)))` for indistinguishable photons,
/// `√(n / (4(Bn - A²)))` for distinguishable ones.
pub fn sensitivity_analytic(model: PhotonModel, moments: &WeightMoments) -> Result<SensitivityResult> {
    let spread = moments.spread();
    if spread <= DEGENERATE_SPREAD {
        return Err(QuftiError::DegenerateWeights { spread });
    }
    let n = moments.n() as f64;
    // Bn - A² = n (B - A²/n)
    let gap = n * spread;
    let denom = match model {
        PhotonModel::Indistinguishable => 8.0 * gap,
        PhotonModel::Distinguishable => 4.0 * gap,
    };
    Ok(SensitivityResult {
        value: (n / denom).sqrt(),
        model,
        method: SensitivityMethod::Analytic,
        phi: 0.0,
        derivative_step: None,
        divergent: false,
    })
}

/// `Δφ(I) / Δφ(D)` from the numerical route; tends to `1/√2` as `φ → 0`.
pub fn sensitivity_ratio(weights: &WeightVector, phi: f64) -> Result<f64> {
    sensitivity_ratio_with(weights, phi, Execution::Serial)
}

pub fn sensitivity_ratio_with(weights: &WeightVector, phi: f64, execution: Execution) -> Result<f64> {
    let indist = sensitivity_numerical_with(PhotonModel::Indistinguishable, weights, phi, execution)?;
    let dist = sensitivity_numerical_with(PhotonModel::Distinguishable, weights, phi, execution)?;
    for r in [&indist, &dist] {
        if r.divergent {
            return Err(QuftiError::DivergentSensitivity { model: r.model.name(), phi });
        }
    }
    Ok(indist.value / dist.value)
}
