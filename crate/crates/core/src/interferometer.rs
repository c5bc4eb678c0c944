//! Construction of the Fourier-transform interferometer `U = V Φ V†`.
//!
//! `V` is the n-mode discrete Fourier transform and `Φ` a diagonal layer of
//! phases `exp(i φ f_j)`. Because `Φ` is diagonal the product is circulant,
//! so every element is evaluated directly from
//!
//! ```text
//! U[j][k] = (1/n) Σ_l ω^((j-k) l) exp(i φ f_l),   ω = exp(2πi/n)
//! ```
//!
//! with only `n` distinct values, one per offset `(j - k) mod n`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QuftiError, Result};

/// Absolute tolerance on `max |U†U - I|` and on the row/column sums of `T`.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Per-channel phase weight factors `f_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector {
    factors: Vec<f64>,
}

impl WeightVector {
    pub fn new(factors: Vec<f64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(QuftiError::EmptyInterferometer(0));
        }
        if let Some((index, &value)) = factors.iter().enumerate().find(|(_, f)| !f.is_finite()) {
            return Err(QuftiError::NonFiniteWeight { index, value });
        }
        Ok(Self { factors })
    }

    /// `f_j = value` for every channel.
    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    /// `f_j = j` for `j = 1..=n`.
    pub fn linear(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|j| j as f64).collect())
    }

    /// `f_j = j - 1` for `j = 1..=n`.
    pub fn index0(n: usize) -> Result<Self> {
        Self::new((0..n).map(|j| j as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.factors
    }

    pub fn max_abs(&self) -> f64 {
        self.factors.iter().fold(0.0, |m, f| m.max(f.abs()))
    }

    /// Every factor offset by `offset`; this only multiplies `U` by a global phase.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(self.factors.iter().map(|f| f + offset).collect())
    }

    /// `B - A²/n`, summed in centered form so equal weights give exactly zero.
    pub fn spread(&self) -> f64 {
        let mean = self.factors.iter().sum::<f64>() / self.factors.len() as f64;
        self.factors.iter().map(|x| (x - mean) * (x - mean)).sum()
    }

    pub fn moments(&self) -> WeightMoments {
        WeightMoments::from_weights(self)
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = QuftiError;

    fn try_from(factors: Vec<f64>) -> Result<Self> {
        Self::new(factors)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.factors
    }
}

/// Table of the n-th roots of unity, indexed by exponent mod n.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    table: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(n: usize) -> Self {
        let table = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
            .collect();
        Self { table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    /// `ω^exponent` with the exponent reduced mod n.
    pub fn pow(&self, exponent: i64) -> Complex64 {
        let n = self.table.len() as i64;
        self.table[exponent.rem_euclid(n) as usize]
    }
}

/// Offset `(j - k) mod n` for 0-based indices.
#[inline]
fn offset(j: usize, k: usize, n: usize) -> usize {
    (j + n - k) % n
}

/// Expand a length-n vector indexed by offset into the full circulant matrix.
fn circulant(by_offset: &[Complex64]) -> Array2<Complex64> {
    let n = by_offset.len();
    Array2::from_shape_fn((n, n), |(j, k)| by_offset[offset(j, k, n)])
}

/// `Σ_l ω^(d l) g_l` for every offset `d`.
fn fourier_sums(roots: &RootsOfUnity, values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    (0..n)
        .map(|d| {
            values
                .iter()
                .enumerate()
                .map(|(l, v)| roots.pow((d * l) as i64) * v)
                .sum()
        })
        .collect()
}

/// Sums of the weight factors that control the small-phase expansion of `U`.
///
/// `linear_sum` is `A = Σ f_j`, `square_sum` is `B = Σ f_j²`. The spectra are
/// `C[j][k] = Σ_l ω^((j-k) l) f_l` and `D[j][k] = Σ_l ω^((j-k) l) f_l²`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMoments {
    n: usize,
    linear_sum: f64,
    square_sum: f64,
    spread: f64,
    linear_spectrum: Array2<Complex64>,
    square_spectrum: Array2<Complex64>,
}

impl WeightMoments {
    pub fn from_weights(weights: &WeightVector) -> Self {
        let f = weights.as_slice();
        let n = f.len();
        let roots = RootsOfUnity::new(n);

        let linear_sum: f64 = f.iter().sum();
        let square_sum: f64 = f.iter().map(|x| x * x).sum();
        let spread = weights.spread();

        let lin: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let sq: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x * x, 0.0)).collect();

        Self {
            n,
            linear_sum,
            square_sum,
            spread,
            linear_spectrum: circulant(&fourier_sums(&roots, &lin)),
            square_spectrum: circulant(&fourier_sums(&roots, &sq)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `A = Σ f_j`.
    pub fn linear_sum(&self) -> f64 {
        self.linear_sum
    }

    /// `B = Σ f_j²`.
    pub fn square_sum(&self) -> f64 {
        self.square_sum
    }

    /// `B - A²/n`, the coefficient that sets the second-order probability loss.
    pub fn spread(&self) -> f64 {
        self.spread
    }

    /// `C`.
    pub fn linear_spectrum(&self) -> &Array2<Complex64> {
        &self.linear_spectrum
    }

    /// `D`.
    pub fn square_spectrum(&self) -> &Array2<Complex64> {
        &self.square_spectrum
    }
}

/// The n-mode discrete Fourier transform `V[j][k] = n^(-1/2) ω^(j k)` (0-based).
pub fn build_fourier(n: usize) -> Result<Array2<Complex64>> {
    if n == 0 {
        return Err(QuftiError::EmptyInterferometer(n));
    }
    let roots = RootsOfUnity::new(n);
    let norm = 1.0 / (n as f64).sqrt();
    Ok(Array2::from_shape_fn((n, n), |(j, k)| {
        roots.pow((j * k) as i64) * norm
    }))
}

/// Interferometer matrix for a given phase and weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QuftiUnitary {
    phi: f64,
    weights: WeightVector,
    matrix: Array2<Complex64>,
}

impl QuftiUnitary {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn moments(&self) -> WeightMoments {
        self.weights.moments()
    }

    /// `max |U†U - I|` over all elements.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() < UNITARITY_TOLERANCE
    }

    pub fn distinguishable(&self) -> DistinguishableMatrix {
        build_distinguishable_matrix(self)
    }

    /// Adds `delta` to one element. Used by the verification suite as a
    /// negative control for the unitarity check.
    #[doc(hidden)]
    pub fn perturb_element(&mut self, j: usize, k: usize, delta: Complex64) {
        self.matrix[[j, k]] += delta;
    }
}

/// `max |M†M - I|` for a square complex matrix.
pub fn unitarity_defect(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let dot: Complex64 = (0..n).map(|r| m[[r, a]].conj() * m[[r, b]]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

pub fn build_unitary(weights: &WeightVector, phi: f64) -> Result<QuftiUnitary> {
    if !phi.is_finite() {
        return Err(QuftiError::NonFinitePhase(phi));
    }
    let n = weights.len();
    let roots = RootsOfUnity::new(n);
    let phases: Vec<Complex64> = weights
        .as_slice()
        .iter()
        .map(|&f| Complex64::from_polar(1.0, phi * f))
        .collect();
    let scale = 1.0 / n as f64;
    let by_offset: Vec<Complex64> = fourier_sums(&roots, &phases)
        .into_iter()
        .map(|s| s * scale)
        .collect();
    Ok(QuftiUnitary {
        phi,
        weights: weights.clone(),
        matrix: circulant(&by_offset),
    })
}

/// Single-photon transition probabilities `T[j][k] = |U[j][k]|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishableMatrix {
    phi: f64,
    weights: WeightVector,
    matrix: Array2<f64>,
}

impl DistinguishableMatrix {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.matrix.rows().into_iter().map(|r| r.sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        self.matrix.columns().into_iter().map(|c| c.sum()).collect()
    }

    /// Largest deviation of any row or column sum from 1.
    pub fn stochasticity_defect(&self) -> f64 {
        self.row_sums()
            .into_iter()
            .chain(self.column_sums())
            .fold(0.0, |m, s| m.max((s - 1.0).abs()))
    }
}

pub fn build_distinguishable_matrix(u: &QuftiUnitary) -> DistinguishableMatrix {
    DistinguishableMatrix {
        phi: u.phi,
        weights: u.weights.clone(),
        matrix: u.matrix.mapv(|z| z.norm_sqr()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent route: V · Φ · V† as explicit matrix products.
    fn triple_product(weights: &WeightVector, phi: f64) -> Array2<Complex64> {
        let n = weights.len();
        let v = build_fourier(n).unwrap();
        let mut phase = Array2::<Complex64>::zeros((n, n));
        for (j, &f) in weights.as_slice().iter().enumerate() {
            phase[[j, j]] = Complex64::from_polar(1.0, phi * f);
        }
        let v_dag = v.t().mapv(|z| z.conj());
        v.dot(&phase).dot(&v_dag)
    }

    fn max_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
    }

    #[test]
    fn fourier_small_cases() {
        let v1 = build_fourier(1).unwrap();
        assert_eq!(v1, array![[c(1.0, 0.0)]]);

        let v2 = build_fourier(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let expected = array![[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]];
        assert!(max_diff(&v2, &expected) < 1e-15);

        assert!(unitarity_defect(&build_fourier(4).unwrap()) < 1e-12);
    }

    #[test]
    fn fourier_rejects_zero_modes() {
        assert!(matches!(
            build_fourier(0),
            Err(QuftiError::EmptyInterferometer(0))
        ));
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![]).is_err());
        let err = WeightVector::new(vec![1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, QuftiError::NonFiniteWeight { index: 1, .. }));
        assert_eq!(WeightVector::index0(3).unwrap().as_slice(), &[0.0, 1.0, 2.0]);
        assert_eq!(WeightVector::linear(3).unwrap().as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_mode_unitary_by_hand() {
        let w = WeightVector::new(vec![0.0, 1.0]).unwrap();
        for &phi in &[0.0, 0.3, -1.2, 2.9] {
            let u = build_unitary(&w, phi).unwrap();
            let e = Complex64::from_polar(1.0, phi);
            let diag = (1.0 + e) / 2.0;
            let off = (1.0 - e) / 2.0;
            let m = u.matrix();
            assert!((m[[0, 0]] - diag).norm() < 1e-15);
            assert!((m[[1, 1]] - diag).norm() < 1e-15);
            assert!((m[[0, 1]] - off).norm() < 1e-15);
            assert!((m[[1, 0]] - off).norm() < 1e-15);
            assert!(max_diff(m, &triple_product(&w, phi)) < 1e-14);
        }
    }

    #[test]
    fn zero_phase_is_identity() {
        for n in 1..=9 {
            let w = WeightVector::new((0..n).map(|j| (j as f64).sin() * 4.0).collect()).unwrap();
            let u = build_unitary(&w, 0.0).unwrap();
            let id = Array2::from_shape_fn((n, n), |(j, k)| {
                if j == k { c(1.0, 0.0) } else { c(0.0, 0.0) }
            });
            assert!(max_diff(u.matrix(), &id) < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn matches_triple_product_oracle() {
        let w = WeightVector::linear(3).unwrap();
        let u = build_unitary(&w, 0.01).unwrap();
        assert!(max_diff(u.matrix(), &triple_product(&w, 0.01)) < 1e-12);
    }

    #[test]
    fn rejects_non_finite_phase() {
        let w = WeightVector::linear(2).unwrap();
        assert!(build_unitary(&w, f64::INFINITY).is_err());
        assert!(build_unitary(&w, f64::NAN).is_err());
    }

    #[test]
    fn moments_small_cases() {
        let m = WeightVector::new(vec![0.0, 1.0]).unwrap().moments();
        assert_eq!(m.linear_sum(), 1.0);
        assert_eq!(m.square_sum(), 1.0);

        let m = WeightVector::new(vec![1.0, 2.0]).unwrap().moments();
        assert_eq!(m.linear_sum(), 3.0);
        assert_eq!(m.square_sum(), 5.0);
        assert!((m.linear_spectrum()[[0, 1]] - c(-1.0, 0.0)).norm() < 1e-15);
        assert_abs_diff_eq!(m.spread(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn moment_diagonals_and_constant_weights() {
        let w = WeightVector::new(vec![0.5, -2.0, 3.25, 1.0, 7.0]).unwrap();
        let m = w.moments();
        for j in 0..5 {
            assert!((m.linear_spectrum()[[j, j]] - m.linear_sum()).norm() < 1e-12);
            assert!((m.square_spectrum()[[j, j]] - m.square_sum()).norm() < 1e-12);
        }

        let m = WeightVector::constant(6, 2.5).unwrap().moments();
        assert_eq!(m.spread(), 0.0);
        for j in 0..6 {
            for k in 0..6 {
                if j != k {
                    assert!(m.linear_spectrum()[[j, k]].norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn distinguishable_two_mode() {
        let w = WeightVector::new(vec![0.0, 1.0]).unwrap();
        let phi = 0.7;
        let t = build_unitary(&w, phi).unwrap().distinguishable();
        let (cs, sn) = ((phi / 2.0).cos(), (phi / 2.0).sin());
        assert_abs_diff_eq!(t.matrix()[[0, 0]], cs * cs, epsilon = 1e-15);
        assert_abs_diff_eq!(t.matrix()[[1, 1]], cs * cs, epsilon = 1e-15);
        assert_abs_diff_eq!(t.matrix()[[0, 1]], sn * sn, epsilon = 1e-15);
        assert_abs_diff_eq!(t.matrix()[[1, 0]], sn * sn, epsilon = 1e-15);

        let t0 = build_unitary(&w, 0.0).unwrap().distinguishable();
        assert_abs_diff_eq!(t0.matrix()[[0, 0]], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t0.matrix()[[0, 1]], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn perturbation_breaks_unitarity() {
        let mut u = build_unitary(&WeightVector::linear(4).unwrap(), 0.2).unwrap();
        assert!(u.is_unitary());
        u.perturb_element(1, 2, c(1e-3, 0.0));
        assert!(!u.is_unitary());
    }

    #[test]
    fn roots_reduce_negative_exponents() {
        let r = RootsOfUnity::new(5);
        assert_eq!(r.pow(-1), r.pow(4));
        assert_eq!(r.pow(12), r.pow(2));
        assert_eq!(r.order(), 5);
    }
}
