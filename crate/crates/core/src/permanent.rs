//! Matrix permanents.
//!
//! Two exact routes are provided: a direct sum over all permutations, usable
//! up to n = 10, and Ryser's inclusion-exclusion formula walked in Gray-code
//! order so that each subset differs from its predecessor by one column,
//!
//! ```text
//! perm(M) = (-1)^n Σ_{S ⊆ cols} (-1)^|S| Π_i Σ_{j ∈ S} M[i][j]
//! ```
//!
//! which costs O(2^n · n). A third, approximate route keeps only the identity
//! permutation and the transpositions of the small-phase interferometer
//! expansion.

use ndarray::Array2;
use num_complex::Complex64;
use num_traits::NumAssign;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QuftiError, Result};
use crate::interferometer::{QuftiUnitary, WeightMoments};

pub const NAIVE_MAX_N: usize = 10;
pub const RYSER_MAX_N: usize = 30;

/// Number of Gray-code segments in parallel mode. Fixed so the summation
/// order, and therefore the result, does not depend on the thread count.
const PARALLEL_SEGMENTS: u64 = 256;

/// Below this size the parallel path falls back to the serial loop.
const PARALLEL_MIN_N: usize = 12;

pub trait PermanentScalar: NumAssign + Copy + Send + Sync {}

impl<T: NumAssign + Copy + Send + Sync> PermanentScalar for T {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermanentMethod {
    Ryser,
    Naive,
    TruncatedSigma2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Serial,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermanentValue {
    pub value: Complex64,
    pub method: PermanentMethod,
    pub n: usize,
}

fn check_square<T>(m: &Array2<T>, method: &'static str, max: usize) -> Result<usize> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(QuftiError::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(QuftiError::EmptyInterferometer(0));
    }
    if rows > max {
        return Err(QuftiError::SizeLimit { method, n: rows, max });
    }
    Ok(rows)
}

/// Sum over every permutation of `Π_i M[i][σ(i)]`, enumerated depth-first.
pub fn permanent_naive<T: PermanentScalar>(m: &Array2<T>) -> Result<T> {
    let n = check_square(m, "naive", NAIVE_MAX_N)?;

    fn descend<T: PermanentScalar>(m: &Array2<T>, row: usize, used: u32, prefix: T) -> T {
        let n = m.nrows();
        if row == n {
            return prefix;
        }
        let mut acc = T::zero();
        for col in 0..n {
            if used & (1 << col) == 0 {
                acc += descend(m, row + 1, used | (1 << col), prefix * m[[row, col]]);
            }
        }
        acc
    }

    debug_assert!(n <= 32);
    Ok(descend(m, 0, 0, T::one()))
}

pub fn permanent_ryser<T: PermanentScalar>(m: &Array2<T>) -> Result<T> {
    permanent_ryser_with(m, Execution::Serial)
}

pub fn permanent_ryser_with<T: PermanentScalar>(m: &Array2<T>, execution: Execution) -> Result<T> {
    let n = check_square(m, "Ryser", RYSER_MAX_N)?;
    let steps = 1u64 << n;

    let signed_sum = match execution {
        Execution::Parallel if n >= PARALLEL_MIN_N => {
            let segment = steps.div_ceil(PARALLEL_SEGMENTS);
            let parts: Vec<T> = (0..PARALLEL_SEGMENTS)
                .into_par_iter()
                .map(|s| {
                    let lo = (s * segment).max(1);
                    let hi = ((s + 1) * segment).min(steps);
                    if lo >= hi { T::zero() } else { ryser_segment(m, lo, hi) }
                })
                .collect();
            parts.into_iter().fold(T::zero(), |acc, x| acc + x)
        }
        _ => ryser_segment(m, 1, steps),
    };

    Ok(if n % 2 == 1 { T::zero() - signed_sum } else { signed_sum })
}

/// Signed contribution `Σ (-1)^|S| Π_i rowsum_i(S)` for Gray-code steps `lo..hi`.
fn ryser_segment<T: PermanentScalar>(m: &Array2<T>, lo: u64, hi: u64) -> T {
    let n = m.nrows();
    let gray = |k: u64| k ^ (k >> 1);

    // Row sums for the subset reached just before `lo`.
    let start = gray(lo - 1);
    let mut row_sums = vec![T::zero(); n];
    for (i, sum) in row_sums.iter_mut().enumerate() {
        for j in 0..n {
            if start & (1 << j) != 0 {
                *sum += m[[i, j]];
            }
        }
    }

    let mut acc = T::zero();
    for k in lo..hi {
        let col = k.trailing_zeros() as usize;
        let subset = gray(k);
        if subset & (1 << col) != 0 {
            for (i, sum) in row_sums.iter_mut().enumerate() {
                *sum += m[[i, col]];
            }
        } else {
            for (i, sum) in row_sums.iter_mut().enumerate() {
                *sum -= m[[i, col]];
            }
        }
        let prod = row_sums.iter().fold(T::one(), |p, &x| p * x);
        if subset.count_ones() % 2 == 1 {
            acc -= prod;
        } else {
            acc += prod;
        }
    }
    acc
}

/// Identity plus transposition contributions to `perm(U)` for small phases.
///
/// The identity term is `(1 + iφA/n - φ²B/(2n))^n`. Each transposition of
/// outputs `j, k` contributes the same diagonal factor to the power `n - 2`
/// times `ε_jk ε_kj`, with `ε_jk = iφ C_jk / n - φ² D_jk / (2n)`. Agreement
/// with the exact permanent is to third order in φ.
pub fn permanent_truncated(u: &QuftiUnitary, moments: &WeightMoments) -> Result<PermanentValue> {
    let n = u.n();
    if moments.n() != n {
        return Err(QuftiError::MomentMismatch { moments: moments.n(), unitary: n });
    }
    let phi = u.phi();
    let nf = n as f64;
    let i = Complex64::i();

    let diagonal = Complex64::new(1.0, 0.0) + i * (phi * moments.linear_sum() / nf)
        - phi * phi * moments.square_sum() / (2.0 * nf);
    let identity = diagonal.powu(n as u32);

    let value = if n < 2 {
        identity
    } else {
        let c = moments.linear_spectrum();
        let d = moments.square_spectrum();
        let eps = |j: usize, k: usize| i * (phi / nf) * c[[j, k]] - (phi * phi / (2.0 * nf)) * d[[j, k]];
        let mut swaps = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for k in (j + 1)..n {
                swaps += eps(j, k) * eps(k, j);
            }
        }
        identity + diagonal.powu(n as u32 - 2) * swaps
    };

    Ok(PermanentValue { value, method: PermanentMethod::TruncatedSigma2, n })
}

/// Exact complex permanent through the chosen algorithm.
pub fn permanent(m: &Array2<Complex64>, method: PermanentMethod) -> Result<PermanentValue> {
    let value = match method {
        PermanentMethod::Ryser => permanent_ryser(m)?,
        PermanentMethod::Naive => permanent_naive(m)?,
        PermanentMethod::TruncatedSigma2 => {
            return Err(QuftiError::InvalidConfig(
                "the truncated permanent is defined only for interferometer matrices".into(),
            ))
        }
    };
    Ok(PermanentValue { value, method, n: m.nrows() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{build_unitary, WeightVector};
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Array2<Complex64> {
        Array2::from_shape_fn((n, n), |_| c(rng.gen(), rng.gen()))
    }

    #[test]
    fn naive_definition_cases() {
        for n in 1..=6 {
            let id: Array2<f64> = Array2::eye(n);
            assert_eq!(permanent_naive(&id).unwrap(), 1.0);
            let ones: Array2<f64> = Array2::ones((n, n));
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            assert_eq!(permanent_naive(&ones).unwrap(), fact);
        }
        let m = array![[c(1.0, 2.0), c(-0.5, 0.0)], [c(3.0, -1.0), c(0.25, 4.0)]];
        let expected = m[[0, 0]] * m[[1, 1]] + m[[0, 1]] * m[[1, 0]];
        assert!((permanent_naive(&m).unwrap() - expected).norm() < 1e-15);
    }

    #[test]
    fn size_guards() {
        let big: Array2<f64> = Array2::eye(11);
        assert!(matches!(
            permanent_naive(&big),
            Err(QuftiError::SizeLimit { n: 11, max: 10, .. })
        ));
        let huge: Array2<f64> = Array2::eye(31);
        assert!(matches!(
            permanent_ryser(&huge),
            Err(QuftiError::SizeLimit { n: 31, max: 30, .. })
        ));
        let rect: Array2<f64> = Array2::zeros((2, 3));
        assert!(matches!(permanent_ryser(&rect), Err(QuftiError::NotSquare { .. })));
        let empty: Array2<f64> = Array2::zeros((0, 0));
        assert!(permanent_ryser(&empty).is_err());
    }

    #[test]
    fn ryser_known_values() {
        let id: Array2<f64> = Array2::eye(8);
        assert_eq!(permanent_ryser(&id).unwrap(), 1.0);
        let ones: Array2<f64> = Array2::ones((5, 5));
        assert!((permanent_ryser(&ones).unwrap() - 120.0).abs() < 1e-12);
        let single = array![[c(0.3, -0.7)]];
        assert_eq!(permanent_ryser(&single).unwrap(), c(0.3, -0.7));
    }

    #[test]
    fn ryser_matches_naive_on_random_7x7() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 7);
            let exact = permanent_naive(&m).unwrap();
            let fast = permanent_ryser(&m).unwrap();
            assert!((fast - exact).norm() / exact.norm() < 1e-9);
        }
    }

    #[test]
    fn parallel_agrees_with_serial_and_is_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix(&mut rng, 14);
        let serial = permanent_ryser(&m).unwrap();
        let par = permanent_ryser_with(&m, Execution::Parallel).unwrap();
        assert!((serial - par).norm() <= 1e-10 * serial.norm());
        let again = permanent_ryser_with(&m, Execution::Parallel).unwrap();
        assert_eq!(par, again);
    }

    #[test]
    fn truncated_at_zero_phase_is_one() {
        let w = WeightVector::new(vec![1.0, -2.0, 0.5, 4.0]).unwrap();
        let u = build_unitary(&w, 0.0).unwrap();
        let t = permanent_truncated(&u, &w.moments()).unwrap();
        assert_eq!(t.value, c(1.0, 0.0));
        assert_eq!(t.method, PermanentMethod::TruncatedSigma2);
    }

    #[test]
    fn truncated_single_mode() {
        let w = WeightVector::new(vec![2.5]).unwrap();
        let phi = 0.1;
        let u = build_unitary(&w, phi).unwrap();
        let t = permanent_truncated(&u, &w.moments()).unwrap();
        let expected = c(1.0 - phi * phi * 6.25 / 2.0, phi * 2.5);
        assert!((t.value - expected).norm() < 1e-15);
    }

    #[test]
    fn truncated_rejects_mismatched_moments() {
        let u = build_unitary(&WeightVector::linear(3).unwrap(), 0.1).unwrap();
        let m = WeightVector::linear(4).unwrap().moments();
        assert!(matches!(
            permanent_truncated(&u, &m),
            Err(QuftiError::MomentMismatch { moments: 4, unitary: 3 })
        ));
    }

    #[test]
    fn truncated_error_is_third_order() {
        let w = WeightVector::linear(3).unwrap();
        let m = w.moments();
        let err = |phi: f64| {
            let u = build_unitary(&w, phi).unwrap();
            let exact = permanent_ryser(u.matrix()).unwrap();
            (exact - permanent_truncated(&u, &m).unwrap().value).norm()
        };
        let errs: Vec<f64> = [1e-3, 5e-4, 2.5e-4].iter().map(|&p| err(p)).collect();
        for pair in errs.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!((6.0..=10.0).contains(&ratio), "ratio {ratio}");
        }
        // err / φ³ stays bounded
        let scaled: Vec<f64> = errs.iter().zip([1e-3, 5e-4, 2.5e-4]).map(|(e, p)| e / (p * p * p)).collect();
        assert!(scaled.iter().all(|s| (scaled[0] - s).abs() < 0.05 * scaled[0]));
    }
}
