//! Matrix permanent.
//!
//! `permanent` is the production path: Glynn's formula with Gray-code
//! iteration over sign vectors, O(2^(n-1) * n) scalar work. `permanent_naive`
//! is the independent oracle: literal sum over all column permutations,
//! kept deliberately dumb so the two routes share no structure.

use num_complex::Complex;

use crate::error::{CoreError, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Largest dimension accepted by [`permanent`].
pub const PERMANENT_MAX_DIM: usize = 24;

/// Largest dimension accepted by [`permanent_naive`].
pub const PERMANENT_NAIVE_MAX_DIM: usize = 8;

/// Permanent of a square matrix via Glynn / Gray code.
///
/// Empty matrix gives 1 (empty product). Dimension is capped at
/// [`PERMANENT_MAX_DIM`]; larger inputs return a capacity error.
pub fn permanent<T: Real>(m: &ComplexMatrix<T>) -> Result<Complex<T>> {
    if !m.is_square() {
        return Err(CoreError::Dimension(format!(
            "permanent needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n > PERMANENT_MAX_DIM {
        return Err(CoreError::Capacity(format!(
            "permanent dimension {} exceeds limit {}",
            n, PERMANENT_MAX_DIM
        )));
    }
    if n == 0 {
        return Ok(Complex::new(T::one(), T::zero()));
    }

    let zero = Complex::new(T::zero(), T::zero());
    let two = T::of(2.0);

    // Column sums for the all-plus sign vector.
    let mut sums: Vec<Complex<T>> = vec![zero; n];
    for j in 0..n {
        for i in 0..n {
            sums[j] = sums[j] + m[(i, j)];
        }
    }
    let mut delta = vec![T::one(); n];
    let mut total = sums.iter().fold(Complex::new(T::one(), T::zero()), |acc, s| acc * *s);
    let mut sign = T::one();

    // Gray-code walk over the remaining 2^(n-1) - 1 sign vectors; delta[0]
    // stays fixed at +1.
    let steps: u64 = 1u64 << (n - 1);
    for k in 1..steps {
        let flip = (k.trailing_zeros() as usize) + 1;
        delta[flip] = -delta[flip];
        let factor = Complex::new(two * delta[flip], T::zero());
        for j in 0..n {
            sums[j] = sums[j] + factor * m[(flip, j)];
        }
        sign = -sign;
        let prod = sums.iter().fold(Complex::new(T::one(), T::zero()), |acc, s| acc * *s);
        total = total + prod.scale(sign);
    }

    let scale = T::of(0.5).powi((n - 1) as i32);
    Ok(total.scale(scale))
}

/// Permanent by explicit permutation enumeration; oracle for [`permanent`].
pub fn permanent_naive<T: Real>(m: &ComplexMatrix<T>) -> Result<Complex<T>> {
    if !m.is_square() {
        return Err(CoreError::Dimension(format!(
            "permanent needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n > PERMANENT_NAIVE_MAX_DIM {
        return Err(CoreError::Capacity(format!(
            "permanent_naive dimension {} exceeds limit {}",
            n, PERMANENT_NAIVE_MAX_DIM
        )));
    }
    fn walk<T: Real>(m: &ComplexMatrix<T>, row: usize, used: &mut [bool]) -> Complex<T> {
        let n = m.rows();
        if row == n {
            return Complex::new(T::one(), T::zero());
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                acc = acc + m[(row, col)] * walk(m, row + 1, used);
                used[col] = false;
            }
        }
        acc
    }
    let mut used = vec![false; n];
    Ok(walk(m, 0, &mut used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{domain, stream_rng};
    use num_complex::Complex;
    use rand::Rng;

    type C = Complex<f64>;

    fn ones(n: usize) -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(n, n, |_, _| Complex::new(1.0, 0.0))
    }

    fn random_matrix(n: usize, seed: u64) -> ComplexMatrix<f64> {
        let mut rng = stream_rng(seed, domain::SYNTHETIC, 17);
        ComplexMatrix::from_fn(n, n, |_, _| {
            Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn all_ones_4x4_is_24() {
        // n! for the all-ones matrix; frozen from the enumeration oracle.
        assert_eq!(permanent_naive(&ones(4)).unwrap(), C::new(24.0, 0.0));
        assert!((permanent(&ones(4)).unwrap() - C::new(24.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn empty_and_identity() {
        let empty = ComplexMatrix::<f64>::zeros(0, 0);
        assert_eq!(permanent(&empty).unwrap(), C::new(1.0, 0.0));
        let id = ComplexMatrix::<f64>::identity(5);
        assert!((permanent(&id).unwrap() - C::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn glynn_matches_naive_on_random_matrices() {
        for n in 1..=6 {
            for s in 0..20 {
                let m = random_matrix(n, s + 100 * n as u64);
                let a = permanent(&m).unwrap();
                let b = permanent_naive(&m).unwrap();
                let scale = b.norm().max(1.0);
                assert!(
                    (a - b).norm() / scale < 1e-12,
                    "dim {n} seed {s}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn row_scaling_is_multilinear() {
        let m = random_matrix(5, 3);
        let mut scaled = m.clone();
        for c in 0..5 {
            scaled[(2, c)] = scaled[(2, c)] * C::new(0.0, 2.0);
        }
        let a = permanent(&m).unwrap() * C::new(0.0, 2.0);
        let b = permanent(&scaled).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn zero_row_kills_permanent() {
        let mut m = random_matrix(4, 9);
        for c in 0..4 {
            m[(1, c)] = C::new(0.0, 0.0);
        }
        assert!(permanent(&m).unwrap().norm() < 1e-13);
    }

    #[test]
    fn capacity_limits_are_enforced() {
        assert!(matches!(
            permanent(&ones(25)),
            Err(crate::error::CoreError::Capacity(_))
        ));
        assert!(matches!(
            permanent_naive(&ones(9)),
            Err(crate::error::CoreError::Capacity(_))
        ));
    }
}
