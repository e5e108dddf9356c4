//! Real symmetric eigensolver: cyclic Jacobi with accumulated rotations.
//!
//! Deterministic, accurate to near machine precision, and entirely adequate
//! for the matrix sizes this crate produces (criterion matrices and
//! covariance checks, dim <= 64).

use crate::error::{CoreError, Result};
use crate::numerics::matrix::SymmetricMatrix;
use crate::scalar::Real;

/// Largest dimension accepted by the Jacobi solver.
pub const EIGEN_MAX_DIM: usize = 64;

/// Full eigendecomposition of a real symmetric matrix.
///
/// Returns eigenvalues in ascending order with matching normalized
/// eigenvectors (one `Vec<T>` per eigenvalue).
pub fn eigen_symmetric<T: Real>(m: &SymmetricMatrix<T>) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = m.dim();
    if n == 0 {
        return Err(CoreError::Dimension("eigendecomposition of empty matrix".into()));
    }
    if n > EIGEN_MAX_DIM {
        return Err(CoreError::Capacity(format!(
            "eigensolver dimension {} exceeds limit {}",
            n, EIGEN_MAX_DIM
        )));
    }

    let mut a = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = m.get(i, j);
        }
    }
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }

    let off = |a: &[T]| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s = s + a[i * n + j] * a[i * n + j];
            }
        }
        s
    };
    let norm = m.norm_max().max(T::one());
    let tol = T::epsilon() * T::epsilon() * norm * norm * T::of((n * n) as f64);

    let max_sweeps = 64;
    let mut sweeps = 0;
    while off(&a) > tol {
        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(CoreError::Numeric(format!(
                "Jacobi did not converge in {} sweeps (off-diagonal {:.3e})",
                max_sweeps,
                off(&a).to64()
            )));
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= T::epsilon() * norm {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (T::of(2.0) * apq);
                let t = {
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let tau = s / (T::one() + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        let new_kp = akp - s * (akq + tau * akp);
                        let new_kq = akq + s * (akp - tau * akq);
                        a[k * n + p] = new_kp;
                        a[p * n + k] = new_kp;
                        a[k * n + q] = new_kq;
                        a[q * n + k] = new_kq;
                    }
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp - s * (vkq + tau * vkp);
                    v[k * n + q] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<T> = order.iter().map(|&i| a[i * n + i]).collect();
    let eigenvectors: Vec<Vec<T>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok((eigenvalues, eigenvectors))
}

/// Smallest eigenvalue and its normalized eigenvector.
pub fn min_eigenvalue_symmetric<T: Real>(m: &SymmetricMatrix<T>) -> Result<(T, Vec<T>)> {
    let (values, vectors) = eigen_symmetric(m)?;
    Ok((values[0], vectors.into_iter().next().expect("dim >= 1")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{domain, stream_rng};
    use rand::Rng;

    fn random_symmetric(dim: usize, seed: u64) -> SymmetricMatrix<f64> {
        let mut rng = stream_rng(seed, domain::SYNTHETIC, 71);
        SymmetricMatrix::from_fn(dim, |_, _| rng.random::<f64>() * 2.0 - 1.0)
    }

    #[test]
    fn diagonal_matrix_eigenvalues_are_sorted_diagonal() {
        let mut m = SymmetricMatrix::zeros(4);
        for (i, d) in [3.0, -1.0, 2.0, 0.5].iter().enumerate() {
            m.set(i, i, *d);
        }
        let (vals, _) = eigen_symmetric(&m).unwrap();
        assert_eq!(vals, vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_exchange_matrix() {
        // [[a, b], [b, a]] has eigenvalues a -+ b.
        let m = SymmetricMatrix::from_rows(2, &[1.5_f64, 2.0, 2.0, 1.5]).unwrap();
        let (vals, vecs) = eigen_symmetric(&m).unwrap();
        assert!((vals[0] - (-0.5)).abs() < 1e-14);
        assert!((vals[1] - 3.5).abs() < 1e-14);
        // Eigenvector of the minimum is (1, -1)/sqrt(2) up to sign.
        let v = &vecs[0];
        assert!((v[0] + v[1]).abs() < 1e-12);
        assert!((v[0].hypot(v[1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn residual_meets_contract_on_random_matrices() {
        for dim in [2usize, 5, 8, 16, 33] {
            let m = random_symmetric(dim, dim as u64);
            let (vals, vecs) = eigen_symmetric(&m).unwrap();
            let scale = m.norm_max();
            for (lambda, v) in vals.iter().zip(vecs.iter()) {
                for i in 0..dim {
                    let mut mv = 0.0;
                    for j in 0..dim {
                        mv += m.get(i, j) * v[j];
                    }
                    assert!(
                        (mv - lambda * v[i]).abs() <= 1e-8 * scale.max(1.0),
                        "dim {dim} residual too large"
                    );
                }
            }
        }
    }

    #[test]
    fn shift_invariance_of_min_eigenvalue() {
        let m = random_symmetric(8, 99);
        let (lo, _) = min_eigenvalue_symmetric(&m).unwrap();
        let shifted = m.add_scaled_identity(2.75);
        let (lo2, _) = min_eigenvalue_symmetric(&shifted).unwrap();
        assert!((lo2 - (lo + 2.75)).abs() < 1e-10);
    }

    #[test]
    fn matches_external_eigensolver() {
        for dim in [3usize, 8, 12] {
            let m = random_symmetric(dim, 1000 + dim as u64);
            let (vals, _) = eigen_symmetric(&m).unwrap();
            let mut dm = nalgebra::DMatrix::<f64>::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    dm[(i, j)] = m.get(i, j);
                }
            }
            let mut reference: Vec<f64> = dm.symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in vals.iter().zip(reference.iter()) {
                assert!((a - b).abs() < 1e-9, "dim {dim}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn dimension_cap() {
        let m = SymmetricMatrix::<f64>::identity(65);
        assert!(matches!(eigen_symmetric(&m), Err(CoreError::Capacity(_))));
    }
}
