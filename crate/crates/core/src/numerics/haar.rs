//! Haar-random unitary matrices.
//!
//! Standard Ginibre + QR construction: fill a matrix with standard complex
//! Gaussians and orthonormalize. Gram-Schmidt is run twice per column, which
//! restores orthogonality to machine precision, and leaves the R diagonal
//! real-positive so no phase fix is needed for Haar correctness.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{CoreError, Result};
use crate::numerics::matrix::{ComplexMatrix, UnitaryMatrix};
use crate::rng::{domain, stream_rng};
use crate::scalar::Real;

/// Haar-distributed random unitary, deterministic in `seed`.
pub fn haar_unitary<T: Real>(dim: usize, seed: u64) -> Result<UnitaryMatrix<T>> {
    if dim == 0 {
        return Err(CoreError::InvalidParameter("haar_unitary needs dim >= 1".into()));
    }
    let mut rng = stream_rng(seed, domain::HAAR, 0);
    let mut z = ComplexMatrix::<T>::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            z[(r, c)] = Complex::new(T::of(re), T::of(im));
        }
    }

    // Column-wise modified Gram-Schmidt with one reorthogonalization pass.
    let mut q = z;
    for col in 0..dim {
        for _pass in 0..2 {
            for prev in 0..col {
                let mut dot = Complex::new(T::zero(), T::zero());
                for r in 0..dim {
                    dot = dot + q[(r, prev)].conj() * q[(r, col)];
                }
                for r in 0..dim {
                    let corr = dot * q[(r, prev)];
                    q[(r, col)] = q[(r, col)] - corr;
                }
            }
        }
        let mut norm_sq = T::zero();
        for r in 0..dim {
            norm_sq = norm_sq + q[(r, col)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm < T::epsilon().sqrt() {
            return Err(CoreError::Numeric(
                "Ginibre draw was numerically rank-deficient".into(),
            ));
        }
        let inv = T::one() / norm;
        for r in 0..dim {
            q[(r, col)] = q[(r, col)].scale(inv);
        }
    }

    UnitaryMatrix::new(q)
}
