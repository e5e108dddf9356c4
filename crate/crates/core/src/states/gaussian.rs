//! Zero-mean Gaussian states over M bosonic modes.
//!
//! The state is its 2M x 2M quadrature covariance matrix, ordered with all
//! x quadratures first: index j is x_j, index M+j is p_j.  hbar = 1, so the
//! vacuum covariance is I/2.  All sources in this crate (squeezed vacuum,
//! thermal) have zero displacement, and linear optics plus loss preserve
//! that, so no mean vector is carried.

use crate::error::{CoreError, Result};
use crate::numerics::{eigen_symmetric, ComplexMatrix, SymmetricMatrix, UnitaryMatrix};
use crate::scalar::Real;
use crate::states::SqueezerSpec;

/// Largest mode count accepted by the full uncertainty-relation check,
/// bounded by the eigensolver capacity (4M <= 64).
pub const UNCERTAINTY_CHECK_MAX_MODES: usize = 16;

/// A zero-displacement Gaussian state: mode count plus quadrature covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState<T: Real> {
    modes: usize,
    cov: SymmetricMatrix<T>,
}

impl<T: Real> GaussianState<T> {
    /// Wrap an existing covariance matrix (dimension must be 2M).
    pub fn from_covariance(modes: usize, cov: SymmetricMatrix<T>) -> Result<Self> {
        if cov.dim() != 2 * modes {
            return Err(CoreError::Dimension(format!(
                "covariance dimension {} does not match 2x{} quadratures",
                cov.dim(),
                modes
            )));
        }
        Ok(Self { modes, cov })
    }

    pub fn vacuum(modes: usize) -> Self {
        let half = T::of(0.5);
        let mut cov = SymmetricMatrix::zeros(2 * modes);
        for i in 0..2 * modes {
            cov.set(i, i, half);
        }
        Self { modes, cov }
    }

    /// Independent single-mode squeezed vacua, one squeezer per mode.
    ///
    /// Mode j gets variance e^{-2r}/2 along the quadrature at angle
    /// phase/2, e^{+2r}/2 along the orthogonal one.
    pub fn smsv_state(specs: &[SqueezerSpec<T>]) -> Result<Self> {
        let modes = specs.len();
        if modes == 0 {
            return Err(CoreError::InvalidParameter(
                "at least one squeezer required".into(),
            ));
        }
        let half = T::of(0.5);
        let mut cov = SymmetricMatrix::zeros(2 * modes);
        for (j, s) in specs.iter().enumerate() {
            let two_r = s.r + s.r;
            let ch = two_r.cosh();
            let sh = two_r.sinh();
            let vxx = half * (ch - sh * s.phase.cos());
            let vpp = half * (ch + sh * s.phase.cos());
            let vxp = half * (sh * s.phase.sin());
            cov.set(j, j, vxx);
            cov.set(modes + j, modes + j, vpp);
            cov.set(j, modes + j, vxp);
        }
        Ok(Self { modes, cov })
    }

    /// Two-mode squeezed vacua on adjacent mode pairs (2i, 2i+1).
    ///
    /// Each pair carries photon-number amplitudes proportional to
    /// tanh(r)^n |n,n>, with thermal marginals of mean sinh^2(r) per mode.
    pub fn tmsv_state(specs: &[SqueezerSpec<T>]) -> Result<Self> {
        let pairs = specs.len();
        if pairs == 0 {
            return Err(CoreError::InvalidParameter(
                "at least one squeezer required".into(),
            ));
        }
        let modes = 2 * pairs;
        let half = T::of(0.5);
        let mut cov = SymmetricMatrix::zeros(2 * modes);
        for (i, s) in specs.iter().enumerate() {
            let (a, b) = (2 * i, 2 * i + 1);
            let two_r = s.r + s.r;
            let ch = half * two_r.cosh();
            let sc = half * two_r.sinh() * s.phase.cos();
            let ss = half * two_r.sinh() * s.phase.sin();
            for &m in &[a, b] {
                cov.set(m, m, ch);
                cov.set(modes + m, modes + m, ch);
            }
            cov.set(a, b, sc);
            cov.set(modes + a, modes + b, -sc);
            cov.set(a, modes + b, ss);
            cov.set(b, modes + a, ss);
        }
        Ok(Self { modes, cov })
    }

    /// Independent thermal modes with the given mean photon numbers.
    pub fn thermal_state(mean_photons: &[T]) -> Result<Self> {
        let modes = mean_photons.len();
        if modes == 0 {
            return Err(CoreError::InvalidParameter(
                "at least one mode required".into(),
            ));
        }
        let half = T::of(0.5);
        let mut cov = SymmetricMatrix::zeros(2 * modes);
        for (j, &n) in mean_photons.iter().enumerate() {
            if !(n >= T::zero()) {
                return Err(CoreError::InvalidParameter(format!(
                    "thermal mean photon number must be non-negative, got {}",
                    n
                )));
            }
            let v = n + half;
            cov.set(j, j, v);
            cov.set(modes + j, modes + j, v);
        }
        Ok(Self { modes, cov })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn covariance(&self) -> &SymmetricMatrix<T> {
        &self.cov
    }

    /// Mean photon number of one mode: (V_xx + V_pp - 1)/2.
    pub fn mean_photons(&self, mode: usize) -> T {
        let m = self.modes;
        (self.cov.get(mode, mode) + self.cov.get(m + mode, m + mode) - T::one()) * T::of(0.5)
    }

    pub fn total_mean_photons(&self) -> T {
        (0..self.modes).map(|j| self.mean_photons(j)).sum()
    }

    /// Apply an interferometer `u` to the listed modes (in that order).
    ///
    /// The symplectic action on quadratures is the real embedding
    /// S = [[Re U, -Im U], [Im U, Re U]], applied as cov -> S cov S^T.
    pub fn apply_unitary(&mut self, u: &UnitaryMatrix<T>, target_modes: &[usize]) -> Result<()> {
        let k = u.dim();
        if target_modes.len() != k {
            return Err(CoreError::Dimension(format!(
                "unitary acts on {} modes but {} target modes given",
                k,
                target_modes.len()
            )));
        }
        let mut seen = vec![false; self.modes];
        for &m in target_modes {
            if m >= self.modes {
                return Err(CoreError::Dimension(format!(
                    "target mode {} out of range for {} modes",
                    m, self.modes
                )));
            }
            if seen[m] {
                return Err(CoreError::InvalidParameter(format!(
                    "target mode {} listed twice",
                    m
                )));
            }
            seen[m] = true;
        }

        let n = 2 * self.modes;
        // Embed u into the full 2M x 2M symplectic matrix.
        let mut s = vec![T::zero(); n * n];
        for i in 0..n {
            s[i * n + i] = T::one();
        }
        for a in 0..k {
            let ra = target_modes[a];
            for b in 0..k {
                let cb = target_modes[b];
                let z = u[(a, b)];
                s[ra * n + cb] = z.re;
                s[ra * n + (self.modes + cb)] = -z.im;
                s[(self.modes + ra) * n + cb] = z.im;
                s[(self.modes + ra) * n + (self.modes + cb)] = z.re;
            }
        }
        // Rows touched by the embedding are exactly the target quadratures;
        // everything else is identity, so compute cov' = S cov S^T densely.
        let mut tmp = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for l in 0..n {
                    let sil = s[i * n + l];
                    if sil != T::zero() {
                        acc += sil * self.cov.get(l, j);
                    }
                }
                tmp[i * n + j] = acc;
            }
        }
        let mut out = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = T::zero();
                for l in 0..n {
                    let sjl = s[j * n + l];
                    if sjl != T::zero() {
                        acc += tmp[i * n + l] * sjl;
                    }
                }
                out.set(i, j, acc);
            }
        }
        self.cov = out;
        Ok(())
    }

    /// Pure loss on every mode: transmission eta_j in [0, 1].
    ///
    /// cov -> sqrt(E) cov sqrt(E) + (I - E)/2 with E = diag(eta) on both
    /// quadrature blocks.
    pub fn apply_loss(&mut self, etas: &[T]) -> Result<()> {
        if etas.len() != self.modes {
            return Err(CoreError::Dimension(format!(
                "{} transmissions given for {} modes",
                etas.len(),
                self.modes
            )));
        }
        for &e in etas {
            if !(e >= T::zero() && e <= T::one()) {
                return Err(CoreError::InvalidParameter(format!(
                    "transmission must lie in [0, 1], got {}",
                    e
                )));
            }
        }
        let m = self.modes;
        let n = 2 * m;
        let sq: Vec<T> = etas.iter().map(|&e| e.sqrt()).collect();
        let half = T::of(0.5);
        let mut out = SymmetricMatrix::zeros(n);
        for i in 0..n {
            let mi = i % m;
            for j in i..n {
                let mj = j % m;
                let mut v = self.cov.get(i, j) * sq[mi] * sq[mj];
                if i == j {
                    v += (T::one() - etas[mi]) * half;
                }
                out.set(i, j, v);
            }
        }
        self.cov = out;
        Ok(())
    }

    /// Reorder modes so that new mode i is old mode `perm[i]`.
    pub fn permute_modes(&mut self, perm: &[usize]) -> Result<()> {
        if perm.len() != self.modes {
            return Err(CoreError::Dimension(format!(
                "permutation length {} does not match {} modes",
                perm.len(),
                self.modes
            )));
        }
        let mut seen = vec![false; self.modes];
        for &p in perm {
            if p >= self.modes || seen[p] {
                return Err(CoreError::InvalidParameter(
                    "mode permutation must visit every mode exactly once".into(),
                ));
            }
            seen[p] = true;
        }
        self.cov = self.reduced_cov(perm);
        Ok(())
    }

    /// Marginal state on the listed modes (partial trace over the rest).
    pub fn trace_out_to(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(CoreError::InvalidParameter(
                "cannot keep zero modes".into(),
            ));
        }
        let mut seen = vec![false; self.modes];
        for &k in keep {
            if k >= self.modes {
                return Err(CoreError::Dimension(format!(
                    "mode {} out of range for {} modes",
                    k, self.modes
                )));
            }
            if seen[k] {
                return Err(CoreError::InvalidParameter(format!(
                    "mode {} listed twice",
                    k
                )));
            }
            seen[k] = true;
        }
        Ok(Self {
            modes: keep.len(),
            cov: self.reduced_cov(keep),
        })
    }

    fn reduced_cov(&self, modes: &[usize]) -> SymmetricMatrix<T> {
        let m = self.modes;
        let idx: Vec<usize> = modes
            .iter()
            .copied()
            .chain(modes.iter().map(|&j| m + j))
            .collect();
        self.cov.select(&idx)
    }

    /// Purity Tr(rho^2) = 1 / (2^M sqrt(det cov)), computed in log space.
    pub fn purity(&self) -> Result<T> {
        let log_det = self.cov.log_det_spd().map_err(|_| {
            CoreError::Numeric("covariance is not positive definite".into())
        })?;
        let m = T::from_usize(self.modes).unwrap();
        let ln_purity = -(m * T::of(2.0).ln() + log_det * T::of(0.5));
        Ok(ln_purity.exp())
    }

    /// True when the state is pure to within numerical tolerance.
    pub fn is_pure(&self) -> Result<bool> {
        let tol = T::of(1e-9).max(T::epsilon() * T::of(100.0));
        Ok((self.purity()? - T::one()).abs() <= tol)
    }

    /// Check the uncertainty relation cov + (i/2) Omega >= 0.
    ///
    /// The Hermitian matrix H = cov + (i/2) Omega is embedded as the real
    /// symmetric [[Re H, -Im H], [Im H, Re H]] (eigenvalues doubled), and the
    /// minimum eigenvalue must be >= -tol.  Errors with `Numeric` when the
    /// covariance is unphysical.
    pub fn validate(&self) -> Result<()> {
        if self.modes > UNCERTAINTY_CHECK_MAX_MODES {
            return Err(CoreError::Capacity(format!(
                "uncertainty check supports at most {} modes, got {}",
                UNCERTAINTY_CHECK_MAX_MODES, self.modes
            )));
        }
        let m = self.modes;
        let n = 2 * m;
        let half = T::of(0.5);
        // Omega maps (x, p) -> (p, -x): Omega[j, M+j] = 1, Omega[M+j, j] = -1.
        // Im H = Omega/2 is antisymmetric, so the embedding below is symmetric.
        let embed = SymmetricMatrix::from_fn(2 * n, |i, j| {
            let (bi, ii) = (i / n, i % n);
            let (bj, jj) = (j / n, j % n);
            if bi == bj {
                self.cov.get(ii, jj)
            } else {
                // off-diagonal blocks hold -Im H (upper) / Im H (lower)
                let sign = if bi == 0 { -T::one() } else { T::one() };
                if ii < m && jj == m + ii {
                    sign * half
                } else if ii >= m && jj == ii - m {
                    -sign * half
                } else {
                    T::zero()
                }
            }
        });
        let (eigs, _) = eigen_symmetric(&embed)?;
        let min = eigs[0];
        let tol = T::of(1e-9).max(T::epsilon() * T::of(1e3) * self.cov.norm_max());
        if min < -tol {
            return Err(CoreError::Numeric(format!(
                "covariance violates the uncertainty relation (min eigenvalue {})",
                min.to64()
            )));
        }
        Ok(())
    }

    /// Husimi covariance sigma_Q = cov + I/2.
    pub(crate) fn sigma_q(&self) -> SymmetricMatrix<T> {
        self.cov.add_scaled_identity(T::of(0.5))
    }

    /// Kernel matrix for photon-number statistics.
    ///
    /// With G = I - sigma_Q^{-1} split into M x M quadrature blocks, the
    /// complex symmetric 2M x 2M kernel is
    ///   A = 1/2 [[Gxx - Gpp - i(Gpx + Gxp),  Gxx + Gpp - i(Gpx - Gxp)],
    ///            [Gxx + Gpp + i(Gpx - Gxp),  Gxx - Gpp + i(Gpx + Gxp)]]
    /// and the probability of pattern m is
    ///   P(m) = Haf(A_m) / (prod_j m_j! * sqrt(det sigma_Q))
    /// where A_m repeats index j and M+j of A m_j times.
    pub(crate) fn number_kernel(&self) -> Result<(ComplexMatrix<T>, T)> {
        let m = self.modes;
        let sq = self.sigma_q();
        let log_det = sq.log_det_spd().map_err(|_| {
            CoreError::Numeric("Husimi covariance is not positive definite".into())
        })?;
        let inv = sq.inverse_spd().map_err(|_| {
            CoreError::Numeric("Husimi covariance is not positive definite".into())
        })?;
        let g = |i: usize, j: usize| {
            let delta = if i == j { T::one() } else { T::zero() };
            delta - inv.get(i, j)
        };
        let half = T::of(0.5);
        let a = ComplexMatrix::from_fn(2 * m, 2 * m, |i, j| {
            let (bi, ii) = (i / m, i % m);
            let (bj, jj) = (j / m, j % m);
            let gxx = g(ii, jj);
            let gpp = g(m + ii, m + jj);
            let gxp = g(ii, m + jj);
            let gpx = g(m + ii, jj);
            let (re, im) = match (bi, bj) {
                (0, 0) => (gxx - gpp, -(gpx + gxp)),
                (0, 1) => (gxx + gpp, -(gpx - gxp)),
                (1, 0) => (gxx + gpp, gpx - gxp),
                _ => (gxx - gpp, gpx + gxp),
            };
            num_complex::Complex::new(re * half, im * half)
        });
        Ok((a, log_det))
    }
}
