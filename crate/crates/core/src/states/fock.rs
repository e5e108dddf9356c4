//! Photon-number statistics of Gaussian states.
//!
//! Probabilities come from hafnians of the state's number kernel A:
//!   P(m) = Haf(A_m) / (prod_j m_j! * sqrt(det sigma_Q))
//! with A_m the submatrix that repeats indices (j, M+j) of A m_j times.
//! For pure states A decouples into [[B, 0], [0, conj(B)]], so
//! Haf(A_m) = |Haf(B_m)|^2 and only the M x M block is needed.

use crate::error::{CoreError, Result};
use crate::numerics::{hafnian_box, ln_factorial, ComplexMatrix};
use crate::scalar::Real;
use crate::states::{GaussianState, PhotonPattern};

/// Largest total photon count accepted per pattern.
pub const FOCK_TOTAL_MAX: u32 = 30;

/// Ceiling on enumerated patterns (and on hafnian-table states) in a
/// full-distribution computation: (cutoff + 1)^modes must stay below this.
pub const FOCK_PATTERN_BUDGET: usize = 10_000_000;

/// Photon-number distribution truncated at `cutoff` photons per mode.
#[derive(Debug, Clone)]
pub struct FockDistribution<T: Real> {
    pub cutoff: u32,
    /// All patterns with every count <= cutoff, mode 0 varying fastest.
    pub patterns: Vec<PhotonPattern>,
    pub probabilities: Vec<T>,
    /// Probability of any outcome outside the cutoff box.
    pub overflow_mass: T,
}

/// Precomputed kernel for repeated probability queries on one state.
pub(crate) struct NumberKernel<T: Real> {
    modes: usize,
    a: ComplexMatrix<T>,
    /// Set when the state is pure and the kernel decouples.
    pure_b: Option<ComplexMatrix<T>>,
    half_log_det: T,
}

impl<T: Real> NumberKernel<T> {
    pub fn new(state: &GaussianState<T>) -> Result<Self> {
        state.validate()?;
        let m = state.modes();
        let (a, log_det) = state.number_kernel()?;
        let pure_b = if state.is_pure()? {
            // The cross blocks must vanish for the pure factorization; check
            // rather than trust the purity estimate alone.
            let mut cross = T::zero();
            let mut scale = T::one();
            for i in 0..m {
                for j in 0..m {
                    cross = cross.max(a[(i, m + j)].norm_sqr().sqrt());
                    scale = scale.max(a[(i, j)].norm_sqr().sqrt());
                }
            }
            if cross <= T::of(1e-8) * scale {
                Some(ComplexMatrix::from_fn(m, m, |i, j| a[(i, j)]))
            } else {
                None
            }
        } else {
            None
        };
        Ok(Self {
            modes: m,
            a,
            pure_b,
            half_log_det: log_det * T::of(0.5),
        })
    }

    fn ln_norm(&self, counts: &[u32]) -> T {
        let mut s = -self.half_log_det;
        for &c in counts {
            s -= T::of(ln_factorial(c));
        }
        s
    }

    fn finish(&self, raw: T) -> Result<T> {
        if raw < T::zero() {
            if raw >= T::of(-1e-9) {
                return Ok(T::zero());
            }
            return Err(CoreError::Numeric(format!(
                "probability computed as {}, below the negative-roundoff floor",
                raw.to64()
            )));
        }
        if raw > T::one() + T::of(1e-6) {
            return Err(CoreError::Numeric(format!(
                "probability computed as {}, above 1",
                raw.to64()
            )));
        }
        Ok(raw.min(T::one()))
    }

    /// Probability of a single photon-number pattern.
    pub fn probability(&self, pattern: &PhotonPattern) -> Result<T> {
        if pattern.modes() != self.modes {
            return Err(CoreError::Dimension(format!(
                "pattern has {} modes, state has {}",
                pattern.modes(),
                self.modes
            )));
        }
        let total = pattern.total();
        if total > FOCK_TOTAL_MAX {
            return Err(CoreError::Capacity(format!(
                "pattern total {} exceeds the supported maximum {}",
                total, FOCK_TOTAL_MAX
            )));
        }
        let norm = self.ln_norm(pattern.counts()).exp();
        let raw = match &self.pure_b {
            Some(b) => {
                let table = hafnian_box(b, pattern.counts(), FOCK_PATTERN_BUDGET)?;
                table.get(pattern.counts()).norm_sqr() * norm
            }
            None => {
                let mult: Vec<u32> = pattern
                    .counts()
                    .iter()
                    .chain(pattern.counts().iter())
                    .copied()
                    .collect();
                let table = hafnian_box(&self.a, &mult, FOCK_PATTERN_BUDGET)?;
                let h = table.get(&mult);
                let bound = T::of(1e-8) * T::one().max(h.re.abs());
                if h.im.abs() > bound {
                    return Err(CoreError::Numeric(format!(
                        "hafnian of a number kernel should be real, got imaginary part {}",
                        h.im.to64()
                    )));
                }
                h.re * norm
            }
        };
        self.finish(raw)
    }

    /// Probabilities of every pattern in the cutoff box, plus overflow mass.
    pub fn distribution(&self, cutoff: u32) -> Result<FockDistribution<T>> {
        let per_mode = cutoff as usize + 1;
        let mut n_patterns: usize = 1;
        for _ in 0..self.modes {
            n_patterns = n_patterns
                .checked_mul(per_mode)
                .filter(|&n| n <= FOCK_PATTERN_BUDGET)
                .ok_or_else(|| {
                    CoreError::Budget(format!(
                        "distribution needs ({}+1)^{} patterns, limit {}; lower the cutoff",
                        cutoff, self.modes, FOCK_PATTERN_BUDGET
                    ))
                })?;
        }

        let caps = vec![cutoff; self.modes];
        let probabilities: Vec<T> = match &self.pure_b {
            Some(b) => {
                let table = hafnian_box(b, &caps, FOCK_PATTERN_BUDGET)?;
                self.walk_box(cutoff, n_patterns, |counts| {
                    Ok(table.get(counts).norm_sqr() * self.ln_norm(counts).exp())
                })?
            }
            None => {
                // The doubled kernel needs (cutoff+1)^(2M) table entries, so
                // mixed-state distributions hit the budget sooner than pure.
                let caps2: Vec<u32> = caps.iter().chain(caps.iter()).copied().collect();
                let table = hafnian_box(&self.a, &caps2, FOCK_PATTERN_BUDGET)?;
                let mut doubled = vec![0u32; 2 * self.modes];
                self.walk_box(cutoff, n_patterns, |counts| {
                    doubled[..self.modes].copy_from_slice(counts);
                    doubled[self.modes..].copy_from_slice(counts);
                    let h = table.get(&doubled);
                    let bound = T::of(1e-8) * T::one().max(h.re.abs());
                    if h.im.abs() > bound {
                        return Err(CoreError::Numeric(
                            "hafnian of a number kernel should be real".into(),
                        ));
                    }
                    Ok(h.re * self.ln_norm(counts).exp())
                })?
            }
        };

        let mut patterns = Vec::with_capacity(n_patterns);
        let mut v = vec![0u32; self.modes];
        patterns.push(PhotonPattern::new(v.clone()));
        for _ in 1..n_patterns {
            for j in 0..self.modes {
                if v[j] < cutoff {
                    v[j] += 1;
                    break;
                }
                v[j] = 0;
            }
            patterns.push(PhotonPattern::new(v.clone()));
        }

        let total: T = probabilities.iter().copied().sum();
        if total > T::one() + T::of(1e-6) {
            return Err(CoreError::Numeric(format!(
                "distribution mass {} exceeds 1",
                total.to64()
            )));
        }
        Ok(FockDistribution {
            cutoff,
            patterns,
            probabilities,
            overflow_mass: (T::one() - total).max(T::zero()),
        })
    }

    /// Evaluate `f` at every pattern in the cutoff box, mode 0 fastest.
    fn walk_box<F>(&self, cutoff: u32, n_patterns: usize, mut f: F) -> Result<Vec<T>>
    where
        F: FnMut(&[u32]) -> Result<T>,
    {
        let mut v = vec![0u32; self.modes];
        let mut out = Vec::with_capacity(n_patterns);
        out.push(self.finish(f(&v)?)?);
        for _ in 1..n_patterns {
            for j in 0..self.modes {
                if v[j] < cutoff {
                    v[j] += 1;
                    break;
                }
                v[j] = 0;
            }
            out.push(self.finish(f(&v)?)?);
        }
        Ok(out)
    }
}

/// Probability that a zero-mean Gaussian state yields photon pattern `m`.
pub fn fock_probability<T: Real>(
    state: &GaussianState<T>,
    pattern: &PhotonPattern,
) -> Result<T> {
    NumberKernel::new(state)?.probability(pattern)
}

/// Full photon-number distribution of `state` up to `cutoff` per mode.
pub fn fock_distribution<T: Real>(
    state: &GaussianState<T>,
    cutoff: u32,
) -> Result<FockDistribution<T>> {
    NumberKernel::new(state)?.distribution(cutoff)
}
