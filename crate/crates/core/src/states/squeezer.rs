//! Squeezer parameters shared by the single-mode and two-mode sources.

use crate::error::{CoreError, Result};
use crate::scalar::Real;

/// Squeezing strength and phase for one squeezer.
///
/// `r` is the squeezing parameter; `phase` is the angle of the squeezed
/// quadrature (single-mode) or the pair-correlation phase (two-mode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezerSpec<T: Real> {
    pub r: T,
    pub phase: T,
}

impl<T: Real> SqueezerSpec<T> {
    pub fn new(r: T, phase: T) -> Result<Self> {
        if !r.is_finite() || !phase.is_finite() {
            return Err(CoreError::InvalidParameter(
                "squeezer parameters must be finite".into(),
            ));
        }
        if r < T::zero() {
            return Err(CoreError::InvalidParameter(format!(
                "squeezing parameter must be non-negative, got {}",
                r
            )));
        }
        Ok(Self { r, phase })
    }

    /// Mean photon number per squeezed mode: sinh^2(r).
    pub fn mean_photons(&self) -> T {
        self.r.sinh() * self.r.sinh()
    }

    /// Geometric ratio of adjacent photon-number amplitudes: tanh(r).
    pub fn lambda(&self) -> T {
        self.r.tanh()
    }

    /// Squeezing parameter that produces mean photon number `n` per mode.
    pub fn r_for_mean_photons(n: T) -> Result<T> {
        if !(n >= T::zero()) {
            return Err(CoreError::InvalidParameter(format!(
                "mean photon number must be non-negative, got {}",
                n
            )));
        }
        // arcsinh(sqrt(n))
        Ok(n.sqrt().asinh())
    }
}
