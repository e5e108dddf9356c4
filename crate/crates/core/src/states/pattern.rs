//! Photon-number patterns: one detected count per mode.

use serde::{Deserialize, Serialize};

/// Photon counts per mode for one detection event. Lexicographic ordering
/// lets patterns key deterministic maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhotonPattern(pub Vec<u32>);

impl PhotonPattern {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn zeros(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Clamp every count at `cutoff`, the photon-number-resolving limit of
    /// a real detector.
    pub fn truncated(&self, cutoff: u32) -> Self {
        Self(self.0.iter().map(|&c| c.min(cutoff)).collect())
    }

    /// Concatenate two patterns (e.g. herald then signal) into one vector.
    pub fn concat(&self, other: &Self) -> Self {
        let mut counts = self.0.clone();
        counts.extend_from_slice(&other.0);
        Self(counts)
    }
}

impl From<Vec<u32>> for PhotonPattern {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl std::fmt::Display for PhotonPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}
