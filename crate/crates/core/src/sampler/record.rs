//! Per-shot detection records.

use crate::sampler::Regime;
use crate::states::PhotonPattern;
use serde::{Deserialize, Serialize};

/// One detection event: time-bin index, regime tag, and the herald and
/// signal patterns (herald is all-zero for GBS and TBS).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub time_bin: u64,
    pub regime: Regime,
    pub herald: PhotonPattern,
    pub signal: PhotonPattern,
}

impl SampleRecord {
    pub fn herald_total(&self) -> u32 {
        self.herald.total()
    }

    pub fn signal_total(&self) -> u32 {
        self.signal.total()
    }
}
