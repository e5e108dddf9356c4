//! Vose alias tables for O(1) categorical draws.

use crate::error::{CoreError, Result};
use rand::Rng;

/// Alias table over a fixed set of outcome weights.
///
/// Construction is deterministic (stable worklist order), so identical
/// weights always produce identical tables and therefore identical draw
/// sequences for a given RNG stream.
#[derive(Debug, Clone)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(CoreError::InvalidParameter(
                "alias table needs at least one outcome".into(),
            ));
        }
        let mut total = 0.0;
        for &w in weights {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(CoreError::InvalidParameter(format!(
                    "alias weights must be finite and non-negative, got {}",
                    w
                )));
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(CoreError::InvalidParameter(
                "alias weights sum to zero".into(),
            ));
        }

        let scale = n as f64 / total;
        let mut scaled: Vec<f64> = weights.iter().map(|&w| w * scale).collect();
        let mut prob = vec![0.0; n];
        let mut alias = vec![0u32; n];
        // Ascending index order keeps the construction reproducible.
        let mut small: Vec<usize> = (0..n).filter(|&i| scaled[i] < 1.0).collect();
        let mut large: Vec<usize> = (0..n).filter(|&i| scaled[i] >= 1.0).collect();
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            prob[s] = scaled[s];
            alias[s] = l as u32;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers (roundoff) take the full slot.
        for &i in small.iter().chain(large.iter()) {
            prob[i] = 1.0;
            alias[i] = i as u32;
        }
        Ok(Self { prob, alias })
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    /// Draw one outcome index; consumes exactly two RNG values.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let i = rng.random_range(0..self.prob.len());
        if rng.random::<f64>() < self.prob[i] {
            i
        } else {
            self.alias[i] as usize
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{domain, stream_rng};

    #[test]
    fn single_outcome_always_drawn() {
        let t = AliasTable::new(&[3.0]).unwrap();
        let mut rng = stream_rng(1, domain::SYNTHETIC, 0);
        for _ in 0..100 {
            assert_eq!(t.sample(&mut rng), 0);
        }
    }

    #[test]
    fn empirical_frequencies_match_weights() {
        let weights = [0.2, 0.3, 0.5];
        let t = AliasTable::new(&weights).unwrap();
        let mut rng = stream_rng(42, domain::SYNTHETIC, 1);
        let n = 200_000usize;
        let mut counts = [0u64; 3];
        for _ in 0..n {
            counts[t.sample(&mut rng)] += 1;
        }
        for (i, &w) in weights.iter().enumerate() {
            let freq = counts[i] as f64 / n as f64;
            let sigma = (w * (1.0 - w) / n as f64).sqrt();
            assert!(
                (freq - w).abs() < 5.0 * sigma,
                "outcome {}: freq {} vs weight {}",
                i,
                freq,
                w
            );
        }
    }

    #[test]
    fn zero_weight_outcomes_never_drawn() {
        let t = AliasTable::new(&[0.5, 0.0, 0.5]).unwrap();
        let mut rng = stream_rng(7, domain::SYNTHETIC, 2);
        for _ in 0..10_000 {
            assert_ne!(t.sample(&mut rng), 1);
        }
    }

    #[test]
    fn identical_weights_give_identical_draws() {
        let w = [1.0, 2.0, 3.0, 4.0];
        let a = AliasTable::new(&w).unwrap();
        let b = AliasTable::new(&w).unwrap();
        let mut r1 = stream_rng(5, domain::SYNTHETIC, 3);
        let mut r2 = stream_rng(5, domain::SYNTHETIC, 3);
        for _ in 0..1000 {
            assert_eq!(a.sample(&mut r1), b.sample(&mut r2));
        }
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(AliasTable::new(&[]).is_err());
        assert!(AliasTable::new(&[0.0, 0.0]).is_err());
        assert!(AliasTable::new(&[1.0, -0.1]).is_err());
        assert!(AliasTable::new(&[f64::NAN]).is_err());
    }
}
