//! Output statistics of Fock states through an interferometer.
//!
//! For an input pattern n entering a unitary U, the output amplitudes live
//! on compositions m of t = sum(n):
//!   P(m | n) = |alpha_m|^2 * prod_j m_j! / prod_i n_i!
//! where alpha_m are the coefficients of prod_i (sum_j U_ji x_j)^{n_i}.
//! The polynomial is built factor by factor, which costs
//! O(t * modes * compositions) instead of enumerating permanents.

use crate::error::{CoreError, Result};
use crate::numerics::{ln_factorial, ComplexMatrix, UnitaryMatrix};
use crate::sampler::AliasTable;
use num_complex::Complex;
use std::collections::BTreeMap;

/// Ceiling on the number of output compositions per conditional
/// distribution, C(t + modes - 1, modes - 1).
pub const COMPOSITION_BUDGET: u64 = 5_000_000;

const MODE_BITS: u32 = 8;
const MODE_MASK: u64 = 0xFF;

fn unpack(key: u64, modes: usize) -> Vec<u32> {
    (0..modes)
        .map(|j| ((key >> (MODE_BITS * j as u32)) & MODE_MASK) as u32)
        .collect()
}

fn compositions(total: u64, parts: u64) -> u64 {
    // C(total + parts - 1, parts - 1), saturating
    let mut c: u64 = 1;
    for i in 1..parts {
        c = match c
            .checked_mul(total + i)
            .map(|x| x / i)
        {
            Some(x) => x,
            None => return u64::MAX,
        };
        if c > COMPOSITION_BUDGET {
            return c;
        }
    }
    c
}

/// Conditional output distribution for one input pattern.
#[derive(Debug, Clone)]
pub struct ConditionalDistribution {
    /// Output patterns with the same total as the input.
    pub patterns: Vec<Vec<u32>>,
    pub probabilities: Vec<f64>,
    alias: AliasTable,
}

impl ConditionalDistribution {
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> &[u32] {
        &self.patterns[self.alias.sample(rng)]
    }
}

/// An interferometer acting on definite photon-number inputs.
#[derive(Debug, Clone)]
pub struct FockInterferometer {
    u: ComplexMatrix<f64>,
    modes: usize,
}

impl FockInterferometer {
    pub fn new(u: &UnitaryMatrix<f64>) -> Self {
        Self {
            u: u.matrix().clone(),
            modes: u.dim(),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Exact output distribution given input pattern `n`.
    pub fn conditional_distribution(&self, n: &[u32]) -> Result<ConditionalDistribution> {
        if n.len() != self.modes {
            return Err(CoreError::Dimension(format!(
                "input pattern has {} modes, interferometer has {}",
                n.len(),
                self.modes
            )));
        }
        let t: u64 = n.iter().map(|&x| x as u64).sum();
        if t == 0 {
            return Ok(ConditionalDistribution {
                patterns: vec![vec![0; self.modes]],
                probabilities: vec![1.0],
                alias: AliasTable::new(&[1.0])?,
            });
        }
        if t > MODE_MASK {
            return Err(CoreError::Capacity(format!(
                "input total {} exceeds the per-pattern packing limit {}",
                t, MODE_MASK
            )));
        }
        let n_comp = compositions(t, self.modes as u64);
        if n_comp > COMPOSITION_BUDGET {
            return Err(CoreError::Budget(format!(
                "{} photons over {} modes need {} output patterns, limit {}",
                t, self.modes, n_comp, COMPOSITION_BUDGET
            )));
        }

        // Multiply out prod_i (sum_j U_ji x_j)^{n_i} one creation operator
        // at a time. BTreeMap keeps accumulation order deterministic so the
        // resulting probabilities are bit-stable across runs.
        let mut terms: BTreeMap<u64, Complex<f64>> = BTreeMap::new();
        terms.insert(0, Complex::new(1.0, 0.0));
        for i in 0..self.modes {
            for _ in 0..n[i] {
                let mut next: BTreeMap<u64, Complex<f64>> = BTreeMap::new();
                for (&key, &coeff) in &terms {
                    for j in 0..self.modes {
                        let uji = self.u[(j, i)];
                        if uji.re == 0.0 && uji.im == 0.0 {
                            continue;
                        }
                        let entry = next
                            .entry(key + (1u64 << (MODE_BITS * j as u32)))
                            .or_insert_with(|| Complex::new(0.0, 0.0));
                        *entry += coeff * uji;
                    }
                }
                terms = next;
            }
        }

        let ln_input: f64 = n.iter().map(|&x| ln_factorial(x)).sum();
        let mut patterns = Vec::with_capacity(terms.len());
        let mut probabilities = Vec::with_capacity(terms.len());
        let mut total = 0.0;
        for (&key, &coeff) in &terms {
            let m = unpack(key, self.modes);
            let ln_output: f64 = m.iter().map(|&x| ln_factorial(x)).sum();
            let p = coeff.norm_sqr() * (ln_output - ln_input).exp();
            total += p;
            patterns.push(m);
            probabilities.push(p);
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(CoreError::Numeric(format!(
                "conditional output distribution sums to {}, expected 1",
                total
            )));
        }
        // Remove residual roundoff so downstream draws are exactly normalized.
        for p in probabilities.iter_mut() {
            *p /= total;
        }
        let alias = AliasTable::new(&probabilities)?;
        Ok(ConditionalDistribution {
            patterns,
            probabilities,
            alias,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{factorial_u128, haar_unitary, permanent};

    /// Permanent-based oracle: P(m|n) = |Per(U[n,m])|^2 / (prod n! prod m!)
    /// with U[n,m] repeating column i n_i times and row j m_j times.
    fn permanent_probability(u: &UnitaryMatrix<f64>, n: &[u32], m: &[u32]) -> f64 {
        let mut rows = Vec::new();
        for (j, &mj) in m.iter().enumerate() {
            for _ in 0..mj {
                rows.push(j);
            }
        }
        let mut cols = Vec::new();
        for (i, &ni) in n.iter().enumerate() {
            for _ in 0..ni {
                cols.push(i);
            }
        }
        let sub = u.matrix().select(&rows, &cols);
        let per = permanent(&sub).unwrap();
        let mut denom = 1.0;
        for &x in n.iter().chain(m.iter()) {
            denom *= factorial_u128(x).unwrap() as f64;
        }
        per.norm_sqr() / denom
    }

    #[test]
    fn matches_permanent_oracle_on_random_unitaries() {
        for (seed, n) in [(3u64, vec![2u32, 1, 0]), (4, vec![1, 1, 1]), (5, vec![0, 3, 1])] {
            let u = haar_unitary::<f64>(3, seed).unwrap();
            let itf = FockInterferometer::new(&u);
            let dist = itf.conditional_distribution(&n).unwrap();
            let mut total = 0.0;
            for (pat, &p) in dist.patterns.iter().zip(&dist.probabilities) {
                let want = permanent_probability(&u, &n, pat);
                assert!(
                    (p - want).abs() < 1e-12,
                    "n={:?} m={:?}: {} vs {}",
                    n,
                    pat,
                    p,
                    want
                );
                total += p;
            }
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_photon_interference_on_balanced_splitter() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bs = UnitaryMatrix::new(ComplexMatrix::from_vec(
            2,
            2,
            vec![
                Complex::new(h, 0.0),
                Complex::new(h, 0.0),
                Complex::new(h, 0.0),
                Complex::new(-h, 0.0),
            ],
        ).unwrap())
        .unwrap();
        let itf = FockInterferometer::new(&bs);
        let dist = itf.conditional_distribution(&[1, 1]).unwrap();
        for (pat, &p) in dist.patterns.iter().zip(&dist.probabilities) {
            let want = match (pat[0], pat[1]) {
                (1, 1) => 0.0, // photons bunch
                (2, 0) | (0, 2) => 0.5,
                _ => unreachable!("total is conserved"),
            };
            assert!((p - want).abs() < 1e-12, "{:?}", pat);
        }
    }

    #[test]
    fn vacuum_input_passes_through() {
        let u = haar_unitary::<f64>(4, 9).unwrap();
        let itf = FockInterferometer::new(&u);
        let dist = itf.conditional_distribution(&[0, 0, 0, 0]).unwrap();
        assert_eq!(dist.patterns, vec![vec![0, 0, 0, 0]]);
        assert_eq!(dist.probabilities, vec![1.0]);
    }

    #[test]
    fn identity_unitary_is_deterministic_transport() {
        let id = UnitaryMatrix::new(ComplexMatrix::identity(3)).unwrap();
        let itf = FockInterferometer::new(&id);
        let n = [2u32, 0, 1];
        let dist = itf.conditional_distribution(&n).unwrap();
        for (pat, &p) in dist.patterns.iter().zip(&dist.probabilities) {
            if pat.as_slice() == n {
                assert!((p - 1.0).abs() < 1e-12);
            } else {
                assert!(p.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn budget_error_on_absurd_inputs() {
        let u = haar_unitary::<f64>(8, 1).unwrap();
        let itf = FockInterferometer::new(&u);
        // 33 photons over 8 modes: C(40, 7) compositions, past the budget
        let n = [33u32, 0, 0, 0, 0, 0, 0, 0];
        assert!(matches!(
            itf.conditional_distribution(&n),
            Err(CoreError::Budget(_))
        ));
        // per-mode counts no longer fit the packed key above 255 photons
        let n = [40u32, 40, 40, 40, 40, 40, 40, 40];
        assert!(matches!(
            itf.conditional_distribution(&n),
            Err(CoreError::Capacity(_))
        ));
    }
}
