//! Hafnian of complex symmetric matrices.
//!
//! Three routes, cross-validated against each other in the tests:
//! - perfect-matching enumeration for dim <= 12 (the oracle),
//! - inclusion-exclusion over index pairs with power traces for larger
//!   even dims (O(2^(n/2) n^4) scalar work),
//! - a multiplicity-vector dynamic program for submatrices formed by
//!   repeating rows/columns of a small base matrix, which is what photon
//!   patterns produce. The DP fills a whole box of patterns at once, so a
//!   full Fock distribution costs barely more than one pattern.
//!
//! Only the upper triangle participates in a hafnian; no symmetry check is
//! performed.

use num_complex::Complex;

use crate::error::{CoreError, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Largest dimension accepted by [`hafnian`].
pub const HAFNIAN_MAX_DIM: usize = 20;

/// Largest dimension routed to matching enumeration by [`hafnian`].
pub const HAFNIAN_ENUMERATION_MAX_DIM: usize = 12;

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// Hafnian with automatic algorithm choice.
///
/// Odd dimension returns zero (no perfect matching exists); the empty
/// matrix returns one. Dimensions above [`HAFNIAN_MAX_DIM`] are refused.
pub fn hafnian<T: Real>(m: &ComplexMatrix<T>) -> Result<Complex<T>> {
    if !m.is_square() {
        return Err(CoreError::Dimension(format!(
            "hafnian needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dim = m.rows();
    if dim > HAFNIAN_MAX_DIM {
        return Err(CoreError::Capacity(format!(
            "hafnian dimension {} exceeds limit {}",
            dim, HAFNIAN_MAX_DIM
        )));
    }
    if dim == 0 {
        return Ok(cone());
    }
    if dim % 2 == 1 {
        return Ok(czero());
    }
    if dim <= HAFNIAN_ENUMERATION_MAX_DIM {
        hafnian_matching_enumeration(m)
    } else {
        hafnian_power_trace(m)
    }
}

/// Literal sum over perfect matchings. Exponential; oracle quality.
pub fn hafnian_matching_enumeration<T: Real>(m: &ComplexMatrix<T>) -> Result<Complex<T>> {
    if !m.is_square() {
        return Err(CoreError::Dimension("hafnian needs a square matrix".into()));
    }
    if m.rows() % 2 == 1 {
        return Ok(czero());
    }
    fn walk<T: Real>(m: &ComplexMatrix<T>, live: &[usize]) -> Complex<T> {
        if live.is_empty() {
            return cone();
        }
        let first = live[0];
        let mut acc = czero();
        for pos in 1..live.len() {
            let partner = live[pos];
            let mut rest = Vec::with_capacity(live.len() - 2);
            rest.extend_from_slice(&live[1..pos]);
            rest.extend_from_slice(&live[pos + 1..]);
            acc = acc + m[(first, partner)] * walk(m, &rest);
        }
        acc
    }
    let live: Vec<usize> = (0..m.rows()).collect();
    Ok(walk(m, &live))
}

/// Inclusion-exclusion over index pairs with eigenvalue power traces.
///
/// For each nonempty subset S of the n = dim/2 index pairs, the coefficient
/// of z^n in exp(sum_k tr((X A_S)^k) z^k / (2k)) is accumulated with sign
/// (-1)^(n-|S|), where X swaps the two rows of every pair.
pub fn hafnian_power_trace<T: Real>(m: &ComplexMatrix<T>) -> Result<Complex<T>> {
    if !m.is_square() {
        return Err(CoreError::Dimension("hafnian needs a square matrix".into()));
    }
    let dim = m.rows();
    if dim % 2 == 1 {
        return Ok(czero());
    }
    if dim == 0 {
        return Ok(cone());
    }
    let n = dim / 2;
    if n > 31 {
        return Err(CoreError::Capacity(format!(
            "power-trace hafnian of dimension {} is not tractable",
            dim
        )));
    }
    let mut total = czero();
    for mask in 1u64..(1u64 << n) {
        let s = mask.count_ones() as usize;
        let mut idx = Vec::with_capacity(2 * s);
        for i in 0..n {
            if (mask >> i) & 1 == 1 {
                idx.push(2 * i);
                idx.push(2 * i + 1);
            }
        }
        let sub = 2 * s;
        // X A_S: within each retained pair the two rows swap.
        let xa = ComplexMatrix::from_fn(sub, sub, |r, c| m[(idx[r ^ 1], idx[c])]);

        let mut traces = vec![czero(); n + 1];
        let mut power = xa.clone();
        traces[1] = (0..sub).map(|i| power[(i, i)]).fold(czero(), |a, b| a + b);
        for k in 2..=n {
            power = power.mul(&xa)?;
            traces[k] = (0..sub).map(|i| power[(i, i)]).fold(czero(), |a, b| a + b);
        }

        // exp of the truncated power series: q_m = (1/m) sum_k (t_k/2) q_(m-k).
        let mut q = vec![czero(); n + 1];
        q[0] = cone();
        for order in 1..=n {
            let mut acc = czero();
            for k in 1..=order {
                acc = acc + traces[k].scale(T::of(0.5)) * q[order - k];
            }
            q[order] = acc.scale(T::one() / T::of(order as f64));
        }

        if (n - s) % 2 == 0 {
            total = total + q[n];
        } else {
            total = total - q[n];
        }
    }
    Ok(total)
}

/// Hafnians of every repeated-index submatrix of `base` inside a cap box.
///
/// Entry `v` of the table is the hafnian of the matrix formed by repeating
/// row/column `j` of `base` exactly `v[j]` times. Odd-total entries are zero.
#[derive(Debug, Clone)]
pub struct HafnianTable<T: Real> {
    caps: Vec<u32>,
    strides: Vec<usize>,
    values: Vec<Complex<T>>,
}

impl<T: Real> HafnianTable<T> {
    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    fn offset(&self, v: &[u32]) -> usize {
        debug_assert_eq!(v.len(), self.caps.len());
        let mut off = 0;
        for (j, &vj) in v.iter().enumerate() {
            debug_assert!(vj <= self.caps[j]);
            off += self.strides[j] * vj as usize;
        }
        off
    }

    /// Hafnian of the submatrix with multiplicity vector `v` (v <= caps).
    pub fn get(&self, v: &[u32]) -> Complex<T> {
        self.values[self.offset(v)]
    }
}

/// Fill the hafnian table for all multiplicity vectors `v <= caps`.
///
/// `max_states` bounds the table size (protects memory); the number of
/// states is prod(caps[j] + 1).
pub fn hafnian_box<T: Real>(
    base: &ComplexMatrix<T>,
    caps: &[u32],
    max_states: usize,
) -> Result<HafnianTable<T>> {
    if !base.is_square() || base.rows() != caps.len() {
        return Err(CoreError::Dimension(format!(
            "hafnian box: base is {}x{} but {} caps given",
            base.rows(),
            base.cols(),
            caps.len()
        )));
    }
    let modes = caps.len();
    let mut states: usize = 1;
    let mut strides = vec![0usize; modes];
    for j in 0..modes {
        strides[j] = states;
        states = states
            .checked_mul(caps[j] as usize + 1)
            .ok_or_else(|| CoreError::Budget("hafnian box state count overflows".into()))?;
        if states > max_states {
            return Err(CoreError::Budget(format!(
                "hafnian box needs {} states, limit {}; lower the photon cutoff or mode count",
                states, max_states
            )));
        }
    }

    let mut values = vec![czero::<T>(); states];
    values[0] = cone();
    let mut v = vec![0u32; modes];
    // Walk the box in mixed-radix order: every referenced state is smaller.
    for off in 1..states {
        // Increment the mixed-radix counter.
        for j in 0..modes {
            if v[j] < caps[j] {
                v[j] += 1;
                break;
            }
            v[j] = 0;
        }
        let j = match v.iter().position(|&x| x > 0) {
            Some(j) => j,
            None => continue,
        };
        let mut acc = czero::<T>();
        // Pair one unit of mode j with a second unit of mode j...
        if v[j] >= 2 {
            let prev = off - 2 * strides[j];
            acc = acc + base[(j, j)].scale(T::of((v[j] - 1) as f64)) * values[prev];
        }
        // ...or with a unit of any later occupied mode.
        for k in (j + 1)..modes {
            if v[k] > 0 {
                let prev = off - strides[j] - strides[k];
                acc = acc + base[(j, k)].scale(T::of(v[k] as f64)) * values[prev];
            }
        }
        values[off] = acc;
    }

    Ok(HafnianTable {
        caps: caps.to_vec(),
        strides,
        values,
    })
}

/// Hafnian of the repeated-index submatrix for one multiplicity vector.
pub fn hafnian_with_multiplicities<T: Real>(
    base: &ComplexMatrix<T>,
    mult: &[u32],
    max_states: usize,
) -> Result<Complex<T>> {
    let table = hafnian_box(base, mult, max_states)?;
    Ok(table.get(mult))
}

/// Expand a base matrix by repeating row/column j mult[j] times.
/// Test helper for validating the multiplicity DP against direct hafnians.
pub fn expand_multiplicities<T: Real>(base: &ComplexMatrix<T>, mult: &[u32]) -> ComplexMatrix<T> {
    let mut idx = Vec::new();
    for (j, &mj) in mult.iter().enumerate() {
        for _ in 0..mj {
            idx.push(j);
        }
    }
    base.select(&idx, &idx)
}
