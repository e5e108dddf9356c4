//! Dense matrix types used by the combinatorial linear algebra kernels.
//!
//! Sizes here are small (tens of rows), so everything is a plain row-major
//! `Vec` with no blocking or views. `ComplexMatrix` is the workhorse;
//! `UnitaryMatrix` and `SymmetricMatrix` are validated wrappers that let the
//! state and sampler layers state their preconditions in the type.

use num_complex::Complex;

use crate::error::{CoreError, Result};
use crate::scalar::Real;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Build from row-major scalar data; length must be rows*cols.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CoreError::Dimension(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(CoreError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] = out[(r, c)] + a * rhs[(k, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(CoreError::Dimension("matrix addition shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = *a + *b;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(CoreError::Dimension("matrix subtraction shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = *a - *b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * s;
        }
        out
    }

    /// Largest entry magnitude. Zero for empty matrices.
    pub fn norm_max(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |acc, x| if x > acc { x } else { acc })
    }

    /// Submatrix on explicit (possibly repeated) row and column index lists.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Self::from_fn(row_idx.len(), col_idx.len(), |r, c| {
            self[(row_idx[r], col_idx[c])]
        })
    }

    /// Serialize as CSV with each cell written as a re,im pair
    /// (2*cols numeric fields per line).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let mut fields = Vec::with_capacity(2 * self.cols);
            for c in 0..self.cols {
                let z = self[(r, c)];
                fields.push(format!("{}", z.re.to64()));
                fields.push(format!("{}", z.im.to64()));
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Parse the CSV form written by [`to_csv`]. Dimensions are inferred:
    /// every line must carry the same even number of fields.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<Complex<T>>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() % 2 != 0 {
                return Err(CoreError::Parse(format!(
                    "line {}: odd field count {} (cells are re,im pairs)",
                    lineno + 1,
                    fields.len()
                )));
            }
            let mut row = Vec::with_capacity(fields.len() / 2);
            for pair in fields.chunks(2) {
                let re: f64 = pair[0].parse().map_err(|e| {
                    CoreError::Parse(format!("line {}: bad number {:?}: {}", lineno + 1, pair[0], e))
                })?;
                let im: f64 = pair[1].parse().map_err(|e| {
                    CoreError::Parse(format!("line {}: bad number {:?}: {}", lineno + 1, pair[1], e))
                })?;
                row.push(Complex::new(T::of(re), T::of(im)));
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(CoreError::Parse(format!(
                        "line {}: {} cells but earlier rows have {}",
                        lineno + 1,
                        row.len(),
                        first.len()
                    )));
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(CoreError::Parse("empty matrix CSV".into()));
        }
        let cols = rows[0].len();
        let rows_n = rows.len();
        Self::from_vec(rows_n, cols, rows.into_iter().flatten().collect())
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Unitarity tolerance: the documented 1e-10 contract at f64, relaxed
/// proportionally for narrower scalars where 1e-10 is unrepresentable noise.
pub fn unitarity_tolerance<T: Real>(dim: usize) -> T {
    let eps_based = T::epsilon() * T::of((dim.max(1) * 1000) as f64);
    let contract = T::of(1e-10);
    if eps_based > contract {
        eps_based
    } else {
        contract
    }
}

/// Square matrix validated to be unitary at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix<T: Real> {
    m: ComplexMatrix<T>,
}

impl<T: Real> UnitaryMatrix<T> {
    /// Validate `m`: square and max |(U^dagger U - I)_ij| within tolerance.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(CoreError::Dimension(format!(
                "unitary must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let dim = m.rows();
        let gram = m.conj_transpose().mul(&m)?;
        let defect = gram.sub(&ComplexMatrix::identity(dim))?.norm_max();
        let tol = unitarity_tolerance::<T>(dim);
        if defect > tol {
            return Err(CoreError::Numeric(format!(
                "matrix is not unitary: max |U^H U - I| = {:.3e} exceeds {:.3e}",
                defect.to64(),
                tol.to64()
            )));
        }
        Ok(Self { m })
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.m
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for UnitaryMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, idx: (usize, usize)) -> &Complex<T> {
        &self.m[idx]
    }
}

/// Real symmetric matrix. Construction symmetrizes, so stored entries
/// satisfy a_ij == a_ji exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T: Real> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> SymmetricMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    /// Build from a closure; the result is symmetrized as (f(i,j)+f(j,i))/2.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                let v = (f(i, j) + f(j, i)) / T::of(2.0);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    /// Build from row-major data, symmetrizing. Length must be dim*dim.
    pub fn from_rows(dim: usize, data: &[T]) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(CoreError::Dimension(format!(
                "symmetric matrix data length {} does not match dim {} squared",
                data.len(),
                dim
            )));
        }
        Ok(Self::from_fn(dim, |i, j| data[i * dim + j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    /// Set both (i,j) and (j,i).
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(CoreError::Dimension("symmetric addition shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = *a + *b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * s;
        }
        out
    }

    /// self + c*I.
    pub fn add_scaled_identity(&self, c: T) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] = out.data[i * self.dim + i] + c;
        }
        out
    }

    pub fn norm_max(&self) -> T {
        self.data
            .iter()
            .map(|x| x.abs())
            .fold(T::zero(), |acc, x| if x > acc { x } else { acc })
    }

    /// Principal submatrix on an index list.
    pub fn select(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    /// Cholesky factor L (lower triangular, self = L L^T).
    /// Fails if the matrix is not positive definite.
    pub fn cholesky(&self) -> Result<Vec<T>> {
        let n = self.dim;
        let mut l = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s = s - l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if s <= T::zero() {
                        return Err(CoreError::Numeric(format!(
                            "matrix not positive definite at pivot {} (value {:.3e})",
                            i,
                            s.to64()
                        )));
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Ok(l)
    }

    /// Determinant via Cholesky; requires positive definiteness.
    pub fn det_spd(&self) -> Result<T> {
        let l = self.cholesky()?;
        let n = self.dim;
        let mut det = T::one();
        for i in 0..n {
            det = det * l[i * n + i] * l[i * n + i];
        }
        Ok(det)
    }

    /// log-determinant via Cholesky; requires positive definiteness.
    pub fn log_det_spd(&self) -> Result<T> {
        let l = self.cholesky()?;
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            acc = acc + l[i * n + i].ln();
        }
        Ok(acc * T::of(2.0))
    }

    /// Inverse via Cholesky; requires positive definiteness.
    pub fn inverse_spd(&self) -> Result<Self> {
        let n = self.dim;
        let l = self.cholesky()?;
        // Invert L by forward substitution, column by column.
        let mut linv = vec![T::zero(); n * n];
        for col in 0..n {
            linv[col * n + col] = T::one() / l[col * n + col];
            for i in (col + 1)..n {
                let mut s = T::zero();
                for k in col..i {
                    s = s - l[i * n + k] * linv[k * n + col];
                }
                linv[i * n + col] = s / l[i * n + i];
            }
        }
        // inverse = L^-T L^-1.
        Ok(Self::from_fn(n, |i, j| {
            let mut s = T::zero();
            for k in i.max(j)..n {
                s = s + linv[k * n + i] * linv[k * n + j];
            }
            s
        }))
    }
}

/// Mean elementwise overlap between a target matrix and a measured
/// magnitude matrix: (1/N) * sum_ij |t_ij| * |m_ij| for N x N inputs.
/// Equals 1 when `measured` is exactly the entrywise magnitudes of a
/// unitary `target`.
pub fn similarity<T: Real>(target: &ComplexMatrix<T>, measured: &ComplexMatrix<T>) -> Result<T> {
    if !target.is_square() || target.rows() != measured.rows() || target.cols() != measured.cols() {
        return Err(CoreError::Dimension(format!(
            "similarity needs equal square shapes, got {}x{} vs {}x{}",
            target.rows(),
            target.cols(),
            measured.rows(),
            measured.cols()
        )));
    }
    let n = target.rows();
    let mut acc = T::zero();
    for r in 0..n {
        for c in 0..n {
            acc = acc + target[(r, c)].norm() * measured[(r, c)].norm();
        }
    }
    Ok(acc / T::of(n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    #[test]
    fn mul_and_adjoint_agree_with_hand_computation() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 1.0), c(0.0, 2.0), c(3.0, 0.0), c(1.0, -1.0)])
            .unwrap();
        let b = a.conj_transpose();
        let ab = a.mul(&b).unwrap();
        // (1+i)(1-i) + 2i*(-2i) = 2 + 4 = 6
        assert!((ab[(0, 0)] - c(6.0, 0.0)).norm() < 1e-14);
        assert!((ab[(0, 1)] - a.mul(&b).unwrap()[(0, 1)]).norm() == 0.0);
        // Hermitian product.
        assert!((ab[(0, 1)] - ab[(1, 0)].conj()).norm() < 1e-14);
    }

    #[test]
    fn unitary_accepts_rotation_rejects_shear() {
        let theta: f64 = 0.7;
        let rot = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                c(theta.cos(), 0.0),
                c(-theta.sin(), 0.0),
                c(theta.sin(), 0.0),
                c(theta.cos(), 0.0),
            ],
        )
        .unwrap();
        assert!(UnitaryMatrix::new(rot).is_ok());

        let shear =
            ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
                .unwrap();
        assert!(UnitaryMatrix::new(shear).is_err());
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let a = ComplexMatrix::from_vec(
            2,
            3,
            vec![
                c(0.1, -0.25),
                c(1.0 / 3.0, 0.0),
                c(-7.5e-11, 2.0),
                c(0.0, 0.0),
                c(5.0, -5.0),
                c(std::f64::consts::PI, 1e-17),
            ],
        )
        .unwrap();
        let text = a.to_csv();
        let b = ComplexMatrix::<f64>::from_csv(&text).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_rejects_ragged_and_odd_rows() {
        assert!(ComplexMatrix::<f64>::from_csv("1,2,3\n").is_err());
        assert!(ComplexMatrix::<f64>::from_csv("1,2\n1,2,3,4\n").is_err());
        assert!(ComplexMatrix::<f64>::from_csv("").is_err());
    }

    #[test]
    fn spd_inverse_and_det() {
        let m =
            SymmetricMatrix::from_rows(3, &[4.0_f64, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0])
                .unwrap();
        let inv = m.inverse_spd().unwrap();
        // m * inv == I within roundoff.
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += m.get(i, k) * inv.get(k, j);
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12, "({i},{j}) -> {s}");
            }
        }
        let det = m.det_spd().unwrap();
        // Hand-expanded determinant.
        let expect = 4.0 * (3.0 * 2.0 - 0.04) - 1.0 * (2.0 - 0.1) + 0.5 * (0.2 - 1.5);
        assert!((det - expect).abs() < 1e-12);
        assert!((m.log_det_spd().unwrap() - det.ln()).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = SymmetricMatrix::from_rows(2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(m.cholesky().is_err());
    }

    #[test]
    fn similarity_of_matched_magnitudes_is_one() {
        let u = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                c(0.0, 1.0 / f64::sqrt(2.0)),
                c(1.0 / f64::sqrt(2.0), 0.0),
                c(-1.0 / f64::sqrt(2.0), 0.0),
                c(0.0, 1.0 / f64::sqrt(2.0)),
            ],
        )
        .unwrap();
        let mags = ComplexMatrix::from_fn(2, 2, |r, cc| Complex::new(u[(r, cc)].norm(), 0.0));
        let s = similarity(&u, &mags).unwrap();
        assert!((s - 1.0).abs() < 1e-14);
    }
}
