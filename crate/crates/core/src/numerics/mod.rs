//! Combinatorial linear algebra kernels: matrix types, permanents,
//! hafnians, exact small combinatorics, a symmetric eigensolver, and
//! Haar-random unitaries.

pub mod eigen;
pub mod haar;
pub mod hafnian;
pub mod matrix;
pub mod permanent;
pub mod stirling;

pub use eigen::{eigen_symmetric, min_eigenvalue_symmetric, EIGEN_MAX_DIM};
pub use haar::haar_unitary;
pub use hafnian::{
    hafnian, hafnian_box, hafnian_matching_enumeration, hafnian_power_trace,
    hafnian_with_multiplicities, HafnianTable, HAFNIAN_ENUMERATION_MAX_DIM, HAFNIAN_MAX_DIM,
};
pub use matrix::{similarity, unitarity_tolerance, ComplexMatrix, SymmetricMatrix, UnitaryMatrix};
pub use permanent::{permanent, permanent_naive, PERMANENT_MAX_DIM, PERMANENT_NAIVE_MAX_DIM};
pub use stirling::{choose, choose_f64, factorial_u128, ln_factorial, stirling2, STIRLING_MAX_N};
