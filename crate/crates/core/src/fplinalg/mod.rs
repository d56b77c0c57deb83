//! Exact linear algebra over prime fields.
//!
//! Pivoting is deterministic everywhere (first nonzero column, then lowest
//! row), so every basis derived from these routines is reproducible.

mod field;
mod matrix;
mod subspace;

pub use field::{FpScalar, PrimeField, MAX_PRIME};
pub use matrix::FpMatrix;
pub use subspace::{SparseEchelon, SparseVec, Subspace};

/// `rref` as a free function: reduced form plus pivot columns.
pub fn rref(m: &FpMatrix) -> (FpMatrix, Vec<usize>) {
    m.rref()
}

pub fn kernel_basis(m: &FpMatrix) -> Vec<Vec<u32>> {
    m.kernel_basis()
}

pub fn solve(m: &FpMatrix, b: &[u32]) -> Option<Vec<u32>> {
    m.solve(b)
}
