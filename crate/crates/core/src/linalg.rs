//! Numerical nullspaces.

use nalgebra::{DMatrix, DVector};

use crate::algebra::C64;

/// Singular-value threshold separating fixed vectors from noise.
pub const NULLSPACE_THRESHOLD: f64 = 1e-8;

/// Orthonormal basis of `{v : A v ≈ 0}`, i.e. right singular vectors with
/// singular value at most `threshold`. Columns beyond the row count are always null.
pub fn null_space(a: &DMatrix<C64>, threshold: f64) -> Vec<DVector<C64>> {
    let cols = a.ncols();
    if cols == 0 {
        return Vec::new();
    }
    // pad to at least `cols` rows so the thin SVD yields a full right basis
    let a = if a.nrows() < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect()
}

pub fn nullity(a: &DMatrix<C64>, threshold: f64) -> usize {
    null_space(a, threshold).len()
}
