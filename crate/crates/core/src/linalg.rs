//! Small dense-matrix helpers.

use nalgebra::DMatrix;

/// `AB - BA`.
pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

/// Largest absolute entry, 0 for an empty matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// `max |AB - BA|`.
pub fn commutator_norm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    max_abs(&commutator(a, b))
}

/// Largest absolute off-diagonal entry.
pub fn max_off_diagonal(m: &DMatrix<f64>) -> f64 {
    let mut out = 0.0f64;
    for (i, j) in (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))) {
        if i != j {
            out = out.max(m[(i, j)].abs());
        }
    }
    out
}

/// Apply `f` to the diagonal of a diagonal matrix.
pub fn map_diagonal(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| if i == j { f(m[(i, i)]) } else { 0.0 })
}
