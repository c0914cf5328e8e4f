use nalgebra::DMatrix;

use super::algebra::{make_algebra, LieAlgebraBasis};
use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

/// `h ⋉ R^n` realized by `(n+1) x (n+1)` matrices `[[A, v], [0, 0]]`.
///
/// The `h` basis comes first, followed by the translations `e_0 .. e_{n-1}`.
pub fn semidirect<T: Real>(h_basis: &[DMatrix<T>], n: usize) -> Result<LieAlgebraBasis<T>> {
    let mut basis = Vec::with_capacity(h_basis.len() + n);
    for a in h_basis {
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::ActionMismatch(format!("{}x{} matrix acting on R^{n}", a.nrows(), a.ncols())));
        }
        let mut m = DMatrix::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        basis.push(m);
    }
    for k in 0..n {
        let mut m = DMatrix::zeros(n + 1, n + 1);
        m[(k, n)] = T::one();
        basis.push(m);
    }
    let mut flags = vec![false; h_basis.len()];
    flags.extend(std::iter::repeat(true).take(n));
    make_algebra(n + 1, basis, Some(flags), tol::<T>(1e-9))
}

/// Affine matrix `[[a, x], [0, 1]]`.
pub fn affine_element<T: Real>(a: &DMatrix<T>, x: &[T]) -> DMatrix<T> {
    let n = a.nrows();
    let mut m = DMatrix::identity(n + 1, n + 1);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    for (k, v) in x.iter().enumerate() {
        m[(k, n)] = *v;
    }
    m
}
