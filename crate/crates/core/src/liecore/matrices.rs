//! Standard matrix bases.

use nalgebra::DMatrix;

use crate::linalg::null_space_scaled;
use crate::scalar::{tol, Real};

/// `E_ab = e_a e_b^T - e_b e_a^T` for `a < b`, lexicographic.
pub fn so_basis<T: Real>(n: usize) -> Vec<DMatrix<T>> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let mut m = DMatrix::zeros(n, n);
            m[(a, b)] = T::one();
            m[(b, a)] = -T::one();
            out.push(m);
        }
    }
    out
}

/// Real `2n x 2n` form `[[A, -B], [B, A]]` of the complex matrix `A + iB`.
pub fn realify<T: Real>(re: &DMatrix<T>, im: &DMatrix<T>) -> DMatrix<T> {
    let n = re.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(re);
    m.view_mut((n, n), (n, n)).copy_from(re);
    m.view_mut((0, n), (n, n)).copy_from(&(-im));
    m.view_mut((n, 0), (n, n)).copy_from(im);
    m
}

/// Basis of `su(n)` in real form: diagonal `i(E_kk - E_{k+1,k+1})`, then for
/// each `a < b` the real antisymmetric and imaginary symmetric generators.
pub fn su_basis_realified<T: Real>(n: usize) -> Vec<DMatrix<T>> {
    let z = DMatrix::<T>::zeros(n, n);
    let mut out = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let mut im = z.clone();
        im[(k, k)] = T::one();
        im[(k + 1, k + 1)] = -T::one();
        out.push(realify(&z, &im));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let mut re = z.clone();
            re[(a, b)] = T::one();
            re[(b, a)] = -T::one();
            out.push(realify(&re, &z));
            let mut im = z.clone();
            im[(a, b)] = T::one();
            im[(b, a)] = T::one();
            out.push(realify(&z, &im));
        }
    }
    out
}

/// Elements of `span(basis)` commuting with every matrix in `with`.
pub fn commutant<T: Real>(basis: &[DMatrix<T>], with: &[DMatrix<T>]) -> Vec<DMatrix<T>> {
    if with.is_empty() {
        return basis.to_vec();
    }
    let n = basis[0].nrows();
    let rows = with.len() * n * n;
    let mut a = DMatrix::zeros(rows, basis.len());
    for (c, b) in basis.iter().enumerate() {
        for (w, j) in with.iter().enumerate() {
            let comm = b * j - j * b;
            for (r, v) in comm.iter().enumerate() {
                a[(w * n * n + r, c)] = *v;
            }
        }
    }
    let size = |ms: &[DMatrix<T>]| ms.iter().map(|m| m.amax()).fold(T::zero(), T::max);
    let ns = null_space_scaled(&a, tol::<T>(1e-9), size(basis) * size(with));
    (0..ns.ncols())
        .map(|c| {
            let mut m = DMatrix::zeros(n, n);
            for (k, b) in basis.iter().enumerate() {
                m += b * ns[(k, c)];
            }
            m
        })
        .collect()
}
