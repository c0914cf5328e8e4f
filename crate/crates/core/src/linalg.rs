//! Dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::scalar::{lit, Cx, Real};

/// Orthonormal basis (as columns) of the numerical null space of `a`.
///
/// Singular values at or below `rel * sigma_max` count as zero.
pub fn null_space<T: Real>(a: &DMatrix<T>, rel: T) -> DMatrix<T> {
    null_space_scaled(a, rel, T::zero())
}

/// As [`null_space`], with the cut taken relative to `max(sigma_max, scale)`.
///
/// `scale` is the size the system would have if it did not vanish, so that a
/// matrix made only of round-off is recognized as zero.
pub fn null_space_scaled<T: Real>(a: &DMatrix<T>, rel: T, scale: T) -> DMatrix<T> {
    let n = a.ncols();
    let m = padded(a);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.max();
    let cut = rel * smax.max(scale);
    let cols: Vec<DVector<T>> = (0..n)
        .filter(|&i| smax == T::zero() || svd.singular_values[i] <= cut)
        .map(|i| v_t.row(i).transpose())
        .collect();
    columns(n, &cols)
}

/// Complex counterpart of [`null_space`].
pub fn null_space_cx<T: Real>(a: &DMatrix<Cx<T>>, rel: T) -> DMatrix<Cx<T>> {
    let n = a.ncols();
    let m = padded(a);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.max();
    let cut = rel * smax;
    let cols: Vec<DVector<Cx<T>>> = (0..n)
        .filter(|&i| smax == T::zero() || svd.singular_values[i] <= cut)
        .map(|i| v_t.row(i).adjoint())
        .collect();
    columns(n, &cols)
}

fn padded<N: nalgebra::ComplexField + Copy>(a: &DMatrix<N>) -> DMatrix<N> {
    if a.nrows() >= a.ncols() {
        a.clone()
    } else {
        let mut m = DMatrix::zeros(a.ncols(), a.ncols());
        m.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
        m
    }
}

/// Stack column vectors into an `n x k` matrix (an `n x 0` matrix if empty).
pub fn columns<N: nalgebra::Scalar + num_traits::Zero>(n: usize, cols: &[DVector<N>]) -> DMatrix<N> {
    let mut m = DMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// Smallest and largest singular values.
pub fn sv_extremes<T: Real>(a: &DMatrix<T>) -> (T, T) {
    if a.ncols() == 0 || a.nrows() == 0 {
        return (T::zero(), T::zero());
    }
    let s = a.clone().svd(false, false).singular_values;
    (s.min(), s.max())
}

/// Moore-Penrose pseudo-inverse with relative cutoff.
pub fn pinv<T: Real>(a: &DMatrix<T>, rel: T) -> DMatrix<T> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = rel * smax;
    svd.pseudo_inverse(eps).expect("pseudo-inverse of a valid SVD")
}

/// Column-wise Gram-Schmidt with a second pass; drops columns that vanish.
pub fn orthonormalize<T: Real>(a: &DMatrix<T>, drop_tol: T) -> DMatrix<T> {
    let mut out: Vec<DVector<T>> = Vec::new();
    for j in 0..a.ncols() {
        let mut v = a.column(j).into_owned();
        for _ in 0..2 {
            for q in &out {
                let d = q.dot(&v);
                v.axpy(-d, q, T::one());
            }
        }
        let n = v.norm();
        if n > drop_tol {
            out.push(v / n);
        }
    }
    columns(a.nrows(), &out)
}

/// Maximum absolute column sum.
pub fn norm1<T: Real>(a: &DMatrix<T>) -> T {
    let mut best = T::zero();
    for j in 0..a.ncols() {
        let s = a.column(j).iter().fold(T::zero(), |acc, x| acc + x.abs());
        if s > best {
            best = s;
        }
    }
    best
}

/// Matrix exponential by scaling and squaring with a diagonal Padé(6) approximant.
///
/// The argument is scaled until its 1-norm is at most 1/2.
pub fn expm<T: Real>(x: &DMatrix<T>) -> DMatrix<T> {
    let n = x.nrows();
    assert_eq!(n, x.ncols(), "expm needs a square matrix");
    let nrm = norm1(x);
    let half = lit::<T>(0.5);
    let mut s = 0u32;
    let mut scale = T::one();
    while nrm * scale > half {
        scale *= half;
        s += 1;
    }
    let a = x * scale;

    const M: usize = 6;
    let mut c = [1.0f64; M + 1];
    for k in 1..=M {
        c[k] = c[k - 1] * (M - k + 1) as f64 / (k * (2 * M - k + 1)) as f64;
    }
    let id = DMatrix::<T>::identity(n, n);
    let mut num = id.clone() * lit::<T>(c[0]);
    let mut den = id.clone() * lit::<T>(c[0]);
    let mut pow = id;
    for (k, ck) in c.iter().enumerate().skip(1) {
        pow = &pow * &a;
        let t = &pow * lit::<T>(*ck);
        num += &t;
        if k % 2 == 0 {
            den += &t;
        } else {
            den -= &t;
        }
    }
    let mut r = den.lu().solve(&num).expect("Padé denominator is invertible for ||A|| <= 1/2");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// `[a, b] = ab - ba`.
pub fn commutator<N>(a: &DMatrix<N>, b: &DMatrix<N>) -> DMatrix<N>
where
    N: nalgebra::ComplexField + Copy,
{
    a * b - b * a
}

/// Promote a real matrix to a complex one.
pub fn complexify<T: Real>(a: &DMatrix<T>) -> DMatrix<Cx<T>> {
    a.map(|x| Cx::new(x, T::zero()))
}

/// Block-diagonal matrix from square blocks.
pub fn block_diag<T: Real>(blocks: &[&DMatrix<T>]) -> DMatrix<T> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = DMatrix::zeros(n, n);
    let mut o = 0;
    for b in blocks {
        m.view_mut((o, o), (b.nrows(), b.ncols())).copy_from(*b);
        o += b.nrows();
    }
    m
}

/// Standard complex structure `diag([[0,-1],[1,0]], ...)` on `R^{2n}`.
pub fn standard_j<T: Real>(n: usize) -> DMatrix<T> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k + 1, 2 * k)] = T::one();
        j[(2 * k, 2 * k + 1)] = -T::one();
    }
    j
}

/// Largest absolute entry.
pub fn max_abs<T: Real>(a: &DMatrix<T>) -> T {
    a.iter().fold(T::zero(), |m, x| if x.abs() > m { x.abs() } else { m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn expm_rotation_generator() {
        let t = 2.7f64;
        let x = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm(&x);
        assert_relative_eq!(e[(0, 0)], t.cos(), epsilon = 1e-13);
        assert_relative_eq!(e[(1, 0)], t.sin(), epsilon = 1e-13);
    }

    #[test]
    fn expm_nilpotent_is_exact_polynomial() {
        let x = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 3.0, 0.0, 0.0, 5.0, 0.0, 0.0, 0.0]);
        let e = expm(&x);
        // I + X + X^2/2
        assert_relative_eq!(e[(0, 2)], 3.0 + 2.0 * 5.0 / 2.0, epsilon = 1e-12);
        assert_relative_eq!(e[(0, 1)], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0f64, 1.0, 0.0]);
        let n = null_space(&a, 1e-9);
        assert_eq!(n.ncols(), 2);
        assert!((&a * &n).norm() < 1e-12);
    }
}
