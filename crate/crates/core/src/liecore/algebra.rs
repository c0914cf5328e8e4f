use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{pinv, sv_extremes};
use crate::scalar::{to_f64, tol, Cx, Real};

/// A real Lie algebra given by a basis of `n x n` matrices.
///
/// Elements are handled through their coefficient vectors in this basis.
/// Basis elements flagged as translations carry a Euclidean metric in
/// [`gram`](Self::gram) instead of the trace form.
#[derive(Clone, Debug)]
pub struct LieAlgebraBasis<T: Real> {
    pub n: usize,
    pub basis: Vec<DMatrix<T>>,
    pub translation: Vec<bool>,
    /// `c[(i * d + j) * d + k]`: coefficient of `X_k` in `[X_i, X_j]`.
    structure: Vec<T>,
    coord_map: DMatrix<T>,
    gram: DMatrix<T>,
    pub closure_residual: T,
    pub jacobi_residual: T,
}

/// Builds a Lie algebra from a matrix basis, checking independence, closure
/// and the Jacobi identity (`tol`, relative to basis norms).
pub fn make_algebra<T: Real>(
    n: usize,
    basis: Vec<DMatrix<T>>,
    translation: Option<Vec<bool>>,
    tol_closure: T,
) -> Result<LieAlgebraBasis<T>> {
    let d = basis.len();
    if d == 0 {
        return Err(Error::DependentBasis(0.0));
    }
    for b in &basis {
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::ShapeMismatch(format!("basis element is {}x{}, expected {n}x{n}", b.nrows(), b.ncols())));
        }
    }
    let translation = translation.unwrap_or_else(|| vec![false; d]);
    if translation.len() != d {
        return Err(Error::ShapeMismatch("translation flags length".into()));
    }
    let mut stacked = DMatrix::zeros(n * n, d);
    for (i, b) in basis.iter().enumerate() {
        stacked.set_column(i, &DVector::from_column_slice(b.as_slice()));
    }
    let (smin, smax) = sv_extremes(&stacked);
    if smin <= tol::<T>(1e-9) * smax {
        return Err(Error::DependentBasis(to_f64(smin / smax)));
    }
    let coord_map = pinv(&stacked, tol::<T>(1e-12));

    let mut structure = vec![T::zero(); d * d * d];
    let mut closure = T::zero();
    for i in 0..d {
        for j in (i + 1)..d {
            let c = &basis[i] * &basis[j] - &basis[j] * &basis[i];
            let v = DVector::from_column_slice(c.as_slice());
            let x = &coord_map * &v;
            let res = (&stacked * &x - &v).norm() / (basis[i].norm() * basis[j].norm());
            closure = closure.max(res);
            for k in 0..d {
                structure[(i * d + j) * d + k] = x[k];
                structure[(j * d + i) * d + k] = -x[k];
            }
        }
    }
    if closure > tol_closure {
        return Err(Error::NotClosed(to_f64(closure)));
    }

    let gram = DMatrix::from_fn(d, d, |i, j| {
        if translation[i] && translation[j] {
            let a = basis[i].column(n - 1);
            let b = basis[j].column(n - 1);
            a.rows(0, n - 1).dot(&b.rows(0, n - 1))
        } else if translation[i] || translation[j] {
            T::zero()
        } else {
            -(&basis[i] * &basis[j]).trace()
        }
    });

    let mut alg = LieAlgebraBasis {
        n,
        basis,
        translation,
        structure,
        coord_map,
        gram,
        closure_residual: closure,
        jacobi_residual: T::zero(),
    };
    alg.jacobi_residual = alg.jacobi();
    if alg.jacobi_residual > tol_closure {
        return Err(Error::NotClosed(to_f64(alg.jacobi_residual)));
    }
    Ok(alg)
}

impl<T: Real> LieAlgebraBasis<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> T {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    /// Coefficients of a matrix by least squares, with the fitting residual.
    pub fn coords_with_residual(&self, m: &DMatrix<T>) -> (DVector<T>, T) {
        let v = DVector::from_column_slice(m.as_slice());
        let x = &self.coord_map * &v;
        let back = self.element(&x);
        (x, (back - m).norm())
    }

    pub fn coords(&self, m: &DMatrix<T>) -> DVector<T> {
        &self.coord_map * DVector::from_column_slice(m.as_slice())
    }

    /// Matrix of the element with coefficients `x`.
    pub fn element(&self, x: &DVector<T>) -> DMatrix<T> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (k, b) in self.basis.iter().enumerate() {
            if x[k] != T::zero() {
                m += b * x[k];
            }
        }
        m
    }

    pub fn bracket(&self, x: &DVector<T>, y: &DVector<T>) -> DVector<T> {
        let d = self.dim();
        let mut out = DVector::zeros(d);
        for i in 0..d {
            if x[i] == T::zero() {
                continue;
            }
            for j in 0..d {
                let s = x[i] * y[j];
                if s == T::zero() {
                    continue;
                }
                let base = (i * d + j) * d;
                for k in 0..d {
                    out[k] += s * self.structure[base + k];
                }
            }
        }
        out
    }

    /// Complex-bilinear extension of the bracket.
    pub fn bracket_cx(&self, x: &DVector<Cx<T>>, y: &DVector<Cx<T>>) -> DVector<Cx<T>> {
        let d = self.dim();
        let zero = Cx::new(T::zero(), T::zero());
        let mut out = DVector::from_element(d, zero);
        for i in 0..d {
            if x[i] == zero {
                continue;
            }
            for j in 0..d {
                let s = x[i] * y[j];
                if s == zero {
                    continue;
                }
                let base = (i * d + j) * d;
                for k in 0..d {
                    out[k] += s * self.structure[base + k];
                }
            }
        }
        out
    }

    /// `ad x` as a `d x d` matrix.
    pub fn ad(&self, x: &DVector<T>) -> DMatrix<T> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            if x[i] == T::zero() {
                continue;
            }
            for j in 0..d {
                let base = (i * d + j) * d;
                for k in 0..d {
                    m[(k, j)] += x[i] * self.structure[base + k];
                }
            }
        }
        m
    }

    /// Killing form `tr(ad X_i ad X_j)`.
    pub fn killing(&self) -> DMatrix<T> {
        let d = self.dim();
        let ads: Vec<DMatrix<T>> = (0..d).map(|i| self.ad(&unit(d, i))).collect();
        DMatrix::from_fn(d, d, |i, j| (&ads[i] * &ads[j]).trace())
    }

    /// Metric on coefficient vectors: `-tr(XY)` on the linear part, Euclidean on translations.
    pub fn gram(&self) -> &DMatrix<T> {
        &self.gram
    }

    pub fn norm(&self, x: &DVector<T>) -> T {
        (x.transpose() * &self.gram * x)[(0, 0)].max(T::zero()).sqrt()
    }

    pub fn norm_cx(&self, x: &DVector<Cx<T>>) -> T {
        let re = x.map(|z| z.re);
        let im = x.map(|z| z.im);
        (self.norm(&re).powi(2) + self.norm(&im).powi(2)).sqrt()
    }

    /// `Ad g` as a `d x d` matrix in this basis, with the worst fitting residual.
    pub fn adjoint(&self, g: &DMatrix<T>) -> Option<(DMatrix<T>, T)> {
        let gi = g.clone().try_inverse()?;
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        let mut worst = T::zero();
        for (i, b) in self.basis.iter().enumerate() {
            let (x, r) = self.coords_with_residual(&(g * b * &gi));
            worst = worst.max(r);
            m.set_column(i, &x);
        }
        Some((m, worst))
    }

    fn jacobi(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        // [[X_i, X_j], X_k] + cyclic, in coefficients.
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    let mut acc = vec![T::zero(); d];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for m in 0..d {
                            let cab = self.c(a, b, m);
                            if cab == T::zero() {
                                continue;
                            }
                            for (l, v) in acc.iter_mut().enumerate() {
                                *v += cab * self.c(m, c, l);
                            }
                        }
                    }
                    for v in acc {
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
        worst
    }
}

pub(crate) fn unit<T: Real>(d: usize, i: usize) -> DVector<T> {
    let mut v = DVector::zeros(d);
    v[i] = T::one();
    v
}
