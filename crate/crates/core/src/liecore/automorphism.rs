use nalgebra::DMatrix;

use super::algebra::{unit, LieAlgebraBasis};
use crate::error::{Error, Result};
use crate::scalar::{to_f64, tol, Real};

/// A Lie algebra automorphism of finite order, as a `d x d` matrix on coefficients.
#[derive(Clone, Debug)]
pub struct LinearAutomorphism<T: Real> {
    pub matrix: DMatrix<T>,
    pub order: u32,
    /// `max |tau[X_i, X_j] - [tau X_i, tau X_j]|`.
    pub residual: T,
}

impl<T: Real> LinearAutomorphism<T> {
    /// Validates `tau^order = Id` and the homomorphism property (both to `1e-9`).
    pub fn new(alg: &LieAlgebraBasis<T>, matrix: DMatrix<T>, order: u32) -> Result<Self> {
        let d = alg.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::ShapeMismatch(format!("automorphism is {}x{}, algebra has dim {d}", matrix.nrows(), matrix.ncols())));
        }
        let t = tol::<T>(1e-9);
        let mut p = DMatrix::identity(d, d);
        for _ in 0..order {
            p = &matrix * p;
        }
        let per = (p - DMatrix::identity(d, d)).abs().max();
        if per > t {
            return Err(Error::NotAutomorphism(format!("tau^{order} - Id = {:e}", to_f64(per))));
        }
        let residual = hom_residual(alg, &matrix);
        if residual > t {
            return Err(Error::NotAutomorphism(format!("bracket defect {:e}", to_f64(residual))));
        }
        Ok(Self { matrix, order, residual })
    }

    /// `Int(g): X -> g X g^-1`.
    pub fn inner(alg: &LieAlgebraBasis<T>, g: &DMatrix<T>, order: u32) -> Result<Self> {
        let (m, fit) = alg
            .adjoint(g)
            .ok_or_else(|| Error::NotAutomorphism("conjugating matrix is singular".into()))?;
        if fit > tol::<T>(1e-9) {
            return Err(Error::NotAutomorphism(format!("Int(g) leaves the algebra ({:e})", to_f64(fit))));
        }
        Self::new(alg, m, order)
    }
}

fn hom_residual<T: Real>(alg: &LieAlgebraBasis<T>, tau: &DMatrix<T>) -> T {
    let d = alg.dim();
    let mut worst = T::zero();
    for i in 0..d {
        for j in (i + 1)..d {
            let lhs = tau * alg.bracket(&unit(d, i), &unit(d, j));
            let rhs = alg.bracket(&tau.column(i).into_owned(), &tau.column(j).into_owned());
            worst = worst.max((lhs - rhs).amax());
        }
    }
    worst
}
