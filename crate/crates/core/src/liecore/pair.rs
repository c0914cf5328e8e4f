use nalgebra::DMatrix;

use super::algebra::LieAlgebraBasis;
use crate::error::{Error, Result};
use crate::linalg::pinv;
use crate::scalar::{lit, to_f64, tol, Real};

/// `R[a][b] = ad_m([m_a, m_b]_h)` for an orthonormal basis of `m`.
#[derive(Clone, Debug)]
pub struct CurvatureTensor<T: Real> {
    pub p: usize,
    pub r: Vec<Vec<DMatrix<T>>>,
}

impl<T: Real> CurvatureTensor<T> {
    /// Bilinear extension `R(x, y)` for coordinate vectors `x, y` of `m`.
    pub fn eval(&self, x: &[T], y: &[T]) -> DMatrix<T> {
        let mut out = DMatrix::zeros(self.p, self.p);
        for a in 0..self.p {
            for b in 0..self.p {
                let s = x[a] * y[b];
                if s != T::zero() {
                    out += &self.r[a][b] * s;
                }
            }
        }
        out
    }
}

/// Reductive pair `g = h + m` with an orthonormal basis of `m`.
#[derive(Clone, Debug)]
pub struct SymmetricPair<T: Real> {
    /// Basis of `h` (columns, coefficients in `g`).
    pub h: DMatrix<T>,
    /// Basis of `m`, orthonormal for the chosen inner product.
    pub m: DMatrix<T>,
    /// `ad_m(h_r)` in the basis `m`, one per column of `h`.
    pub ad_m: Vec<DMatrix<T>>,
    pub curvature: CurvatureTensor<T>,
    m_coords: DMatrix<T>,
    h_coords: DMatrix<T>,
}

/// Inner product on `m`: minus the Killing form on the linear part plus the
/// Euclidean product of translation coordinates, then averaged over `J0`.
///
/// `m0` holds a basis of `m` as columns; `j0` (if given) acts on those coordinates.
pub fn inner_product_m<T: Real>(alg: &LieAlgebraBasis<T>, m0: &DMatrix<T>, j0: Option<&DMatrix<T>>) -> Result<DMatrix<T>> {
    let d = alg.dim();
    let kill = alg.killing();
    let lin = DMatrix::from_fn(d, d, |i, j| {
        if alg.translation[i] || alg.translation[j] {
            T::zero()
        } else {
            -kill[(i, j)]
        }
    });
    let tr = DMatrix::from_fn(d, d, |i, j| {
        if alg.translation[i] && alg.translation[j] {
            alg.gram()[(i, j)]
        } else {
            T::zero()
        }
    });
    let mut b = m0.transpose() * (lin + tr) * m0;
    b = (&b + b.transpose()) * lit::<T>(0.5);
    if let Some(j) = j0 {
        b = (&b + j.transpose() * &b * j) * lit::<T>(0.5);
    }
    if b.clone().cholesky().is_none() {
        return Err(Error::BadInnerProduct("not positive definite on m".into()));
    }
    Ok(b)
}

impl<T: Real> SymmetricPair<T> {
    /// Builds the pair from bases of `h` and `m`, orthonormalizing `m` for
    /// [`inner_product_m`]. `tau_m` (acting on the given `m` coordinates) is
    /// used for the `J0`-averaging.
    pub fn new(alg: &LieAlgebraBasis<T>, h: DMatrix<T>, m0: DMatrix<T>, tau_m: Option<&DMatrix<T>>) -> Result<Self> {
        let b = inner_product_m(alg, &m0, tau_m)?;
        let l = b.cholesky().expect("checked positive definite").l();
        let linv_t = l.transpose().try_inverse().expect("Cholesky factor is invertible");
        let m = &m0 * linv_t;
        let p = m.ncols();
        let m_coords = pinv(&m, tol::<T>(1e-12));
        let h_coords = pinv(&h, tol::<T>(1e-12));
        let t = tol::<T>(1e-8);

        let mut ad_m = Vec::with_capacity(h.ncols());
        for r in 0..h.ncols() {
            let hr = h.column(r).into_owned();
            let mut a = DMatrix::zeros(p, p);
            for c in 0..p {
                let y = alg.bracket(&hr, &m.column(c).into_owned());
                let x = &m_coords * &y;
                let fit = (&m * &x - &y).amax();
                if fit > t * (T::one() + y.amax()) {
                    return Err(Error::NotClosed(to_f64(fit)));
                }
                a.set_column(c, &x);
            }
            let skew = (&a + a.transpose()).amax();
            if skew > t * (T::one() + a.amax()) {
                return Err(Error::BadInnerProduct(format!("ad_m(h) not skew ({:e})", to_f64(skew))));
            }
            ad_m.push(a);
        }

        let mut r = vec![vec![DMatrix::zeros(p, p); p]; p];
        for a in 0..p {
            for b in (a + 1)..p {
                let y = alg.bracket(&m.column(a).into_owned(), &m.column(b).into_owned());
                let c = &h_coords * &y;
                let mut acc = DMatrix::zeros(p, p);
                for (k, adk) in ad_m.iter().enumerate() {
                    acc += adk * c[k];
                }
                r[b][a] = -&acc;
                r[a][b] = acc;
            }
        }
        Ok(Self { h, m, ad_m, curvature: CurvatureTensor { p, r }, m_coords, h_coords })
    }

    pub fn dim_h(&self) -> usize {
        self.h.ncols()
    }

    pub fn dim_m(&self) -> usize {
        self.m.ncols()
    }

    /// Coordinates in the `m` basis of a coefficient vector lying in `m`.
    pub fn m_coords(&self) -> &DMatrix<T> {
        &self.m_coords
    }

    pub fn h_coords(&self) -> &DMatrix<T> {
        &self.h_coords
    }

    /// Restriction to `m` (in the orthonormal basis) of a `d x d` map preserving `m`.
    pub fn restrict_m(&self, map: &DMatrix<T>) -> DMatrix<T> {
        &self.m_coords * map * &self.m
    }

    /// Restriction to `h` of a `d x d` map preserving `h`.
    pub fn restrict_h(&self, map: &DMatrix<T>) -> DMatrix<T> {
        &self.h_coords * map * &self.h
    }
}
