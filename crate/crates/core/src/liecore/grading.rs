use nalgebra::{DMatrix, DVector};

use super::algebra::LieAlgebraBasis;
use super::automorphism::LinearAutomorphism;
use crate::error::{Error, Result};
use crate::linalg::{complexify, null_space, null_space_cx};
use crate::scalar::{to_f64, tol, Cx, Real};

/// Eigenspace decomposition `g^C = g~0 + g~1 + g~2 + g~(-1)` of an automorphism of order 4.
///
/// `g~k` is the `i^k` eigenspace; index 3 stands for `-1`. Complex bases are
/// columns of `bases[k]`, and `projectors[k]` is the projection onto `g~k`
/// along the other three. Real forms: `g0`, `g2`, `h = g0 + g2`, `m`.
#[derive(Clone, Debug)]
pub struct Z4Grading<T: Real> {
    pub tau: LinearAutomorphism<T>,
    pub bases: [DMatrix<Cx<T>>; 4],
    pub projectors: [DMatrix<Cx<T>>; 4],
    pub g0: DMatrix<T>,
    pub g2: DMatrix<T>,
    pub h: DMatrix<T>,
    pub m: DMatrix<T>,
    /// Worst `|[g~k, g~l]` outside `g~(k+l)|` over basis pairs.
    pub closure_residual: T,
}

pub fn z4_decompose<T: Real>(alg: &LieAlgebraBasis<T>, tau: &LinearAutomorphism<T>) -> Result<Z4Grading<T>> {
    let d = alg.dim();
    let rel = tol::<T>(1e-9);
    let id = DMatrix::<T>::identity(d, d);
    let t = &tau.matrix;
    let b0 = null_space(&(t - &id), rel);
    let b2 = null_space(&(t + &id), rel);
    let i = Cx::new(T::zero(), T::one());
    let shifted = complexify(t) - DMatrix::<Cx<T>>::identity(d, d) * i;
    let b1 = null_space_cx(&shifted, rel);
    let bm1 = b1.map(|z| z.conj());
    let bases = [complexify(&b0), b1, complexify(&b2), bm1];
    let g = Z4Grading::from_parts(alg, tau.clone(), bases)?;
    if g.closure_residual > tol::<T>(1e-9) {
        return Err(Error::ToleranceFailure(to_f64(g.closure_residual)));
    }
    Ok(g)
}

/// Recomputes the bracket-compatibility residual of a grading.
pub fn check_grading<T: Real>(alg: &LieAlgebraBasis<T>, g: &Z4Grading<T>) -> T {
    closure(alg, &g.bases, &g.projectors)
}

impl<T: Real> Z4Grading<T> {
    /// Assembles a grading from explicit eigenspace bases without checking them
    /// against `tau` (the closure residual is still computed).
    pub fn from_parts(alg: &LieAlgebraBasis<T>, tau: LinearAutomorphism<T>, bases: [DMatrix<Cx<T>>; 4]) -> Result<Self> {
        let d = alg.dim();
        let dims = [bases[0].ncols(), bases[1].ncols(), bases[2].ncols(), bases[3].ncols()];
        if dims.iter().sum::<usize>() != d {
            return Err(Error::GradingMismatch { dims, total: d });
        }
        let mut full = DMatrix::<Cx<T>>::zeros(d, d);
        let mut off = 0;
        for b in &bases {
            full.view_mut((0, off), (d, b.ncols())).copy_from(b);
            off += b.ncols();
        }
        let inv = full
            .try_inverse()
            .ok_or(Error::GradingMismatch { dims, total: d })?;
        let mut off = 0;
        let projectors = bases.clone().map(|b| {
            let k = b.ncols();
            let p = &b * inv.rows(off, k);
            off += k;
            p
        });
        let closure_residual = closure(alg, &bases, &projectors);
        let real = |b: &DMatrix<Cx<T>>| b.map(|z| z.re);
        let g0 = real(&bases[0]);
        let g2 = real(&bases[2]);
        let mut h = DMatrix::zeros(d, g0.ncols() + g2.ncols());
        h.view_mut((0, 0), (d, g0.ncols())).copy_from(&g0);
        h.view_mut((0, g0.ncols()), (d, g2.ncols())).copy_from(&g2);
        let pm = (&projectors[1] + &projectors[3]).map(|z| z.re);
        let m = canonical_span(&pm, dims[1] + dims[3]).unwrap_or_else(|| {
            let t2 = &tau.matrix * &tau.matrix;
            null_space(&(t2 + DMatrix::identity(d, d)), tol::<T>(1e-9))
        });
        Ok(Self { tau, bases, projectors, g0, g2, h, m, closure_residual })
    }

    /// `(dim g~0, dim g~1, dim g~2, dim g~(-1))`.
    pub fn dims(&self) -> [usize; 4] {
        [self.bases[0].ncols(), self.bases[1].ncols(), self.bases[2].ncols(), self.bases[3].ncols()]
    }

    /// Projection onto `g~k`, `k` taken mod 4.
    pub fn project(&self, k: i32, x: &DVector<Cx<T>>) -> DVector<Cx<T>> {
        &self.projectors[k.rem_euclid(4) as usize] * x
    }

    /// Real projector onto `m` along `h`.
    pub fn proj_m(&self) -> DMatrix<T> {
        (&self.projectors[1] + &self.projectors[3]).map(|z| z.re)
    }

    pub fn proj_h(&self) -> DMatrix<T> {
        (&self.projectors[0] + &self.projectors[2]).map(|z| z.re)
    }
}

/// Orthonormal basis of the column space of a projector, by Gram-Schmidt over its
/// columns in order. Unlike an SVD null space it depends continuously on the projector,
/// so a spec rebuilt from rounded data reproduces the same `m` coordinates.
fn canonical_span<T: Real>(p: &DMatrix<T>, rank: usize) -> Option<DMatrix<T>> {
    let scale = p.column_iter().map(|c| c.norm()).fold(T::zero(), |a, b| a.max(b));
    let mut out: Vec<DVector<T>> = Vec::with_capacity(rank);
    for c in p.column_iter() {
        let mut v = c.into_owned();
        for _ in 0..2 {
            for q in &out {
                let dot = q.dot(&v);
                v -= q * dot;
            }
        }
        let n = v.norm();
        if n > tol::<T>(1e-6) * scale {
            out.push(v / n);
        }
    }
    (out.len() == rank).then(|| DMatrix::from_columns(&out))
}

fn closure<T: Real>(alg: &LieAlgebraBasis<T>, bases: &[DMatrix<Cx<T>>; 4], proj: &[DMatrix<Cx<T>>; 4]) -> T {
    let mut worst = T::zero();
    for k in 0..4 {
        for l in 0..4 {
            let target = &proj[(k + l) % 4];
            for a in 0..bases[k].ncols() {
                let x = bases[k].column(a).into_owned();
                for b in 0..bases[l].ncols() {
                    let y = bases[l].column(b).into_owned();
                    let z = alg.bracket_cx(&x, &y);
                    let out = &z - target * &z;
                    let scale = alg.norm_cx(&x) * alg.norm_cx(&y);
                    let r = alg.norm_cx(&out) / scale.max(T::default_epsilon());
                    worst = worst.max(r);
                }
            }
        }
    }
    worst
}
