use nalgebra::{DMatrix, DVector};

use super::algebra::LieAlgebraBasis;
use super::automorphism::LinearAutomorphism;
use super::grading::Z4Grading;
use super::matrices::so_basis;
use super::pair::{CurvatureTensor, SymmetricPair};
use crate::error::{Error, Result};
use crate::linalg::{block_diag, null_space_scaled, pinv, sv_extremes};
use crate::scalar::{to_f64, tol, Real};

/// Order-4 extension of a complex structure `J0` on `m` to `h + m`.
#[derive(Clone, Debug)]
pub struct TauExtension<T: Real> {
    /// `Ad(J0)` on `h`, in the basis of the action matrices.
    pub tau_h: DMatrix<T>,
    pub j0: DMatrix<T>,
    /// `tau_h (+) J0` on `h (+) m`.
    pub tau: DMatrix<T>,
    /// Worst fitting residual of `J0 A J0^-1` in `span(A_r)`.
    pub residual: T,
}

/// Extends `J0 ∈ Σ(m)` to `tau = Ad_m^-1 ∘ Ad(J0) ∘ ad_m` on `h` and `J0` on `m`.
///
/// `h_action[r] = ad_m(h_r)`, which must be linearly independent (faithful action).
pub fn tau_from_j0<T: Real>(h_action: &[DMatrix<T>], j0: &DMatrix<T>) -> Result<TauExtension<T>> {
    let p = j0.nrows();
    let t = tol::<T>(1e-9);
    let cs = (j0 * j0 + DMatrix::identity(p, p)).amax();
    if j0.ncols() != p || cs > t {
        return Err(Error::NotComplexStructure(to_f64(cs)));
    }
    if h_action.iter().any(|a| a.nrows() != p || a.ncols() != p) {
        return Err(Error::ActionMismatch(format!("action matrices must be {p}x{p}")));
    }
    let dh = h_action.len();
    let mut stacked = DMatrix::zeros(p * p, dh);
    for (r, a) in h_action.iter().enumerate() {
        stacked.set_column(r, &DVector::from_column_slice(a.as_slice()));
    }
    if dh > 0 {
        let (smin, smax) = sv_extremes(&stacked);
        if smin <= t * smax {
            return Err(Error::ActionMismatch("ad_m is not injective on h".into()));
        }
    }
    let coords = pinv(&stacked, tol::<T>(1e-12));
    let j0_inv = -j0;
    let mut tau_h = DMatrix::zeros(dh, dh);
    let mut residual = T::zero();
    for (r, a) in h_action.iter().enumerate() {
        let c = j0 * a * &j0_inv;
        let v = DVector::from_column_slice(c.as_slice());
        let x = &coords * &v;
        let fit = (&stacked * &x - &v).amax() / (T::one() + v.amax());
        residual = residual.max(fit);
        tau_h.set_column(r, &x);
    }
    if residual > t {
        return Err(Error::NotInvariant(to_f64(residual)));
    }
    let tau = block_diag(&[&tau_h, j0]);
    Ok(TauExtension { tau_h, j0: j0.clone(), tau, residual })
}

/// Whether `R(J0 x, J0 y) = J0 R(x, y) J0^-1` for all `x, y`, with the residual.
pub fn curvature_invariance_check<T: Real>(r: &CurvatureTensor<T>, j0: &DMatrix<T>) -> (bool, T) {
    let p = r.p;
    let j0_inv = j0.clone().try_inverse().unwrap_or_else(|| -j0);
    let mut worst = T::zero();
    let mut scale = T::zero();
    for a in 0..p {
        for b in (a + 1)..p {
            let x: Vec<T> = j0.column(a).iter().copied().collect();
            let y: Vec<T> = j0.column(b).iter().copied().collect();
            let lhs = r.eval(&x, &y);
            let rhs = j0 * &r.r[a][b] * &j0_inv;
            worst = worst.max((lhs - rhs).amax());
            scale = scale.max(r.r[a][b].amax());
        }
    }
    let rel = worst / (T::one() + scale);
    (rel <= tol::<T>(1e-9), rel)
}

/// Skew derivations of the curvature: `A ∈ so(m)` with
/// `[A, R(x, y)] = R(Ax, y) + R(x, Ay)`. Returned as a basis of `p x p` matrices.
pub fn der_m<T: Real>(r: &CurvatureTensor<T>) -> Vec<DMatrix<T>> {
    let p = r.p;
    let so = so_basis::<T>(p);
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|a| ((a + 1)..p).map(move |b| (a, b))).collect();
    let rows = pairs.len() * p * p;
    if rows == 0 {
        return so;
    }
    let mut sys = DMatrix::zeros(rows, so.len());
    for (s, a_mat) in so.iter().enumerate() {
        for (n, &(a, b)) in pairs.iter().enumerate() {
            let xa: Vec<T> = a_mat.column(a).iter().copied().collect();
            let xb: Vec<T> = a_mat.column(b).iter().copied().collect();
            let mut ea = vec![T::zero(); p];
            ea[a] = T::one();
            let mut eb = vec![T::zero(); p];
            eb[b] = T::one();
            let rab = &r.r[a][b];
            let c = a_mat * rab - rab * a_mat - r.eval(&xa, &eb) - r.eval(&ea, &xb);
            for (k, v) in c.iter().enumerate() {
                sys[(n * p * p + k, s)] = *v;
            }
        }
    }
    let scale = T::one() + r.r.iter().flatten().map(|m| m.amax()).fold(T::zero(), T::max);
    let ns = null_space_scaled(&sys, tol::<T>(1e-9), scale);
    (0..ns.ncols())
        .map(|c| {
            let mut m = DMatrix::zeros(p, p);
            for (k, s) in so.iter().enumerate() {
                m += s * ns[(k, c)];
            }
            m
        })
        .collect()
}

/// `g0 = {a ∈ h : [ad_m a, tau|m] = 0}`, checked against the grading's `g0`.
///
/// Returns a basis of `g0` as coefficient vectors in `g` (columns).
pub fn compute_g0<T: Real>(pair: &SymmetricPair<T>, grading: &Z4Grading<T>) -> Result<DMatrix<T>> {
    let tau_m = pair.restrict_m(&grading.tau.matrix);
    let p = pair.dim_m();
    let dh = pair.dim_h();
    let mut sys = DMatrix::zeros(p * p, dh);
    for (r, a) in pair.ad_m.iter().enumerate() {
        let c = a * &tau_m - &tau_m * a;
        sys.set_column(r, &DVector::from_column_slice(c.as_slice()));
    }
    let scale = pair.ad_m.iter().map(|a| a.amax()).fold(T::zero(), T::max) * tau_m.amax();
    let ns = null_space_scaled(&sys, tol::<T>(1e-9), scale);
    let g0 = &pair.h * ns;
    let want = &grading.g0;
    if g0.ncols() != want.ncols() {
        return Err(Error::InconsistentGrading(format!(
            "centralizer has dim {}, grading has dim {}",
            g0.ncols(),
            want.ncols()
        )));
    }
    if want.ncols() > 0 {
        let proj = want * pinv(want, tol::<T>(1e-12));
        let off = (&g0 - &proj * &g0).amax();
        if off > tol::<T>(1e-8) {
            return Err(Error::InconsistentGrading(format!("spans differ by {:e}", to_f64(off))));
        }
    }
    Ok(g0)
}

impl<T: Real> SymmetricPair<T> {
    /// The automorphism of `g` extending `J0` (given in the orthonormal `m` basis).
    pub fn tau_from_j0(&self, alg: &LieAlgebraBasis<T>, j0: &DMatrix<T>) -> Result<LinearAutomorphism<T>> {
        let ext = tau_from_j0(&self.ad_m, j0)?;
        let d = alg.dim();
        let mut frame = DMatrix::zeros(d, d);
        frame.view_mut((0, 0), (d, self.dim_h())).copy_from(&self.h);
        frame.view_mut((0, self.dim_h()), (d, self.dim_m())).copy_from(&self.m);
        let inv = frame
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::ShapeMismatch("h and m do not span g".into()))?;
        LinearAutomorphism::new(alg, frame * ext.tau * inv, 4)
    }
}
