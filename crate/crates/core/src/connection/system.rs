use nalgebra::DVector;
use serde::Serialize;

use super::flatness::report_cx;
use super::graded::GradedForm;
use super::grid::Grid2D;
use crate::liecore::LieAlgebraBasis;
use crate::report::ResidualReport;
use crate::scalar::{lit, to_f64, Cx, Real};

/// `∂_z̄ f = (∂_u f + i ∂_v f) / 2` at every node.
pub fn d_zbar<T: Real>(grid: &Grid2D, f: &[DVector<Cx<T>>]) -> Vec<DVector<Cx<T>>> {
    let i = Cx::new(T::zero(), T::one());
    let half = Cx::new(lit::<T>(0.5), T::zero());
    (0..grid.len())
        .map(|k| {
            let (a, b) = (k % grid.nu, k / grid.nu);
            (grid.d_u(f, a, b) + grid.d_v(f, a, b) * i) * half
        })
        .collect()
}

/// `∂_z f = (∂_u f - i ∂_v f) / 2` at every node.
pub fn d_z<T: Real>(grid: &Grid2D, f: &[DVector<Cx<T>>]) -> Vec<DVector<Cx<T>>> {
    let i = Cx::new(T::zero(), T::one());
    let half = Cx::new(lit::<T>(0.5), T::zero());
    (0..grid.len())
        .map(|k| {
            let (a, b) = (k % grid.nu, k / grid.nu);
            (grid.d_u(f, a, b) - grid.d_v(f, a, b) * i) * half
        })
        .collect()
}

/// `(a) = ∂_z̄ u2 + [ū0, u2]` with `u2 = α_2'`, `ū0 = α_0''`.
pub fn residual_a<T: Real>(alg: &LieAlgebraBasis<T>, gf: &GradedForm<T>) -> Vec<DVector<Cx<T>>> {
    let d = d_zbar(&gf.grid, &gf.z[2]);
    d.into_iter()
        .enumerate()
        .map(|(k, x)| x + alg.bracket_cx(&gf.zb[0][k], &gf.z[2][k]))
        .collect()
}

/// `(b) = ∂_z̄ u1 + [ū0, u1] + [ū1, u2]` with `u1 = α_-1'`, `ū1 = α_1''`.
pub fn residual_b<T: Real>(alg: &LieAlgebraBasis<T>, gf: &GradedForm<T>) -> Vec<DVector<Cx<T>>> {
    let d = d_zbar(&gf.grid, &gf.z[3]);
    d.into_iter()
        .enumerate()
        .map(|(k, x)| x + alg.bracket_cx(&gf.zb[0][k], &gf.z[3][k]) + alg.bracket_cx(&gf.zb[1][k], &gf.z[2][k]))
        .collect()
}

/// `(c) = -∂_z̄ u0 + ∂_z ū0 + [u0, ū0] + [u1, ū1] + [u2, ū2]`.
pub fn residual_c<T: Real>(alg: &LieAlgebraBasis<T>, gf: &GradedForm<T>) -> Vec<DVector<Cx<T>>> {
    let dzb = d_zbar(&gf.grid, &gf.z[0]);
    let dz = d_z(&gf.grid, &gf.zb[0]);
    (0..gf.grid.len())
        .map(|k| {
            &dz[k] - &dzb[k]
                + alg.bracket_cx(&gf.z[0][k], &gf.zb[0][k])
                + alg.bracket_cx(&gf.z[3][k], &gf.zb[1][k])
                + alg.bracket_cx(&gf.z[2][k], &gf.zb[2][k])
        })
        .collect()
}

/// Residuals of the three equations of the second elliptic system.
#[derive(Clone, Debug, Serialize)]
pub struct SystemResiduals {
    pub a: ResidualReport,
    pub b: ResidualReport,
    pub c: ResidualReport,
    /// Largest real part of `(c)` over interior nodes; `(c)` lies in `i g0`.
    pub c_real_part: f64,
}

pub fn system_residuals<T: Real>(alg: &LieAlgebraBasis<T>, gf: &GradedForm<T>) -> SystemResiduals {
    let g = gf.grid;
    let a = residual_a(alg, gf);
    let b = residual_b(alg, gf);
    let c = residual_c(alg, gf);
    let re: Vec<f64> = c.iter().map(|x| to_f64(alg.norm(&x.map(|z| z.re)))).collect();
    let c_real_part = ResidualReport::new(&g, super::flatness::MARGIN, re).max;
    SystemResiduals { a: report_cx(alg, &g, &a), b: report_cx(alg, &g, &b), c: report_cx(alg, &g, &c), c_real_part }
}

/// Verdict on `α_-1'' = α_1' = 0` and `α_-1' ≠ 0`.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub max_am1pp: f64,
    pub max_a1p: f64,
    pub min_am1p: f64,
    pub tol_adm: f64,
    pub floor_imm: f64,
    pub pass: bool,
}

pub const FLOOR_IMM: f64 = 1e-6;

/// Admissibility over interior nodes with `tol_adm = 10 h^2 max|α|` unless overridden.
pub fn admissibility<T: Real>(alg: &LieAlgebraBasis<T>, gf: &GradedForm<T>, tol_adm: Option<f64>) -> AdmissibilityReport {
    let g = gf.grid;
    let tol_adm = tol_adm.unwrap_or(10.0 * g.h * g.h * gf.max_norm(alg, super::flatness::MARGIN));
    let (mut max_am1pp, mut max_a1p, mut min_am1p) = (0.0f64, 0.0f64, f64::INFINITY);
    for j in 0..g.nv {
        for i in 0..g.nu {
            if !g.is_interior(i, j, super::flatness::MARGIN) {
                continue;
            }
            let k = g.idx(i, j);
            max_am1pp = max_am1pp.max(to_f64(alg.norm_cx(&gf.zb[3][k])));
            max_a1p = max_a1p.max(to_f64(alg.norm_cx(&gf.z[1][k])));
            min_am1p = min_am1p.min(to_f64(alg.norm_cx(&gf.z[3][k])));
        }
    }
    let pass = max_am1pp < tol_adm && max_a1p < tol_adm && min_am1p > FLOOR_IMM;
    AdmissibilityReport { max_am1pp, max_a1p, min_am1p, tol_adm, floor_imm: FLOOR_IMM, pass }
}
