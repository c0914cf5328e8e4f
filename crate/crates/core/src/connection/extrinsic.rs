use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::flatness::MARGIN;
use super::form::FrameGrid;
use super::graded::GradedForm;
use super::harmonic::vertical_harmonicity_field;
use crate::error::{Error, Result};
use crate::fourbundle::FourSymmetricSpec;
use crate::report::ResidualReport;
use crate::scalar::{lit, to_f64, Real};

/// Vertical part of the rough Laplacian of `J = Ad U ∘ J0 ∘ Ad U^-1`, computed from
/// the frames alone.
#[derive(Clone, Debug)]
pub struct ExtrinsicLaplacian<T: Real> {
    /// `pr⊥(Tr ∇²J)` in the moving basis `Ad U(m)`, per node (`p x p`).
    pub vertical: Vec<DMatrix<T>>,
    pub report: ResidualReport,
    /// Largest `|[Tr ∇²J - pr⊥, J]|` over interior nodes (the discarded part commutes with `J`).
    pub commute_defect: f64,
    /// Largest symmetric part of `Tr ∇²J` in the orthonormal moving basis.
    pub sym_defect: f64,
}

/// Largest `|J^2 + Id|` on `Ad U(m)` tolerated before rejecting the field.
pub const ANTI_INVOLUTION_TOL: f64 = 1e-8;

pub fn extrinsic_vertical_laplacian<T: Real>(spec: &FourSymmetricSpec<T>, frames: &FrameGrid<T>) -> Result<ExtrinsicLaplacian<T>> {
    let alg = &spec.algebra;
    let g = frames.grid;
    let pm = spec.grading.proj_m();
    let j0 = -spec.tau_on_m();
    let mut ad = Vec::with_capacity(g.len());
    let mut ad_inv = Vec::with_capacity(g.len());
    let mut jf = Vec::with_capacity(g.len());
    let mut pf = Vec::with_capacity(g.len());
    for k in 0..g.len() {
        let (i, j) = (k % g.nu, k / g.nu);
        let (a, _) = alg.adjoint(&frames.frames[k]).ok_or(Error::SingularFrame(i, j))?;
        let ai = a.clone().try_inverse().ok_or(Error::SingularFrame(i, j))?;
        let jj = &a * &j0 * &ai;
        let p = &a * &pm * &ai;
        let sq = to_f64((&jj * &jj + &p).amax());
        if sq > ANTI_INVOLUTION_TOL * (1.0 + to_f64(jj.amax())).powi(2) {
            return Err(Error::NotAntiInvolution(format!("J^2 + Id = {sq:e} at node ({i}, {j})")));
        }
        jf.push(jj);
        pf.push(p);
        ad.push(a);
        ad_inv.push(ai);
    }
    let nab = |f: &[DMatrix<T>], du: bool| -> Vec<DMatrix<T>> {
        let d = if du { g.d_u_field(f) } else { g.d_v_field(f) };
        d.iter().zip(&pf).map(|(x, p)| p * x * p).collect()
    };
    let ju = nab(&jf, true);
    let jv = nab(&jf, false);
    let juu = nab(&ju, true);
    let jvv = nab(&jv, false);

    let e = &spec.pair.m;
    let ec = spec.pair.m_coords();
    let jm = spec.admissible_j0();
    let half = lit::<T>(0.5);
    let mut vertical = Vec::with_capacity(g.len());
    let mut norms = Vec::with_capacity(g.len());
    let (mut commute, mut sym) = (0.0f64, 0.0f64);
    for k in 0..g.len() {
        let lap = &juu[k] + &jvv[k];
        let m = ec * &ad_inv[k] * lap * &ad[k] * e;
        let s = (&m - m.transpose()) * half;
        let ant = (&s + &jm * &s * &jm) * half;
        let rest = &s - &ant;
        let (i, j) = (k % g.nu, k / g.nu);
        if g.is_interior(i, j, MARGIN) {
            commute = commute.max(to_f64((&rest * &jm - &jm * &rest).amax()));
            sym = sym.max(to_f64(((&m + m.transpose()) * half).amax()));
        }
        norms.push(to_f64(ant.norm()));
        vertical.push(ant);
    }
    Ok(ExtrinsicLaplacian { vertical, report: ResidualReport::new(&g, MARGIN, norms), commute_defect: commute, sym_defect: sym })
}

/// Agreement between the extrinsic Laplacian and `-8 ad_m(r) ∘ tau|m`, where `r` is
/// the graded-form vertical-harmonicity residual.
#[derive(Clone, Debug, Serialize)]
pub struct DualPathReport {
    pub extrinsic: ResidualReport,
    pub predicted: ResidualReport,
    pub difference: ResidualReport,
    pub commute_defect: f64,
    pub sym_defect: f64,
}

pub const DUAL_PATH_FACTOR: f64 = -8.0;

/// `ad_m(r) ∘ tau|m` in the orthonormal `m` basis.
pub fn predicted_vertical<T: Real>(spec: &FourSymmetricSpec<T>, r: &DVector<T>) -> DMatrix<T> {
    spec.pair.restrict_m(&spec.algebra.ad(r)) * &spec.j0_m * lit::<T>(DUAL_PATH_FACTOR)
}

pub fn dual_path_agreement<T: Real>(spec: &FourSymmetricSpec<T>, frames: &FrameGrid<T>, gf: &GradedForm<T>) -> Result<DualPathReport> {
    let ext = extrinsic_vertical_laplacian(spec, frames)?;
    let r = vertical_harmonicity_field(&spec.algebra, &spec.grading, gf);
    let g = frames.grid;
    let mut pn = Vec::with_capacity(g.len());
    let mut dn = Vec::with_capacity(g.len());
    for k in 0..g.len() {
        let p = predicted_vertical(spec, &r[k]);
        dn.push(to_f64((&ext.vertical[k] - &p).norm()));
        pn.push(to_f64(p.norm()));
    }
    Ok(DualPathReport {
        extrinsic: ext.report,
        predicted: ResidualReport::new(&g, MARGIN, pn),
        difference: ResidualReport::new(&g, MARGIN, dn),
        commute_defect: ext.commute_defect,
        sym_defect: ext.sym_defect,
    })
}
