use nalgebra::{DMatrix, Matrix4};
use serde::Serialize;

use super::immersion::{omega_isotropy, rho_surface, sphere_tension, ConformalityReport, ImmersionGrid, IsotropyReport};
use crate::connection::{
    admissibility, curvature_real, grade_split, harmonicity_residuals, lambda_flatness, HarmonicityReport, SplitTable, C_HARM, maurer_cartan, AdmissibilityReport, DiscreteOneForm, FrameGrid,
    GradedForm, Grid2D, LambdaReport, McOptions, MARGIN,
};
use crate::error::{Error, Result};
use crate::fourbundle::{affine_spec, FourSymmetricSpec};
use crate::liecore::affine_element;
use crate::quatgeom::{hopf, j_eps, minimal_rotation, rotation_to, Chirality, OrientedPlane, Quaternion, SpherePoint};
use crate::report::ResidualReport;
use crate::scalar::{to_f64, Cx, Real};

/// Lift `F` with `F e F^-1 = ρ`, built by minimal rotations along the first row and
/// then up each column, starting from the minimal rotation `e → ρ(0,0)`.
///
/// Returns the lift and the largest `|F e F^-1 - ρ|`.
pub fn hopf_lift<T: Real>(grid: &Grid2D, rho: &[SpherePoint<T>], e: &SpherePoint<T>) -> Result<(Vec<Quaternion<T>>, f64)> {
    if grid.periodic_u || grid.periodic_v {
        return Err(Error::OutOfRange("Hopf lift needs a non-periodic grid".into()));
    }
    if rho.len() != grid.len() {
        return Err(Error::ShapeMismatch(format!("{} values on a {}-node grid", rho.len(), grid.len())));
    }
    let mut f = vec![Quaternion::one(); grid.len()];
    f[0] = rotation_to(e, &rho[0]);
    let step = |from: usize, to: usize, f: &mut Vec<Quaternion<T>>| -> Result<()> {
        let r = minimal_rotation(&rho[from], &rho[to]).ok_or(Error::AntipodalStep(to % grid.nu, to / grid.nu))?;
        f[to] = (r * f[from]).normalize();
        Ok(())
    };
    for i in 0..grid.nu - 1 {
        step(grid.idx(i, 0), grid.idx(i + 1, 0), &mut f)?;
    }
    for i in 0..grid.nu {
        for j in 0..grid.nv - 1 {
            step(grid.idx(i, j), grid.idx(i, j + 1), &mut f)?;
        }
    }
    let res = f.iter().zip(rho).map(|(a, r)| to_f64(hopf(a, e).dist(r))).fold(0.0, f64::max);
    Ok((f, res))
}

/// A conformal immersion together with a lift `F` of its twistor map: `U = (F, X)` in
/// `G_I ⋉ R^4`, where `F` acts as `L_a` (`ε = +`) or `R_{ā}` (`ε = -`).
#[derive(Clone, Debug)]
pub struct LiftedImmersion<T: Real> {
    pub immersion: ImmersionGrid<T>,
    pub lift: Vec<Quaternion<T>>,
    pub isotropy: Vec<usize>,
    pub eps: Chirality,
    pub e: SpherePoint<T>,
    pub hopf_residual: f64,
}

impl<T: Real> LiftedImmersion<T> {
    /// Lifts `ρ_L` itself, with reference point `e = ρ_L(0,0)`.
    pub fn new(immersion: ImmersionGrid<T>, isotropy: &[usize], eps: Chirality) -> Result<Self> {
        let rho = rho_surface(&immersion, eps)?;
        Self::with_rho(immersion, &rho, isotropy, eps)
    }

    /// Lifts an arbitrary sphere-valued map, which need not be the twistor map of `X`.
    pub fn with_rho(immersion: ImmersionGrid<T>, rho: &[SpherePoint<T>], isotropy: &[usize], eps: Chirality) -> Result<Self> {
        let e = rho[0];
        Self::with_reference(immersion, rho, e, isotropy, eps)
    }

    /// Lifts `ρ` with a prescribed reference point, so that lifts on different grids share
    /// one spec.
    pub fn with_reference(
        immersion: ImmersionGrid<T>,
        rho: &[SpherePoint<T>],
        e: SpherePoint<T>,
        isotropy: &[usize],
        eps: Chirality,
    ) -> Result<Self> {
        let (lift, hopf_residual) = hopf_lift(&immersion.grid, rho, &e)?;
        Ok(Self { immersion, lift, isotropy: isotropy.to_vec(), eps, e, hopf_residual })
    }

    pub fn grid(&self) -> Grid2D {
        self.immersion.grid
    }

    /// `L_a` or `R_{ā}` at node `k`.
    pub fn frame_matrix(&self, k: usize) -> Matrix4<T> {
        match self.eps {
            Chirality::Plus => self.lift[k].left_matrix(),
            Chirality::Minus => self.lift[k].conj().right_matrix(),
        }
    }

    /// Affine frames `[[F, X], [0, 1]]`.
    pub fn frames(&self) -> FrameGrid<T> {
        let x = &self.immersion.x;
        FrameGrid::from_fn(self.grid(), 5, |i, j| {
            let k = self.grid().idx(i, j);
            let m = self.frame_matrix(k);
            let f = DMatrix::from_fn(4, 4, |r, c| m[(r, c)]);
            affine_element(&f, &[x[k].w, x[k].x, x[k].y, x[k].z])
        })
    }

    pub fn spec(&self) -> Result<FourSymmetricSpec<T>> {
        affine_spec(&self.isotropy, self.eps, &self.e.0)
    }

    /// Largest `|[F, J^ε_{1∧e_i}]|`, `i ∈ I`: zero when `F` lies in `G_I`.
    pub fn group_residual(&self) -> f64 {
        let one = Quaternion::<T>::one();
        let mut worst = 0.0f64;
        for &i in &self.isotropy {
            let js = j_eps(&OrientedPlane::new(one, Quaternion::basis(i)).expect("orthonormal"), self.eps).matrix;
            for k in 0..self.lift.len() {
                let f = self.frame_matrix(k);
                worst = worst.max(to_f64((f * js - js * f).amax()));
            }
        }
        worst
    }
}

/// Plain flatness of `U^-1 dU` is compared against `C_FLAT h^2 max|α|^3`.
pub const C_FLAT: f64 = 1.0;
/// `ρ`-harmonicity and `λ`-flatness are compared against `C h^2 s^4`, `s` the rms norm of
/// `α` (see [`DiscreteOneForm::residual_scale`]).
pub const C_RHO: f64 = 1.0;
pub const C_LAMBDA: f64 = 1.0;

/// `α = U^-1 dU`, its graded split and the spec it lives in.
pub struct LiftedForm<T: Real> {
    pub spec: FourSymmetricSpec<T>,
    pub frames: FrameGrid<T>,
    pub alpha: DiscreteOneForm<T>,
    pub graded: GradedForm<T>,
}

pub fn lifted_form<T: Real>(u: &LiftedImmersion<T>) -> Result<LiftedForm<T>> {
    let spec = u.spec()?;
    let frames = u.frames();
    let alpha = maurer_cartan(&spec.algebra, &frames, McOptions::default())?;
    let graded = grade_split(&spec.grading, &alpha);
    Ok(LiftedForm { spec, frames, alpha, graded })
}

#[derive(Clone, Debug, Serialize)]
pub struct LcVerdict {
    pub curvature: ResidualReport,
    pub flat_tol: f64,
    pub admissibility: AdmissibilityReport,
    pub group_residual: f64,
    pub pass: bool,
}

/// Checks that `α = U^-1 dU` is flat, admissible (`α_-1'' = 0`, `α_-1' ≠ 0`) and
/// `G_I`-valued.
pub fn lc_omega_check<T: Real>(u: &LiftedImmersion<T>) -> Result<LcVerdict> {
    let lf = lifted_form(u)?;
    let alg = &lf.spec.algebra;
    let g = lf.alpha.grid;
    let r = curvature_real(alg, &lf.alpha);
    let curvature = ResidualReport::new(&g, MARGIN, r.iter().map(|x| to_f64(alg.norm(x))).collect());
    let flat_tol = C_FLAT * g.h * g.h * lf.alpha.max_norm(alg, MARGIN).powi(3);
    let adm = admissibility(alg, &lf.graded, None);
    let group_residual = u.group_residual();
    let pass = curvature.max <= flat_tol && adm.pass && group_residual <= 1e-9;
    Ok(LcVerdict { curvature, flat_tol, admissibility: adm, group_residual, pass })
}

/// Everything known about a lifted surface: `ρ`-harmonicity, isotropy, admissibility
/// and the λ-flatness table.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub conformality: ConformalityReport,
    pub hopf_residual: f64,
    pub rho_harmonicity: ResidualReport,
    pub rho_tol: f64,
    pub rho_harmonic: bool,
    pub isotropy: IsotropyReport,
    pub isotropy_tol: f64,
    pub isotropic: bool,
    pub admissibility: AdmissibilityReport,
    pub lambda: LambdaReport,
    pub lambda_tol: f64,
    pub lambda_flat: bool,
    pub harmonicity: HarmonicityReport,
    pub split: SplitTable,
}

pub fn surface_report<T: Real>(u: &LiftedImmersion<T>, lambdas: &[Cx<T>]) -> Result<SurfaceReport> {
    let x = &u.immersion;
    let g = x.grid;
    let h2 = g.h * g.h;
    let rho = rho_surface(x, u.eps)?;
    let tension = sphere_tension(&g, &rho);
    let rho_h = ResidualReport::new(&g, MARGIN, tension.iter().map(|v| to_f64(v.norm())).collect());
    let iso = omega_isotropy(x, &u.isotropy, u.eps)?;
    let isotropy_tol = 10.0 * h2;
    let lf = lifted_form(u)?;
    let alg = &lf.spec.algebra;
    let scale = lf.alpha.residual_scale(alg, MARGIN);
    let rho_tol = C_RHO * scale;
    let adm = admissibility(alg, &lf.graded, None);
    let lambda = lambda_flatness(alg, &lf.graded, lambdas)?;
    let lambda_tol = C_LAMBDA * scale;
    let harmonicity = harmonicity_residuals(alg, &lf.spec.grading, &lf.graded);
    let split = SplitTable::new(&harmonicity, C_HARM * scale);
    let lambda_flat = lambda.curvature.iter().all(|r| r.max <= lambda_tol);
    Ok(SurfaceReport {
        conformality: x.conformality(),
        hopf_residual: u.hopf_residual,
        rho_harmonic: rho_h.max <= rho_tol,
        rho_harmonicity: rho_h,
        rho_tol,
        isotropic: iso.pass(isotropy_tol),
        isotropy: iso,
        isotropy_tol,
        admissibility: adm,
        lambda,
        lambda_tol,
        lambda_flat,
        harmonicity,
        split,
    })
}
