use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::form::{ComplexOneForm, DiscreteOneForm};
use super::graded::{extend, GradedForm};
use super::grid::Grid2D;
use crate::error::Result;
use crate::liecore::{LieAlgebraBasis, Z4Grading};
use crate::report::ResidualReport;
use crate::scalar::{camax, lit, to_f64, Cx, Real};

/// Boundary layer excluded from aggregate residuals. Residuals of lifted surfaces chain
/// three derivatives (tangent plane, frame, form), each polluting one more node layer
/// from the one-sided edge stencils.
pub const MARGIN: usize = 3;

/// The five default spectral parameters `2, 1, 1/2, e^{iπ/4}, e^{2iπ/3}`.
pub fn default_lambdas<T: Real>() -> Vec<Cx<T>> {
    let pi = std::f64::consts::PI;
    [(2.0, 0.0), (1.0, 0.0), (0.5, 0.0), ((pi / 4.0).cos(), (pi / 4.0).sin()), ((2.0 * pi / 3.0).cos(), (2.0 * pi / 3.0).sin())]
        .iter()
        .map(|&(a, b)| Cx::new(lit(a), lit(b)))
        .collect()
}

/// Seven distinct samples used to recover the Laurent coefficients `λ^-3 .. λ^3`.
pub fn bookkeeping_lambdas<T: Real>() -> Vec<Cx<T>> {
    let mut v = default_lambdas();
    v.push(Cx::new(lit(-1.5), T::zero()));
    v.push(Cx::new(T::zero(), lit(1.5)));
    v
}

/// `R = ∂_u A_v - ∂_v A_u + [A_u, A_v]` at every node.
pub fn curvature<T: Real>(alg: &LieAlgebraBasis<T>, form: &ComplexOneForm<T>) -> Vec<DVector<Cx<T>>> {
    let g = form.grid;
    (0..g.len())
        .map(|k| {
            let (i, j) = (k % g.nu, k / g.nu);
            g.d_u(&form.av, i, j) - g.d_v(&form.au, i, j) + alg.bracket_cx(&form.au[k], &form.av[k])
        })
        .collect()
}

pub fn curvature_real<T: Real>(alg: &LieAlgebraBasis<T>, form: &DiscreteOneForm<T>) -> Vec<DVector<T>> {
    let g = form.grid;
    (0..g.len())
        .map(|k| {
            let (i, j) = (k % g.nu, k / g.nu);
            g.d_u(&form.av, i, j) - g.d_v(&form.au, i, j) + alg.bracket(&form.au[k], &form.av[k])
        })
        .collect()
}

pub(crate) fn report_cx<T: Real>(alg: &LieAlgebraBasis<T>, grid: &Grid2D, f: &[DVector<Cx<T>>]) -> ResidualReport {
    ResidualReport::new(grid, MARGIN, f.iter().map(|x| to_f64(alg.norm_cx(x))).collect())
}

pub(crate) fn report_real<T: Real>(alg: &LieAlgebraBasis<T>, grid: &Grid2D, f: &[DVector<T>]) -> ResidualReport {
    ResidualReport::new(grid, MARGIN, f.iter().map(|x| to_f64(alg.norm(x))).collect())
}

/// Curvature of `α_λ` at each λ sample, plus cross-checks of the `λ^-2` coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub lambdas: Vec<(f64, f64)>,
    pub curvature: Vec<ResidualReport>,
    /// `max |d(*α_2) + [α_0 ∧ *α_2] - 4 Re(∂_z̄ α_2' + [α_0'', α_2'])|`.
    pub star_form_agreement: f64,
    /// `max |C_-2 - 2i(∂_z̄ α_2' + [α_0'', α_2']) - [α_-1(∂u), α_-1(∂v)]|` with `C_-2`
    /// recovered from seven λ samples.
    pub coefficient_agreement: f64,
}

pub fn lambda_flatness<T: Real>(alg: &LieAlgebraBasis<T>, gf: &GradedForm<T>, lambdas: &[Cx<T>]) -> Result<LambdaReport> {
    let mut curv = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let f = extend(gf, l)?;
        curv.push(report_cx(alg, &gf.grid, &curvature(alg, &f)));
    }
    let a = super::system::residual_a(alg, gf);
    let star = star_form(alg, gf);
    let g = gf.grid;
    let mut star_agree = 0.0f64;
    for k in 0..g.len() {
        let four_re_a = a[k].map(|z| z.re * lit::<T>(4.0));
        star_agree = star_agree.max(to_f64((&star[k] - four_re_a).amax()));
    }
    let coeffs = laurent_coefficients(alg, gf, &bookkeeping_lambdas(), -3)?;
    let cm2 = &coeffs[1];
    let i = Cx::new(T::zero(), T::one());
    let two_i = Cx::new(T::zero(), lit(2.0));
    let mut coef_agree = 0.0f64;
    for k in 0..g.len() {
        let au = &gf.z[3][k] + &gf.zb[3][k];
        let av = (&gf.z[3][k] - &gf.zb[3][k]) * i;
        let pred = &a[k] * two_i + alg.bracket_cx(&au, &av);
        coef_agree = coef_agree.max(to_f64(camax((&cm2[k] - pred).iter())));
    }
    Ok(LambdaReport {
        lambdas: lambdas.iter().map(|z| (to_f64(z.re), to_f64(z.im))).collect(),
        curvature: curv,
        star_form_agreement: star_agree,
        coefficient_agreement: coef_agree,
    })
}

/// `d(*α_2) + [α_0 ∧ *α_2]` evaluated on `(∂u, ∂v)`, real part.
pub fn star_form<T: Real>(alg: &LieAlgebraBasis<T>, gf: &GradedForm<T>) -> Vec<DVector<T>> {
    let g = gf.grid;
    let i = Cx::new(T::zero(), T::one());
    let n = g.len();
    let a2u: Vec<_> = (0..n).map(|k| &gf.z[2][k] + &gf.zb[2][k]).collect();
    let a2v: Vec<_> = (0..n).map(|k| (&gf.z[2][k] - &gf.zb[2][k]) * i).collect();
    (0..n)
        .map(|k| {
            let (iu, jv) = (k % g.nu, k / g.nu);
            let a0u = &gf.z[0][k] + &gf.zb[0][k];
            let a0v = (&gf.z[0][k] - &gf.zb[0][k]) * i;
            let s = g.d_u(&a2u, iu, jv) + g.d_v(&a2v, iu, jv) + alg.bracket_cx(&a0u, &a2u[k]) + alg.bracket_cx(&a0v, &a2v[k]);
            s.map(|z| z.re)
        })
        .collect()
}

/// Laurent coefficients of the curvature of `α_λ` in `λ`, for exponents
/// `lo .. lo + lambdas.len() - 1`, by solving the Vandermonde system node by node.
pub fn laurent_coefficients<T: Real>(
    alg: &LieAlgebraBasis<T>,
    gf: &GradedForm<T>,
    lambdas: &[Cx<T>],
    lo: i32,
) -> Result<Vec<Vec<DVector<Cx<T>>>>> {
    let m = lambdas.len();
    let samples: Vec<Vec<DVector<Cx<T>>>> = lambdas
        .iter()
        .map(|&l| extend(gf, l).map(|f| curvature(alg, &f)))
        .collect::<Result<_>>()?;
    let v = DMatrix::from_fn(m, m, |s, e| lambdas[s].powi(lo + e as i32));
    let lu = v.lu();
    let n = gf.grid.len();
    let d = alg.dim();
    let mut out = vec![Vec::with_capacity(n); m];
    for k in 0..n {
        let rhs = DMatrix::from_fn(m, d, |s, c| samples[s][k][c]);
        let sol = lu.solve(&rhs).expect("distinct λ give an invertible Vandermonde matrix");
        for (e, o) in out.iter_mut().enumerate() {
            o.push(sol.row(e).transpose());
        }
    }
    Ok(out)
}

/// Agreement between the Laurent coefficients of `R(α_λ)` and the graded pieces of
/// the plain curvature `R(α)`.
#[derive(Clone, Debug, Serialize)]
pub struct BookkeepingReport {
    /// `max_k max |P_k R(α) - Σ_{e ≡ k mod 4} C_e|`.
    pub projection: f64,
    /// `max_e max |C_e - P_{e mod 4} C_e|`: each coefficient lies in its own eigenspace.
    pub grade: f64,
    /// `max |C_{±3}|`: `C_-3 = [α_2' ∧ α_-1'']`, `C_3 = [α_2'' ∧ α_1']`, so it vanishes on admissible forms.
    pub outer: f64,
}

/// Recovers `C_-3 .. C_3` from [`bookkeeping_lambdas`] and compares them with the
/// eigenspace projections of the curvature at `λ = 1`.
pub fn coefficient_bookkeeping<T: Real>(
    alg: &LieAlgebraBasis<T>,
    grading: &Z4Grading<T>,
    gf: &GradedForm<T>,
) -> Result<BookkeepingReport> {
    let coeffs = laurent_coefficients(alg, gf, &bookkeeping_lambdas(), -3)?;
    let plain = curvature(alg, &extend(gf, Cx::new(T::one(), T::zero()))?);
    let g = gf.grid;
    let (mut projection, mut grade, mut outer) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..g.len() {
        let (i, j) = (k % g.nu, k / g.nu);
        if !g.is_interior(i, j, MARGIN) {
            continue;
        }
        for r in 0..4i32 {
            let mut sum = DVector::from_element(alg.dim(), Cx::new(T::zero(), T::zero()));
            for (idx, c) in coeffs.iter().enumerate() {
                let e = idx as i32 - 3;
                if e.rem_euclid(4) == r {
                    sum += &c[k];
                }
            }
            let p = grading.project(r, &plain[k]);
            projection = projection.max(to_f64(camax((p - sum).iter())));
        }
        for (idx, c) in coeffs.iter().enumerate() {
            let e = idx as i32 - 3;
            let p = grading.project(e.rem_euclid(4), &c[k]);
            grade = grade.max(to_f64(camax((&c[k] - p).iter())));
            if e.abs() == 3 {
                outer = outer.max(to_f64(camax(c[k].iter())));
            }
        }
    }
    Ok(BookkeepingReport { projection, grade, outer })
}
