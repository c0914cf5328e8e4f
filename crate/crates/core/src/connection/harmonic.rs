use nalgebra::DVector;
use serde::Serialize;

use super::flatness::{report_cx, report_real};
use super::graded::GradedForm;
use super::system::{d_zbar, residual_a};
use crate::liecore::{LieAlgebraBasis, Z4Grading};
use crate::report::ResidualReport;
use crate::scalar::{lit, Cx, Real};

/// `Re(∂_z̄ α_2' + [α_0'', α_2'])` projected to `g2`, per node.
pub fn vertical_harmonicity_field<T: Real>(alg: &LieAlgebraBasis<T>, grading: &Z4Grading<T>, gf: &GradedForm<T>) -> Vec<DVector<T>> {
    residual_a(alg, gf)
        .iter()
        .map(|x| (&grading.projectors[2] * x).map(|z| z.re))
        .collect()
}

pub fn vertical_harmonicity_residual<T: Real>(alg: &LieAlgebraBasis<T>, grading: &Z4Grading<T>, gf: &GradedForm<T>) -> ResidualReport {
    report_real(alg, &gf.grid, &vertical_harmonicity_field(alg, grading, gf))
}

/// Residuals of the harmonic-map equations for `J: L → G/G0` and `X: L → G/H`.
#[derive(Clone, Debug, Serialize)]
pub struct HarmonicityReport {
    /// `∂_z̄ α̲1' + [α_0'', α̲1'] + ½[α̲1'', α̲1']` projected to `m + g2`.
    pub j: ResidualReport,
    /// The grade 2, -1 and 1 pieces of `j`.
    pub j_pieces: [ResidualReport; 3],
    /// `∂_z̄ α_m' + [α_h'', α_m']` projected to `m`.
    pub x: ResidualReport,
    pub vertical: ResidualReport,
    /// `[α_2'', α_-1']`.
    pub bracket_a2pp_am1p: ResidualReport,
}

pub fn harmonicity_residuals<T: Real>(alg: &LieAlgebraBasis<T>, grading: &Z4Grading<T>, gf: &GradedForm<T>) -> HarmonicityReport {
    let g = gf.grid;
    let n = g.len();
    let half = Cx::new(lit::<T>(0.5), T::zero());

    // Underlined g1 = m + g2, and h = g0 + g2.
    let u1p: Vec<_> = (0..n).map(|k| &gf.z[3][k] + &gf.z[1][k] + &gf.z[2][k]).collect();
    let u1pp: Vec<_> = (0..n).map(|k| &gf.zb[3][k] + &gf.zb[1][k] + &gf.zb[2][k]).collect();
    let mp: Vec<_> = (0..n).map(|k| &gf.z[3][k] + &gf.z[1][k]).collect();
    let hpp: Vec<_> = (0..n).map(|k| &gf.zb[0][k] + &gf.zb[2][k]).collect();
    let du1 = d_zbar(&g, &u1p);
    let dm = d_zbar(&g, &mp);

    let p_under: nalgebra::DMatrix<Cx<T>> = &grading.projectors[1] + &grading.projectors[2] + &grading.projectors[3];
    let p_m: nalgebra::DMatrix<Cx<T>> = &grading.projectors[1] + &grading.projectors[3];

    let mut j = Vec::with_capacity(n);
    let mut pieces: [Vec<DVector<Cx<T>>>; 3] = Default::default();
    let mut x = Vec::with_capacity(n);
    let mut br = Vec::with_capacity(n);
    for k in 0..n {
        let raw = &du1[k] + alg.bracket_cx(&gf.zb[0][k], &u1p[k]) + alg.bracket_cx(&u1pp[k], &u1p[k]) * half;
        let jr = &p_under * raw;
        pieces[0].push(&grading.projectors[2] * &jr);
        pieces[1].push(&grading.projectors[3] * &jr);
        pieces[2].push(&grading.projectors[1] * &jr);
        j.push(jr);
        let xr = &dm[k] + alg.bracket_cx(&hpp[k], &mp[k]);
        x.push(&p_m * xr);
        br.push(alg.bracket_cx(&gf.zb[2][k], &gf.z[3][k]));
    }
    let [p0, p1, p2] = pieces;
    HarmonicityReport {
        j: report_cx(alg, &g, &j),
        j_pieces: [report_cx(alg, &g, &p0), report_cx(alg, &g, &p1), report_cx(alg, &g, &p2)],
        x: report_cx(alg, &g, &x),
        vertical: vertical_harmonicity_residual(alg, grading, gf),
        bracket_a2pp_am1p: report_cx(alg, &g, &br),
    }
}

/// Constant in the matched tolerance `C h^2 s^4` shared by the three harmonicity residuals.
pub const C_HARM: f64 = 0.25;

/// Slack allowed between the premise and the conclusion of each implication.
pub const SPLIT_SLACK: f64 = 4.0;

/// The split theorem in residual form at a common tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct SplitTable {
    pub tol: f64,
    pub j_harmonic: bool,
    pub x_harmonic: bool,
    pub vertically_harmonic: bool,
    pub bracket_vanishes: bool,
    /// `J small ⇒ VH, X small` (within the slack).
    pub forward: bool,
    /// `VH, X small ⇒ J small` (within the slack).
    pub backward: bool,
    /// `X small ⇒ [α_2'', α_-1'] small` (within the slack).
    pub bracket: bool,
}

impl SplitTable {
    pub fn new(r: &HarmonicityReport, tol: f64) -> Self {
        let small = |x: f64, k: f64| x <= k * tol;
        let (j, x, v, b) = (r.j.max, r.x.max, r.vertical.max, r.bracket_a2pp_am1p.max);
        Self {
            tol,
            j_harmonic: small(j, 1.0),
            x_harmonic: small(x, 1.0),
            vertically_harmonic: small(v, 1.0),
            bracket_vanishes: small(b, 1.0),
            forward: !small(j, 1.0) || (small(v, SPLIT_SLACK) && small(x, SPLIT_SLACK)),
            backward: !(small(v, 1.0) && small(x, 1.0)) || small(j, SPLIT_SLACK),
            bracket: !small(x, 1.0) || small(b, SPLIT_SLACK),
        }
    }

    pub fn holds(&self) -> bool {
        self.forward && self.backward && self.bracket
    }
}
