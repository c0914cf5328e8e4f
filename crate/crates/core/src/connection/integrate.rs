use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::flatness::MARGIN;
use super::form::{maurer_cartan, DiscreteOneForm, FrameGrid, McOptions};
use crate::error::{Error, Result};
use crate::liecore::LieAlgebraBasis;
use crate::linalg::expm;
use crate::scalar::{lit, to_f64, Real};

#[derive(Clone, Debug, Serialize)]
pub struct IntegrationReport {
    /// Largest `|Id - holonomy|` over plaquettes.
    pub max_plaquette_defect: f64,
    pub tol: f64,
    /// Largest node difference between `U^-1 dU` and the input form (interior nodes).
    pub roundtrip: f64,
}

/// Plaquette tolerance used when none is given: `0.1 h^2 |α|^2_max`.
pub fn default_plaquette_tol(h: f64, max_norm: f64) -> f64 {
    0.1 * h * h * max_norm * max_norm
}

/// Integrates `dU = U α` from `U(0,0) = base`, sweeping the first row then each column,
/// with one midpoint exponential per edge.
pub fn integrate_flat<T: Real>(
    alg: &LieAlgebraBasis<T>,
    form: &DiscreteOneForm<T>,
    base: &DMatrix<T>,
    tol: Option<f64>,
) -> Result<(FrameGrid<T>, IntegrationReport)> {
    let g = form.grid;
    if g.periodic_u || g.periodic_v {
        return Err(Error::OutOfRange("integration needs a non-periodic grid".into()));
    }
    if base.nrows() != alg.n || base.ncols() != alg.n {
        return Err(Error::ShapeMismatch(format!("base is {}x{}, algebra acts on R^{}", base.nrows(), base.ncols(), alg.n)));
    }
    let h = lit::<T>(g.h);
    let half = lit::<T>(0.5);
    let step = |a: &DVector<T>, b: &DVector<T>, sign: T| expm(&alg.element(&((a + b) * (half * h * sign))));
    let eu = |i: usize, j: usize| step(&form.au[g.idx(i, j)], &form.au[g.idx(i + 1, j)], T::one());
    let ev = |i: usize, j: usize| step(&form.av[g.idx(i, j)], &form.av[g.idx(i, j + 1)], T::one());

    let mut defect = 0.0f64;
    let id = DMatrix::<T>::identity(alg.n, alg.n);
    for j in 0..g.nv - 1 {
        for i in 0..g.nu - 1 {
            let around = eu(i, j) * ev(i + 1, j);
            let other = ev(i, j) * eu(i, j + 1);
            let hol = around * other.try_inverse().ok_or(Error::SingularFrame(i, j))?;
            defect = defect.max(to_f64((hol - &id).norm()));
        }
    }
    let tol = tol.unwrap_or_else(|| default_plaquette_tol(g.h, form.max_norm(alg, 0)));
    if defect > tol {
        return Err(Error::CurvatureTooLarge { defect, tol });
    }

    let mut frames = vec![DMatrix::zeros(alg.n, alg.n); g.len()];
    frames[0] = base.clone();
    for i in 0..g.nu - 1 {
        frames[g.idx(i + 1, 0)] = &frames[g.idx(i, 0)] * eu(i, 0);
    }
    for i in 0..g.nu {
        for j in 0..g.nv - 1 {
            frames[g.idx(i, j + 1)] = &frames[g.idx(i, j)] * ev(i, j);
        }
    }
    let out = FrameGrid { grid: g, n: alg.n, frames };
    let back = maurer_cartan(alg, &out, McOptions::default())?;
    let mut roundtrip = 0.0f64;
    for j in 0..g.nv {
        for i in 0..g.nu {
            if g.is_interior(i, j, MARGIN) {
                let k = g.idx(i, j);
                roundtrip = roundtrip
                    .max(to_f64(alg.norm(&(&back.au[k] - &form.au[k]))))
                    .max(to_f64(alg.norm(&(&back.av[k] - &form.av[k]))));
            }
        }
    }
    Ok((out, IntegrationReport { max_plaquette_defect: defect, tol, roundtrip }))
}

/// Largest pointwise `|U - F|` (Frobenius) over all nodes.
pub fn max_frame_error<T: Real>(a: &FrameGrid<T>, b: &FrameGrid<T>) -> f64 {
    a.frames.iter().zip(&b.frames).map(|(x, y)| to_f64((x - y).norm())).fold(0.0, f64::max)
}
