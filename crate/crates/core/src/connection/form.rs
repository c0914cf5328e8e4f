use nalgebra::{DMatrix, DVector};

use super::grid::Grid2D;
use crate::error::{Error, Result};
use crate::liecore::LieAlgebraBasis;
use crate::scalar::{lit, to_f64, Cx, Real};

/// Group-valued frame sampled on a grid (`n x n` matrices).
#[derive(Clone, Debug)]
pub struct FrameGrid<T: Real> {
    pub grid: Grid2D,
    pub n: usize,
    pub frames: Vec<DMatrix<T>>,
}

impl<T: Real> FrameGrid<T> {
    pub fn from_fn(grid: Grid2D, n: usize, f: impl Fn(usize, usize) -> DMatrix<T>) -> Self {
        let frames = (0..grid.len()).map(|k| f(k % grid.nu, k / grid.nu)).collect();
        Self { grid, n, frames }
    }

    pub fn at(&self, i: usize, j: usize) -> &DMatrix<T> {
        &self.frames[self.grid.idx(i, j)]
    }

    /// Right multiplication by a constant group element.
    pub fn gauge(&self, g: &DMatrix<T>) -> Self {
        Self { grid: self.grid, n: self.n, frames: self.frames.iter().map(|f| f * g).collect() }
    }
}

/// Real `g`-valued 1-form `A_u du + A_v dv` (coefficients in the algebra basis).
#[derive(Clone, Debug)]
pub struct DiscreteOneForm<T: Real> {
    pub grid: Grid2D,
    pub au: Vec<DVector<T>>,
    pub av: Vec<DVector<T>>,
}

/// `g^C`-valued 1-form, e.g. a member of the λ-family.
#[derive(Clone, Debug)]
pub struct ComplexOneForm<T: Real> {
    pub grid: Grid2D,
    pub au: Vec<DVector<Cx<T>>>,
    pub av: Vec<DVector<Cx<T>>>,
}

impl<T: Real> DiscreteOneForm<T> {
    /// Constant form `X du + Y dv`.
    pub fn constant(grid: Grid2D, x: DVector<T>, y: DVector<T>) -> Self {
        Self { grid, au: vec![x; grid.len()], av: vec![y; grid.len()] }
    }

    pub fn dim(&self) -> usize {
        self.au.first().map_or(0, |v| v.len())
    }

    pub fn complexify(&self) -> ComplexOneForm<T> {
        let c = |v: &DVector<T>| v.map(|x| Cx::new(x, T::zero()));
        ComplexOneForm { grid: self.grid, au: self.au.iter().map(c).collect(), av: self.av.iter().map(c).collect() }
    }

    /// `A_z = (A_u - i A_v) / 2` at node `k`.
    pub fn az(&self, k: usize) -> DVector<Cx<T>> {
        let h = lit::<T>(0.5);
        DVector::from_fn(self.dim(), |r, _| Cx::new(self.au[k][r] * h, -self.av[k][r] * h))
    }

    /// Root mean square of `sqrt(|A_u|^2 + |A_v|^2)` over interior nodes.
    pub fn rms_norm(&self, alg: &LieAlgebraBasis<T>, margin: usize) -> f64 {
        let g = &self.grid;
        let (mut acc, mut cnt) = (0.0f64, 0usize);
        for j in 0..g.nv {
            for i in 0..g.nu {
                if g.is_interior(i, j, margin) {
                    let k = g.idx(i, j);
                    acc += to_f64(alg.norm(&self.au[k]).powi(2) + alg.norm(&self.av[k]).powi(2));
                    cnt += 1;
                }
            }
        }
        if cnt == 0 {
            0.0
        } else {
            (acc / cnt as f64).sqrt()
        }
    }

    /// `h^2 s^4` with `s` the rms node norm: the size of the discretization error of a
    /// residual quadratic in `α` and its derivative.
    pub fn residual_scale(&self, alg: &LieAlgebraBasis<T>, margin: usize) -> f64 {
        self.grid.h * self.grid.h * self.rms_norm(alg, margin).powi(4)
    }

    /// Largest `sqrt(|A_u|^2 + |A_v|^2)` over interior nodes.
    pub fn max_norm(&self, alg: &LieAlgebraBasis<T>, margin: usize) -> f64 {
        let g = &self.grid;
        let mut best = 0.0f64;
        for j in 0..g.nv {
            for i in 0..g.nu {
                if g.is_interior(i, j, margin) {
                    let k = g.idx(i, j);
                    let n = (alg.norm(&self.au[k]).powi(2) + alg.norm(&self.av[k]).powi(2)).sqrt();
                    best = best.max(to_f64(n));
                }
            }
        }
        best
    }
}

/// Options for [`maurer_cartan`].
#[derive(Clone, Copy, Debug, Default)]
pub struct McOptions {
    /// Relative tolerance for the projection of `F^-1 dF` onto the algebra.
    /// Defaults to `1e-6 + 10 h^2 (1 + |A|)^2`, the size of the O(h^2)
    /// off-algebra part produced by central differences.
    pub proj_tol: Option<f64>,
}

/// `α = F^-1 dF` by central differences (one-sided second order at edges),
/// projected onto the algebra by least squares.
pub fn maurer_cartan<T: Real>(alg: &LieAlgebraBasis<T>, frames: &FrameGrid<T>, opts: McOptions) -> Result<DiscreteOneForm<T>> {
    let g = frames.grid;
    if frames.n != alg.n || frames.frames.len() != g.len() {
        return Err(Error::ShapeMismatch(format!(
            "frames are {}x{} on {} nodes, algebra is {}x{} on a {}-node grid",
            frames.n,
            frames.n,
            frames.frames.len(),
            alg.n,
            alg.n,
            g.len()
        )));
    }
    let mut au = Vec::with_capacity(g.len());
    let mut av = Vec::with_capacity(g.len());
    for j in 0..g.nv {
        for i in 0..g.nu {
            let f = frames.at(i, j);
            let finv = f.clone().try_inverse().ok_or(Error::SingularFrame(i, j))?;
            let (smin, smax) = crate::linalg::sv_extremes(f);
            if smin <= smax * lit::<T>(1e-12) {
                return Err(Error::SingularFrame(i, j));
            }
            for (dst, df) in [(&mut au, g.d_u(&frames.frames, i, j)), (&mut av, g.d_v(&frames.frames, i, j))] {
                let a = &finv * df;
                let (x, res) = alg.coords_with_residual(&a);
                let an = to_f64(a.norm());
                let rel = to_f64(res) / an.max(1.0);
                let tol = opts.proj_tol.unwrap_or(1e-6 + 10.0 * g.h * g.h * (1.0 + an).powi(2));
                if rel > tol {
                    return Err(Error::ProjectionResidual(rel));
                }
                dst.push(x);
            }
        }
    }
    Ok(DiscreteOneForm { grid: g, au, av })
}
