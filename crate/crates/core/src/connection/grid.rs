use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Cx, Real};

/// Uniform rectangular grid; node `(i, j)` sits at `(u0 + i h, v0 + j h)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub nu: usize,
    pub nv: usize,
    pub h: f64,
    pub periodic_u: bool,
    pub periodic_v: bool,
}

impl Grid2D {
    pub fn new(nu: usize, nv: usize, h: f64, periodic_u: bool, periodic_v: bool) -> Result<Self> {
        if nu < 3 || nv < 3 {
            return Err(Error::ShapeMismatch(format!("grid needs at least 3x3 nodes, got {nu}x{nv}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::OutOfRange(format!("spacing must be positive, got {h}")));
        }
        Ok(Self { nu, nv, h, periodic_u, periodic_v })
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node index, `u` running fastest.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nu + i
    }

    pub fn is_interior(&self, i: usize, j: usize, margin: usize) -> bool {
        let ok = |k: usize, n: usize, per: bool| per || (k >= margin && k + margin < n);
        ok(i, self.nu, self.periodic_u) && ok(j, self.nv, self.periodic_v)
    }

    /// Same grid with half the spacing over the same extent.
    pub fn refined(&self) -> Self {
        let r = |n: usize, per: bool| if per { 2 * n } else { 2 * n - 1 };
        Self { nu: r(self.nu, self.periodic_u), nv: r(self.nv, self.periodic_v), h: self.h / 2.0, ..*self }
    }

    /// First-derivative stencil along one axis: central inside, one-sided second order at edges.
    fn stencil(k: usize, n: usize, periodic: bool) -> [(usize, f64); 3] {
        if periodic {
            [((k + n - 1) % n, -0.5), ((k + 1) % n, 0.5), (k, 0.0)]
        } else if k == 0 {
            [(0, -1.5), (1, 2.0), (2, -0.5)]
        } else if k == n - 1 {
            [(n - 3, 0.5), (n - 2, -2.0), (n - 1, 1.5)]
        } else {
            [(k - 1, -0.5), (k + 1, 0.5), (k, 0.0)]
        }
    }

    pub fn d_u<T: Real, V: GridValue<T>>(&self, f: &[V], i: usize, j: usize) -> V {
        let st = Self::stencil(i, self.nu, self.periodic_u);
        combine(self.h, st.iter().map(|&(a, w)| (&f[self.idx(a, j)], w)))
    }

    pub fn d_v<T: Real, V: GridValue<T>>(&self, f: &[V], i: usize, j: usize) -> V {
        let st = Self::stencil(j, self.nv, self.periodic_v);
        combine(self.h, st.iter().map(|&(b, w)| (&f[self.idx(i, b)], w)))
    }

    /// Apply `d_u` at every node.
    pub fn d_u_field<T: Real, V: GridValue<T>>(&self, f: &[V]) -> Vec<V> {
        (0..self.len()).map(|k| self.d_u(f, k % self.nu, k / self.nu)).collect()
    }

    pub fn d_v_field<T: Real, V: GridValue<T>>(&self, f: &[V]) -> Vec<V> {
        (0..self.len()).map(|k| self.d_v(f, k % self.nu, k / self.nu)).collect()
    }
}

fn combine<'a, T: Real, V: GridValue<T> + 'a>(h: f64, terms: impl Iterator<Item = (&'a V, f64)>) -> V {
    let mut out: Option<V> = None;
    for (v, w) in terms {
        if w == 0.0 {
            continue;
        }
        let w = lit::<T>(w / h);
        match out.as_mut() {
            None => {
                let mut z = v.zero_like();
                z.add_scaled(w, v);
                out = Some(z);
            }
            Some(acc) => acc.add_scaled(w, v),
        }
    }
    out.expect("stencil has non-zero weights")
}

/// Values that can be differentiated on a grid.
pub trait GridValue<T: Real>: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, w: T, x: &Self);
}

impl<T: Real> GridValue<T> for DVector<T> {
    fn zero_like(&self) -> Self {
        DVector::zeros(self.len())
    }
    fn add_scaled(&mut self, w: T, x: &Self) {
        self.axpy(w, x, T::one());
    }
}

impl<T: Real> GridValue<T> for DVector<Cx<T>> {
    fn zero_like(&self) -> Self {
        DVector::zeros(self.len())
    }
    fn add_scaled(&mut self, w: T, x: &Self) {
        self.axpy(Cx::new(w, T::zero()), x, Cx::new(T::one(), T::zero()));
    }
}

impl<T: Real> GridValue<T> for DMatrix<T> {
    fn zero_like(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }
    fn add_scaled(&mut self, w: T, x: &Self) {
        *self += x * w;
    }
}

impl<T: Real> GridValue<T> for DMatrix<Cx<T>> {
    fn zero_like(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }
    fn add_scaled(&mut self, w: T, x: &Self) {
        *self += x * Cx::new(w, T::zero());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_is_exact_on_quadratics() {
        let g = Grid2D::new(5, 4, 0.5, false, false).unwrap();
        let f: Vec<DVector<f64>> = (0..g.len())
            .map(|k| {
                let u = (k % g.nu) as f64 * g.h;
                DVector::from_element(1, u * u)
            })
            .collect();
        for i in 0..g.nu {
            let d = g.d_u(&f, i, 1)[0];
            assert!((d - 2.0 * i as f64 * g.h).abs() < 1e-12);
        }
    }

    #[test]
    fn refined_keeps_extent() {
        let g = Grid2D::new(65, 33, 0.1, false, true).unwrap();
        let r = g.refined();
        assert_eq!((r.nu, r.nv), (129, 66));
        assert!(((r.nu - 1) as f64 * r.h - (g.nu - 1) as f64 * g.h).abs() < 1e-12);
    }
}
