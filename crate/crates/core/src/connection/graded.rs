use nalgebra::DVector;

use super::form::{ComplexOneForm, DiscreteOneForm};
use super::grid::Grid2D;
use crate::error::{Error, Result};
use crate::liecore::{LieAlgebraBasis, Z4Grading};
use crate::scalar::{camax, lit, to_f64, Cx, Real};

/// A 1-form split by type and grade: `α = Σ_k (α_k' dz + α_k'' dz̄)`, `α_k ∈ g~k`.
///
/// `z[k]` holds `α_k'` and `zb[k]` holds `α_k''` (index 3 is grade `-1`), as complex
/// coefficient vectors in the algebra basis.
#[derive(Clone, Debug)]
pub struct GradedForm<T: Real> {
    pub grid: Grid2D,
    pub z: [Vec<DVector<Cx<T>>>; 4],
    pub zb: [Vec<DVector<Cx<T>>>; 4],
}

impl<T: Real> GradedForm<T> {
    pub fn a2p(&self) -> &[DVector<Cx<T>>] {
        &self.z[2]
    }
    pub fn am1p(&self) -> &[DVector<Cx<T>>] {
        &self.z[3]
    }
    pub fn a0p(&self) -> &[DVector<Cx<T>>] {
        &self.z[0]
    }
    pub fn a1p(&self) -> &[DVector<Cx<T>>] {
        &self.z[1]
    }
    pub fn a0pp(&self) -> &[DVector<Cx<T>>] {
        &self.zb[0]
    }
    pub fn a1pp(&self) -> &[DVector<Cx<T>>] {
        &self.zb[1]
    }
    pub fn a2pp(&self) -> &[DVector<Cx<T>>] {
        &self.zb[2]
    }
    pub fn am1pp(&self) -> &[DVector<Cx<T>>] {
        &self.zb[3]
    }

    /// `A_z` and `A_z̄` at node `k`, summed over grades.
    pub fn total(&self, k: usize) -> (DVector<Cx<T>>, DVector<Cx<T>>) {
        let mut a = self.z[0][k].clone();
        let mut b = self.zb[0][k].clone();
        for g in 1..4 {
            a += &self.z[g][k];
            b += &self.zb[g][k];
        }
        (a, b)
    }

    /// Largest node norm of `(A_u, A_v)` over interior nodes.
    pub fn max_norm(&self, alg: &LieAlgebraBasis<T>, margin: usize) -> f64 {
        let g = &self.grid;
        let mut best = 0.0f64;
        for j in 0..g.nv {
            for i in 0..g.nu {
                if !g.is_interior(i, j, margin) {
                    continue;
                }
                let (a, b) = self.total(g.idx(i, j));
                let u = &a + &b;
                let v = (&a - &b) * Cx::new(T::zero(), T::one());
                let n = (alg.norm_cx(&u).powi(2) + alg.norm_cx(&v).powi(2)).sqrt();
                best = best.max(to_f64(n));
            }
        }
        best
    }
}

/// Splits a complex 1-form into graded `(1,0)` and `(0,1)` pieces.
pub fn grade_split_complex<T: Real>(grading: &Z4Grading<T>, form: &ComplexOneForm<T>) -> GradedForm<T> {
    let n = form.grid.len();
    let half = Cx::new(lit::<T>(0.5), T::zero());
    let i = Cx::new(T::zero(), T::one());
    let mut z: [Vec<DVector<Cx<T>>>; 4] = Default::default();
    let mut zb: [Vec<DVector<Cx<T>>>; 4] = Default::default();
    for k in 0..n {
        let az = (&form.au[k] - &form.av[k] * i) * half;
        let azb = (&form.au[k] + &form.av[k] * i) * half;
        for g in 0..4 {
            z[g].push(&grading.projectors[g] * &az);
            zb[g].push(&grading.projectors[g] * &azb);
        }
    }
    GradedForm { grid: form.grid, z, zb }
}

pub fn grade_split<T: Real>(grading: &Z4Grading<T>, form: &DiscreteOneForm<T>) -> GradedForm<T> {
    grade_split_complex(grading, &form.complexify())
}

/// Largest `|Σ_k α_k' - A_z|` and `|Σ_k α_k'' - A_z̄|` over all nodes.
pub fn reassembly_residual<T: Real>(gf: &GradedForm<T>, form: &DiscreteOneForm<T>) -> f64 {
    let mut worst = 0.0f64;
    let i = Cx::new(T::zero(), T::one());
    let half = Cx::new(lit::<T>(0.5), T::zero());
    for k in 0..form.grid.len() {
        let (a, b) = gf.total(k);
        let u = form.au[k].map(|x| Cx::new(x, T::zero()));
        let v = form.av[k].map(|x| Cx::new(x, T::zero()));
        let az = (&u - &v * i) * half;
        let azb = (&u + &v * i) * half;
        worst = worst.max(to_f64(camax((a - az).iter()))).max(to_f64(camax((b - azb).iter())));
    }
    worst
}

/// Power of `λ` attached to the `(1,0)` and `(0,1)` parts of grade `k`.
pub fn lambda_weights(k: usize) -> (i32, i32) {
    match k {
        0 => (0, 0),
        1 => (1, 1),
        2 => (-2, 2),
        3 => (-1, -1),
        _ => unreachable!("grades are taken mod 4"),
    }
}

/// `α_λ = λ^-2 α_2' + λ^-1 α_-1 + α_0 + λ α_1 + λ^2 α_2''`.
///
/// `α_±1` include both types; on admissible forms `α_1' = α_-1'' = 0` and this is the
/// usual extension.
pub fn extend<T: Real>(gf: &GradedForm<T>, lambda: Cx<T>) -> Result<ComplexOneForm<T>> {
    if lambda.re == T::zero() && lambda.im == T::zero() {
        return Err(Error::ZeroLambda);
    }
    let n = gf.grid.len();
    let i = Cx::new(T::zero(), T::one());
    let pw = |e: i32| lambda.powi(e);
    let w: Vec<(Cx<T>, Cx<T>)> = (0..4).map(|k| {
        let (a, b) = lambda_weights(k);
        (pw(a), pw(b))
    }).collect();
    let mut au = Vec::with_capacity(n);
    let mut av = Vec::with_capacity(n);
    for node in 0..n {
        let mut a = &gf.z[0][node] * w[0].0;
        let mut b = &gf.zb[0][node] * w[0].1;
        for k in 1..4 {
            a += &gf.z[k][node] * w[k].0;
            b += &gf.zb[k][node] * w[k].1;
        }
        au.push(&a + &b);
        av.push((a - b) * i);
    }
    Ok(ComplexOneForm { grid: gf.grid, au, av })
}
