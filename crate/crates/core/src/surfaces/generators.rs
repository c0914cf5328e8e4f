//! Analytic test surfaces, all conformally parametrized.

use nalgebra::{DMatrix, DVector, Vector3};

use super::immersion::ImmersionGrid;
use super::lift::LiftedImmersion;
use crate::connection::{FrameGrid, Grid2D};
use crate::error::Result;
use crate::fourbundle::FourSymmetricSpec;
use crate::liecore::affine_element;
use crate::linalg::expm;
use crate::quatgeom::{Chirality, Quaternion, SpherePoint};
use crate::scalar::{lit, Real};

fn q<T: Real>(w: f64, x: f64, y: f64, z: f64) -> Quaternion<T> {
    Quaternion::new(lit(w), lit(x), lit(y), lit(z))
}

/// `X = (e^{iu} + e^{iv} j) / √2`, a Hamiltonian stationary Lagrangian torus in `C^2`
/// under `(z1, z2) ↦ z1 + z2 j`. Sampled on `[0, (n-1)h]^2` without periodic wrap.
pub fn clifford_torus_immersion<T: Real>(nu: usize, nv: usize, h: f64) -> Result<ImmersionGrid<T>> {
    let g = Grid2D::new(nu, nv, h, false, false)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(ImmersionGrid::from_fn(g, 0.0, 0.0, |u, v| q(s * u.cos(), s * u.sin(), s * v.cos(), s * v.sin())))
}

/// The torus lifted into `U(2, L_i) ⋉ R^4` (`ε = +`, `I = {1}`).
pub fn clifford_torus<T: Real>(nu: usize, nv: usize, h: f64) -> Result<LiftedImmersion<T>> {
    LiftedImmersion::new(clifford_torus_immersion(nu, nv, h)?, &[1], Chirality::Plus)
}

/// `X = u + v i`.
pub fn plane<T: Real>(grid: Grid2D, u0: f64, v0: f64) -> ImmersionGrid<T> {
    ImmersionGrid::from_fn(grid, u0, v0, |u, v| q(u, v, 0.0, 0.0))
}

/// Round cylinder of radius `r` in `Im H`.
pub fn cylinder<T: Real>(grid: Grid2D, u0: f64, v0: f64, r: f64) -> ImmersionGrid<T> {
    ImmersionGrid::from_fn(grid, u0, v0, |u, v| q(0.0, r * (u / r).cos(), r * (u / r).sin(), v))
}

/// Cone `e^{ku}(cos v i + sin v j + b k)` with `k = 1/√(1+b²)`.
pub fn cone<T: Real>(grid: Grid2D, u0: f64, v0: f64, b: f64) -> ImmersionGrid<T> {
    let k = 1.0 / (1.0 + b * b).sqrt();
    ImmersionGrid::from_fn(grid, u0, v0, |u, v| {
        let r = (k * u).exp();
        q(0.0, r * v.cos(), r * v.sin(), r * b)
    })
}

pub fn helicoid<T: Real>(grid: Grid2D, u0: f64, v0: f64) -> ImmersionGrid<T> {
    ImmersionGrid::from_fn(grid, u0, v0, |u, v| q(0.0, u.sinh() * v.cos(), u.sinh() * v.sin(), v))
}

pub fn catenoid<T: Real>(grid: Grid2D, u0: f64, v0: f64) -> ImmersionGrid<T> {
    ImmersionGrid::from_fn(grid, u0, v0, |u, v| q(0.0, u.cosh() * v.cos(), u.cosh() * v.sin(), u))
}

/// Unit sphere in Mercator coordinates.
pub fn sphere_patch<T: Real>(grid: Grid2D, u0: f64, v0: f64) -> ImmersionGrid<T> {
    ImmersionGrid::from_fn(grid, u0, v0, |u, v| {
        let r = 1.0 / u.cosh();
        q(0.0, r * v.cos(), r * v.sin(), u.tanh())
    })
}

/// Inversion `X ↦ c + (X - c)/|X - c|^2` (conformal, orientation reversing).
pub fn inversion<T: Real>(x: &ImmersionGrid<T>, c: &Quaternion<T>) -> ImmersionGrid<T> {
    x.map(|p| {
        let d = *p - *c;
        *c + d * (T::one() / d.norm_sq())
    })
}

/// `normalize(ρ + amp · exp(-|p - p0|^2 / w^2) · dir)`, with `p` the node position.
pub fn bump_rho<T: Real>(
    grid: &Grid2D,
    rho: &[SpherePoint<T>],
    amp: f64,
    center: (f64, f64),
    width: f64,
    dir: &Vector3<T>,
) -> Result<Vec<SpherePoint<T>>> {
    (0..grid.len())
        .map(|k| {
            let u = (k % grid.nu) as f64 * grid.h - center.0;
            let v = (k / grid.nu) as f64 * grid.h - center.1;
            let b = amp * (-(u * u + v * v) / (width * width)).exp();
            SpherePoint::new(rho[k].0 + dir * lit::<T>(b))
        })
        .collect()
}

/// `F = exp((u + v/2) a)` for a random `a ∈ g0`: a trivially λ-flat frame in any spec.
pub fn g0_geodesic_frames<T: Real>(spec: &FourSymmetricSpec<T>, grid: Grid2D, seed: u64) -> FrameGrid<T> {
    let mut s = spec.sampler(seed);
    let a = spec.algebra.element(&s.algebra_element(&spec.g0));
    FrameGrid::from_fn(grid, spec.algebra.n, |i, j| {
        let t = lit::<T>(i as f64 * grid.h + 0.5 * j as f64 * grid.h);
        expm(&(&a * t))
    })
}

/// In an affine spec: the plane `X = u q + v J0 q` with `F = exp(u a)`, `a ∈ g0`.
///
/// `J_X` is constant, `α_2 = 0` and `X` is harmonic, while `α_0 ≠ 0`.
pub fn geodesic_cylinder<T: Real>(spec: &FourSymmetricSpec<T>, grid: Grid2D, seed: u64) -> FrameGrid<T> {
    let mut s = spec.sampler(seed);
    let a = spec.algebra.element(&s.algebra_element(&spec.g0));
    let lin = a.view((0, 0), (4, 4)).into_owned();
    // J0 on R^4: minus tau restricted to the translations.
    let tm = spec.tau_group.clone().expect("affine specs record tau as a group element");
    let j0: DMatrix<T> = -tm.view((0, 0), (4, 4)).into_owned();
    let q0 = DVector::from_column_slice(&[T::one(), lit(0.3), lit(-0.2), lit(0.5)]).normalize();
    let jq = &j0 * &q0;
    FrameGrid::from_fn(grid, 5, |i, j| {
        let u = lit::<T>(i as f64 * grid.h);
        let v = lit::<T>(j as f64 * grid.h);
        let x = &q0 * u + &jq * v;
        affine_element(&expm(&(&lin * u)), x.as_slice())
    })
}
