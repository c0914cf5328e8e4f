use nalgebra::{DVector, Vector3};
use serde::Serialize;

use crate::connection::{Grid2D, MARGIN};
use crate::error::{Error, Result};
use crate::quatgeom::{omega, rho, Chirality, OrientedPlane, Quaternion, SpherePoint};
use crate::report::ResidualReport;
use crate::scalar::{to_f64, Real};

/// Immersion `X: Ω → H` sampled on a grid, with its central-difference derivatives.
#[derive(Clone, Debug)]
pub struct ImmersionGrid<T: Real> {
    pub grid: Grid2D,
    pub x: Vec<Quaternion<T>>,
    pub xu: Vec<Quaternion<T>>,
    pub xv: Vec<Quaternion<T>>,
}

fn to_dv<T: Real>(q: &Quaternion<T>) -> DVector<T> {
    DVector::from_column_slice(q.to_vec().as_slice())
}

fn from_dv<T: Real>(v: &DVector<T>) -> Quaternion<T> {
    Quaternion::new(v[0], v[1], v[2], v[3])
}

/// Minimum `|X_u|` accepted as an immersion.
pub const IMMERSION_FLOOR: f64 = 1e-6;

impl<T: Real> ImmersionGrid<T> {
    pub fn from_points(grid: Grid2D, x: Vec<Quaternion<T>>) -> Result<Self> {
        if x.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!("{} points on a {}-node grid", x.len(), grid.len())));
        }
        let dv: Vec<DVector<T>> = x.iter().map(to_dv).collect();
        let xu = grid.d_u_field(&dv).iter().map(from_dv).collect();
        let xv = grid.d_v_field(&dv).iter().map(from_dv).collect();
        Ok(Self { grid, x, xu, xv })
    }

    /// Samples `f(u, v)` at `(u0 + i h, v0 + j h)`.
    pub fn from_fn(grid: Grid2D, u0: f64, v0: f64, f: impl Fn(f64, f64) -> Quaternion<T>) -> Self {
        let x = (0..grid.len())
            .map(|k| f(u0 + (k % grid.nu) as f64 * grid.h, v0 + (k / grid.nu) as f64 * grid.h))
            .collect();
        Self::from_points(grid, x).expect("sizes match")
    }

    pub fn map(&self, f: impl Fn(&Quaternion<T>) -> Quaternion<T>) -> Self {
        Self::from_points(self.grid, self.x.iter().map(f).collect()).expect("sizes match")
    }

    /// `X̄`, the conjugate surface.
    pub fn conj(&self) -> Self {
        self.map(|q| q.conj())
    }

    /// Conformal factor `e^f = |X_u|` per node.
    pub fn conformal_factor(&self) -> Vec<T> {
        self.xu.iter().map(|q| q.norm()).collect()
    }

    /// Tangent plane `X_u ∧ X_v` at node `k`.
    pub fn tangent(&self, k: usize) -> Result<OrientedPlane<T>> {
        if to_f64(self.xu[k].norm()) <= IMMERSION_FLOOR {
            return Err(Error::Degenerate(k % self.grid.nu, k / self.grid.nu));
        }
        OrientedPlane::from_span(self.xu[k], self.xv[k]).map_err(|_| Error::Degenerate(k % self.grid.nu, k / self.grid.nu))
    }

    pub fn conformality(&self) -> ConformalityReport {
        let g = self.grid;
        let (mut angle, mut ratio, mut min_speed) = (0.0f64, 0.0f64, f64::INFINITY);
        for j in 0..g.nv {
            for i in 0..g.nu {
                if !g.is_interior(i, j, MARGIN) {
                    continue;
                }
                let k = g.idx(i, j);
                let (a, b) = (self.xu[k], self.xv[k]);
                let s = to_f64(a.norm_sq()).max(f64::MIN_POSITIVE);
                angle = angle.max(to_f64(a.dot(&b)).abs() / s);
                ratio = ratio.max((to_f64(b.norm_sq()) / s - 1.0).abs());
                min_speed = min_speed.min(s.sqrt());
            }
        }
        let tol = 10.0 * g.h * g.h;
        ConformalityReport { angle, ratio, min_speed, tol, pass: angle <= tol && ratio <= tol && min_speed > IMMERSION_FLOOR }
    }
}

/// `|<X_u, X_v>| / |X_u|^2` and `||X_v|^2/|X_u|^2 - 1|` over interior nodes.
#[derive(Clone, Debug, Serialize)]
pub struct ConformalityReport {
    pub angle: f64,
    pub ratio: f64,
    pub min_speed: f64,
    pub tol: f64,
    pub pass: bool,
}

/// `ρ_L = ρ_ε(X_u ∧ X_v)` per node.
pub fn rho_surface<T: Real>(x: &ImmersionGrid<T>, eps: Chirality) -> Result<Vec<SpherePoint<T>>> {
    (0..x.grid.len()).map(|k| x.tangent(k).map(|p| rho(&p, eps))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IsotropyReport {
    pub isotropy: Vec<usize>,
    /// `ω_i(X_u, X_v) / (|X_u||X_v|)` for each `i` in the isotropy set.
    pub omega: Vec<ResidualReport>,
    /// Distance of `ρ_L` from the great subsphere `S^I`.
    pub subsphere: ResidualReport,
}

impl IsotropyReport {
    pub fn pass(&self, tol: f64) -> bool {
        self.omega.iter().all(|r| r.max <= tol)
    }

    pub fn subsphere_pass(&self, tol: f64) -> bool {
        self.subsphere.max <= tol
    }
}

pub fn omega_isotropy<T: Real>(x: &ImmersionGrid<T>, isotropy: &[usize], eps: Chirality) -> Result<IsotropyReport> {
    let g = x.grid;
    let rhos = rho_surface(x, eps)?;
    let omega_reports = isotropy
        .iter()
        .map(|&i| {
            let per: Vec<f64> = (0..g.len())
                .map(|k| {
                    let s = x.xu[k].norm() * x.xv[k].norm();
                    to_f64((omega(eps, i, &x.xu[k], &x.xv[k]) / s).abs())
                })
                .collect();
            ResidualReport::new(&g, MARGIN, per)
        })
        .collect();
    let sub: Vec<f64> = rhos
        .iter()
        .map(|r| {
            let s: f64 = isotropy.iter().map(|&i| to_f64(r.0[i - 1]).powi(2)).sum();
            s.sqrt().min(1.0).asin()
        })
        .collect();
    Ok(IsotropyReport { isotropy: isotropy.to_vec(), omega: omega_reports, subsphere: ResidualReport::new(&g, MARGIN, sub) })
}

/// Tension field `Δρ + |dρ|^2 ρ` of a sphere-valued map, per node.
pub fn sphere_tension<T: Real>(grid: &Grid2D, rho: &[SpherePoint<T>]) -> Vec<Vector3<T>> {
    let f: Vec<DVector<T>> = rho.iter().map(|p| DVector::from_column_slice(p.0.as_slice())).collect();
    let fu = grid.d_u_field(&f);
    let fv = grid.d_v_field(&f);
    let fuu = grid.d_u_field(&fu);
    let fvv = grid.d_v_field(&fv);
    (0..grid.len())
        .map(|k| {
            let e = fu[k].norm_squared() + fv[k].norm_squared();
            let t = &fuu[k] + &fvv[k] + &f[k] * e;
            Vector3::new(t[0], t[1], t[2])
        })
        .collect()
}

/// Tension field of `ρ_L` as a residual report.
pub fn rho_harmonicity<T: Real>(x: &ImmersionGrid<T>, eps: Chirality) -> Result<ResidualReport> {
    let r = rho_surface(x, eps)?;
    let t = sphere_tension(&x.grid, &r);
    Ok(ResidualReport::new(&x.grid, MARGIN, t.iter().map(|v| to_f64(v.norm())).collect()))
}

/// Largest `|dρ|^2` over interior nodes, used to scale tension tolerances.
pub fn rho_energy_density<T: Real>(grid: &Grid2D, rho: &[SpherePoint<T>]) -> f64 {
    let f: Vec<DVector<T>> = rho.iter().map(|p| DVector::from_column_slice(p.0.as_slice())).collect();
    let fu = grid.d_u_field(&f);
    let fv = grid.d_v_field(&f);
    let mut best = 0.0f64;
    for j in 0..grid.nv {
        for i in 0..grid.nu {
            if grid.is_interior(i, j, MARGIN) {
                let k = grid.idx(i, j);
                best = best.max(to_f64(fu[k].norm_squared() + fv[k].norm_squared()));
            }
        }
    }
    best
}
