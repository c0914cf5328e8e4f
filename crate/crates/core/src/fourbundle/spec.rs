use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liecore::{compute_g0, z4_decompose, LieAlgebraBasis, LinearAutomorphism, SymmetricPair, Z4Grading};
use crate::linalg::{expm, pinv};
use crate::scalar::{lit, tol, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sphere,
    RealGr,
    ComplexGr,
    Affine,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Sphere => "sphere",
            Family::RealGr => "real_gr",
            Family::ComplexGr => "complex_gr",
            Family::Affine => "affine",
        }
    }
}

/// A 4-symmetric space `G/G0` given at the Lie-algebra level.
///
/// `j0_m` is `tau|m` in the orthonormal basis `pair.m`. The twistor lift used by the
/// zero-curvature machinery is [`admissible_j0`](Self::admissible_j0) `= -tau|m`;
/// both signs give the same `G0`.
#[derive(Clone, Debug)]
pub struct FourSymmetricSpec<T: Real> {
    pub algebra: LieAlgebraBasis<T>,
    pub grading: Z4Grading<T>,
    pub pair: SymmetricPair<T>,
    pub j0_m: DMatrix<T>,
    /// Basis of `g0` (coefficient columns), from the centralizer computation.
    pub g0: DMatrix<T>,
    /// Matrix `t` with `tau = Int(t)`, when known.
    pub tau_group: Option<DMatrix<T>>,
    pub family: Family,
    pub params: serde_json::Value,
    /// Known limitations for this instance (quotients, disconnected `G0`, ...).
    pub notes: Vec<String>,
}

impl<T: Real> FourSymmetricSpec<T> {
    pub fn new(
        algebra: LieAlgebraBasis<T>,
        tau: LinearAutomorphism<T>,
        tau_group: Option<DMatrix<T>>,
        family: Family,
        params: serde_json::Value,
    ) -> Result<Self> {
        if tau.order != 4 {
            return Err(Error::NotAutomorphism(format!("expected order 4, got {}", tau.order)));
        }
        let grading = z4_decompose(&algebra, &tau)?;
        let m0 = grading.m.clone();
        let m0_coords = pinv(&m0, tol::<T>(1e-12));
        let tau_m0 = &m0_coords * &tau.matrix * &m0;
        let pair = SymmetricPair::new(&algebra, grading.h.clone(), m0, Some(&tau_m0))?;
        let j0_m = pair.restrict_m(&tau.matrix);
        let g0 = compute_g0(&pair, &grading)?;
        Ok(Self { algebra, grading, pair, j0_m, g0, tau_group, family, params, notes: Vec::new() })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `J0 = -tau|m`, the complex structure carried by admissible lifts.
    pub fn admissible_j0(&self) -> DMatrix<T> {
        -&self.j0_m
    }

    /// `tau|m ∘ pr_m` as a `d x d` map.
    pub fn tau_on_m(&self) -> DMatrix<T> {
        &self.grading.tau.matrix * self.grading.proj_m()
    }

    pub fn sampler(&self, seed: u64) -> GroupSampler<'_, T> {
        GroupSampler { spec: self, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Twistor point of `g`: `Ad g ∘ tau|m ∘ Ad g^-1` on `Ad g(m)`, extended by 0 on `Ad g(h)`.
    pub fn embed(&self, g: &DMatrix<T>) -> Result<TwistorPoint<T>> {
        let (ad, _) = self
            .algebra
            .adjoint(g)
            .ok_or_else(|| Error::SingularFrame(0, 0))?;
        let ad_inv = ad.clone().try_inverse().ok_or_else(|| Error::SingularFrame(0, 0))?;
        let j = &ad * self.tau_on_m() * ad_inv;
        Ok(TwistorPoint { base: g.clone(), j })
    }

    /// `Ad_m(exp a)` for `a = sum c_r h_r`.
    pub fn ad_m_exp(&self, c: &DVector<T>) -> DMatrix<T> {
        let p = self.pair.dim_m();
        let mut a = DMatrix::zeros(p, p);
        for (r, adr) in self.pair.ad_m.iter().enumerate() {
            a += adr * c[r];
        }
        expm(&a)
    }
}

/// A point of the twistor bundle, stored as an endomorphism of `g`.
#[derive(Clone, Debug)]
pub struct TwistorPoint<T: Real> {
    pub base: DMatrix<T>,
    pub j: DMatrix<T>,
}

impl<T: Real> TwistorPoint<T> {
    pub fn dist(&self, o: &Self) -> T {
        (&self.j - &o.j).norm()
    }
}

/// Seeded sampler of group elements `exp(X_1) ... exp(X_k)`, `k <= 3`, with
/// Gaussian coefficients of scale 1/2.
pub struct GroupSampler<'a, T: Real> {
    spec: &'a FourSymmetricSpec<T>,
    rng: ChaCha8Rng,
}

impl<'a, T: Real> GroupSampler<'a, T> {
    fn gaussian(&mut self, n: usize, scale: f64) -> DVector<T> {
        DVector::from_fn(n, |_, _| {
            let z: f64 = self.rng.sample(StandardNormal);
            lit(scale * z)
        })
    }

    /// Gaussian element of the subspace spanned by the columns of `basis`.
    pub fn algebra_element(&mut self, basis: &DMatrix<T>) -> DVector<T> {
        let c = self.gaussian(basis.ncols(), 0.5);
        basis * c
    }

    fn product(&mut self, basis: &DMatrix<T>) -> DMatrix<T> {
        let k = self.rng.gen_range(1..=3);
        let n = self.spec.algebra.n;
        let mut g = DMatrix::identity(n, n);
        for _ in 0..k {
            let x = self.algebra_element(basis);
            g = g * expm(&self.spec.algebra.element(&x));
        }
        g
    }

    pub fn group(&mut self) -> DMatrix<T> {
        let d = self.spec.dim();
        self.product(&DMatrix::identity(d, d))
    }

    pub fn h(&mut self) -> DMatrix<T> {
        let b = self.spec.pair.h.clone();
        self.product(&b)
    }

    pub fn g0(&mut self) -> DMatrix<T> {
        let b = self.spec.g0.clone();
        self.product(&b)
    }

    /// Uniform point of the ball of the given radius in `span(basis)` coordinates.
    pub fn ball(&mut self, dim: usize, radius: f64) -> DVector<T> {
        let v: DVector<f64> = DVector::from_fn(dim, |_, _| self.rng.sample(StandardNormal));
        let u: f64 = self.rng.gen();
        let r = radius * u.powf(1.0 / dim.max(1) as f64);
        let n = v.norm().max(f64::MIN_POSITIVE);
        v.map(|x| lit(x * r / n))
    }
}

/// Local dimension estimate of the fibre orbit `Int(H) J0`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitEstimate {
    pub dim: usize,
    pub expected: usize,
    pub singular_values: Vec<f64>,
}

/// Samples `h J0 h^-1` near `J0` and estimates the orbit dimension.
///
/// Each sample `a` (in a ball of radius `radius` of `h`) contributes the
/// Richardson-extrapolated symmetric difference `(8 D(a/2) - D(a)) / 3` with
/// `D(a) = (J(a) - J(-a)) / 2`, which removes curvature of the orbit up to
/// fifth order. Singular values above `1e-6 * max` count as tangent directions.
pub fn fibre_orbit<T: Real>(spec: &FourSymmetricSpec<T>, n_samples: usize, radius: f64, seed: u64) -> OrbitEstimate {
    let dh = spec.pair.dim_h();
    let p = spec.pair.dim_m();
    let expected = dh - spec.g0.ncols();
    let j0 = &spec.j0_m;
    let conj = |c: &DVector<T>| {
        let e = spec.ad_m_exp(c);
        let ei = e.clone().try_inverse().expect("exp is invertible");
        e * j0 * ei
    };
    let mut s = spec.sampler(seed);
    let mut rows = DMatrix::<T>::zeros(n_samples, p * p);
    let half = lit::<T>(0.5);
    for k in 0..n_samples {
        let a = s.ball(dh, radius);
        let d1 = (conj(&a) - conj(&-&a)) * half;
        let a2 = &a * half;
        let d2 = (conj(&a2) - conj(&-&a2)) * half;
        let lin = (d2 * lit::<T>(8.0) - d1) / lit::<T>(3.0);
        for (c, v) in lin.iter().enumerate() {
            rows[(k, c)] = *v;
        }
    }
    let sv: Vec<f64> = if dh == 0 || n_samples == 0 {
        Vec::new()
    } else {
        rows.svd(false, false).singular_values.iter().map(|x| crate::scalar::to_f64(*x)).collect()
    };
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let floor = 1e-9 * radius;
    let dim = sv.iter().filter(|&&x| x > 1e-6 * smax && x > floor).count();
    OrbitEstimate { dim, expected, singular_values: sv }
}
