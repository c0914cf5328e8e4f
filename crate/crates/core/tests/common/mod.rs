#![allow(dead_code)]

use foursym::quatgeom::{OrientedPlane, Quaternion, SpherePoint};
use nalgebra::Vector3;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Q = Quaternion<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_quat(r: &mut ChaCha8Rng) -> Q {
    Q::new(r.sample(StandardNormal), r.sample(StandardNormal), r.sample(StandardNormal), r.sample(StandardNormal))
}

pub fn unit_quat(r: &mut ChaCha8Rng) -> Q {
    gaussian_quat(r).normalize()
}

pub fn sphere_point(r: &mut ChaCha8Rng) -> SpherePoint<f64> {
    SpherePoint::new(Vector3::new(r.sample(StandardNormal), r.sample(StandardNormal), r.sample(StandardNormal))).unwrap()
}

pub fn plane(r: &mut ChaCha8Rng) -> OrientedPlane<f64> {
    loop {
        if let Ok(p) = OrientedPlane::from_span(gaussian_quat(r), gaussian_quat(r)) {
            return p;
        }
    }
}

/// Hamilton product written out from the multiplication table, independent of the library.
pub fn hamilton(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    let [a0, a1, a2, a3] = a;
    let [b0, b1, b2, b3] = b;
    [
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

pub fn arr(q: &Q) -> [f64; 4] {
    [q.w, q.x, q.y, q.z]
}

pub fn conj_arr(a: [f64; 4]) -> [f64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

pub fn quat_strategy() -> impl Strategy<Value = Q> {
    prop::array::uniform4(-3.0f64..3.0).prop_map(|a| Q::new(a[0], a[1], a[2], a[3]))
}

pub fn unit_quat_strategy() -> impl Strategy<Value = Q> {
    quat_strategy().prop_filter("non-degenerate", |q| q.norm() > 0.1).prop_map(|q| q.normalize())
}

pub fn plane_strategy() -> impl Strategy<Value = OrientedPlane<f64>> {
    (quat_strategy(), quat_strategy()).prop_filter_map("independent", |(a, b)| {
        let p = OrientedPlane::from_span(a, b).ok()?;
        let w = b - a * (a.dot(&b) / a.norm_sq());
        (a.norm() > 0.1 && w.norm() > 0.1).then_some(p)
    })
}

pub fn sphere_strategy() -> impl Strategy<Value = SpherePoint<f64>> {
    prop::array::uniform3(-1.0f64..1.0)
        .prop_filter("non-degenerate", |v| v.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(|v| SpherePoint::new(Vector3::new(v[0], v[1], v[2])).unwrap())
}

/// Haar-ish orthogonal matrix from the QR factor of a Gaussian matrix.
pub fn random_orthogonal(n: usize, r: &mut ChaCha8Rng) -> nalgebra::DMatrix<f64> {
    let g = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| r.sample(StandardNormal));
    let qr = g.qr();
    let (q, rr) = (qr.q(), qr.r());
    let signs = nalgebra::DMatrix::from_diagonal(&rr.diagonal().map(|d| if d < 0.0 { -1.0 } else { 1.0 }));
    q * signs
}

/// Random orthogonal anti-involution `O J O^T` on `R^{2n}`.
pub fn random_j0(n: usize, r: &mut ChaCha8Rng) -> nalgebra::DMatrix<f64> {
    let o = random_orthogonal(2 * n, r);
    &o * foursym::linalg::standard_j::<f64>(n) * o.transpose()
}
