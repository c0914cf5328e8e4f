//! Quaternions, oriented 2-planes of R^4 and the twistor maps to S^2 x S^2.
//!
//! Quaternions use the basis `(1, i, j, k)`. For an oriented plane spanned by an
//! orthonormal pair `(q, q')` the two complex structures are
//! `J+ = L_{q x_L q'}` and `J- = -R_{q x_R q'}`, both sending `q` to `q'`.

use nalgebra::{Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{lit, tol, to_f64, Real};

/// Sign label used for chirality and for the left/right choice `ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Chirality::Plus => T::one(),
            Chirality::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }

    pub fn from_sign<T: Real>(s: T) -> Self {
        if s >= T::zero() {
            Chirality::Plus
        } else {
            Chirality::Minus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }
    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }
    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }
    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }
    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }
    /// Basis element `e_n` of `(1, i, j, k)`.
    pub fn basis(n: usize) -> Self {
        let mut v = Vector4::zeros();
        v[n] = T::one();
        Self::from_vec(&v)
    }
    pub fn pure(v: &Vector3<T>) -> Self {
        Self::new(T::zero(), v[0], v[1], v[2])
    }
    pub fn from_vec(v: &Vector4<T>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
    pub fn to_vec(&self) -> Vector4<T> {
        Vector4::new(self.w, self.x, self.y, self.z)
    }
    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }
    pub fn re(&self) -> T {
        self.w
    }
    pub fn im(&self) -> Vector3<T> {
        Vector3::new(self.x, self.y, self.z)
    }
    pub fn dot(&self, o: &Self) -> T {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }
    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }
    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }
    pub fn normalize(&self) -> Self {
        *self * (T::one() / self.norm())
    }
    pub fn inverse(&self) -> Self {
        self.conj() * (T::one() / self.norm_sq())
    }
    /// `exp` of a pure quaternion.
    pub fn exp_pure(v: &Vector3<T>) -> Self {
        let t = v.norm();
        if t == T::zero() {
            return Self::one();
        }
        let s = t.sin() / t;
        Self::new(t.cos(), v[0] * s, v[1] * s, v[2] * s)
    }
    /// Matrix of `x -> self * x`.
    pub fn left_matrix(&self) -> Matrix4<T> {
        let mut m = Matrix4::zeros();
        for c in 0..4 {
            m.set_column(c, &(*self * Self::basis(c)).to_vec());
        }
        m
    }
    /// Matrix of `x -> x * self`.
    pub fn right_matrix(&self) -> Matrix4<T> {
        let mut m = Matrix4::zeros();
        for c in 0..4 {
            m.set_column(c, &(Self::basis(c) * *self).to_vec());
        }
        m
    }
    /// Conjugation `x -> self x self^{-1}`, for a unit quaternion.
    pub fn rotate(&self, x: &Self) -> Self {
        *self * *x * self.conj()
    }
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl<T: Real> Mul<T> for Quaternion<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Unit pure quaternion, i.e. a point of the unit sphere of `Im H`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint<T>(pub Vector3<T>);

impl<T: Real> SpherePoint<T> {
    /// Normalizes `v`; fails on the zero vector.
    pub fn new(v: Vector3<T>) -> Result<Self> {
        let n = v.norm();
        if n <= T::default_epsilon() {
            return Err(Error::NotUnit(to_f64(n)));
        }
        Ok(Self(v / n))
    }
    pub fn quat(&self) -> Quaternion<T> {
        Quaternion::pure(&self.0)
    }
    pub fn dist(&self, o: &Self) -> T {
        (self.0 - o.0).norm()
    }
}

/// Oriented 2-plane of `R^4 = H`, stored as an orthonormal pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedPlane<T> {
    pub q: Quaternion<T>,
    pub q2: Quaternion<T>,
}

impl<T: Real> OrientedPlane<T> {
    /// Accepts a pair orthonormal to within `1e-9` and re-orthonormalizes it.
    pub fn new(q: Quaternion<T>, q2: Quaternion<T>) -> Result<Self> {
        let t = tol::<T>(1e-9);
        let defect = (q.norm_sq() - T::one())
            .abs()
            .max((q2.norm_sq() - T::one()).abs())
            .max(q.dot(&q2).abs());
        if defect > t {
            return Err(Error::NotOrthonormal(to_f64(defect)));
        }
        Ok(Self::gram_schmidt(q, q2))
    }

    /// Oriented plane spanned by two independent (not necessarily orthonormal) vectors.
    pub fn from_span(u: Quaternion<T>, v: Quaternion<T>) -> Result<Self> {
        let nu = u.norm();
        let w = v - u * (u.dot(&v) / u.norm_sq());
        if nu <= T::default_epsilon() || w.norm() <= T::default_epsilon() * v.norm().max(T::one()) {
            return Err(Error::NotOrthonormal(f64::INFINITY));
        }
        Ok(Self::gram_schmidt(u, v))
    }

    fn gram_schmidt(q: Quaternion<T>, q2: Quaternion<T>) -> Self {
        let q = q.normalize();
        let q2 = (q2 - q * q.dot(&q2)).normalize();
        Self { q, q2 }
    }

    /// Orthogonal projector `q q^T + q' q'^T`.
    pub fn projector(&self) -> Matrix4<T> {
        let a = self.q.to_vec();
        let b = self.q2.to_vec();
        a * a.transpose() + b * b.transpose()
    }

    /// Plücker coordinates `q_a q'_b - q_b q'_a` for `a < b`.
    pub fn bivector(&self) -> [T; 6] {
        let a = self.q.to_vec();
        let b = self.q2.to_vec();
        let mut out = [T::zero(); 6];
        let mut n = 0;
        for r in 0..4 {
            for s in (r + 1)..4 {
                out[n] = a[r] * b[s] - a[s] * b[r];
                n += 1;
            }
        }
        out
    }

    /// Same oriented plane: equal projectors and positively related orientation.
    pub fn equivalent(&self, o: &Self, eps: T) -> bool {
        let dp = (self.projector() - o.projector()).abs().max();
        let b1 = self.bivector();
        let b2 = o.bivector();
        let d = b1.iter().zip(b2.iter()).fold(T::zero(), |acc, (x, y)| acc + *x * *y);
        dp <= eps && d > T::zero()
    }

    pub fn reversed(&self) -> Self {
        Self { q: self.q2, q2: self.q }
    }

    /// Orthogonal complement with the orientation making `P ∧ P⊥` direct.
    pub fn orthogonal(&self) -> Self {
        let p = self.projector();
        let mut rest = Vec::new();
        for c in 0..4 {
            let e = Quaternion::<T>::basis(c).to_vec();
            let r = e - p * e;
            rest.push(Quaternion::from_vec(&r));
        }
        rest.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
        let a = rest[0].normalize();
        let mut b = rest[1..]
            .iter()
            .map(|x| *x - a * a.dot(x))
            .max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())
            .unwrap()
            .normalize();
        let m = Matrix4::from_columns(&[self.q.to_vec(), self.q2.to_vec(), a.to_vec(), b.to_vec()]);
        if m.determinant() < T::zero() {
            b = -b;
        }
        Self { q: a, q2: b }
    }

    /// Image under a linear map of `R^4`.
    pub fn mapped(&self, m: &Matrix4<T>) -> Result<Self> {
        Self::from_span(Quaternion::from_vec(&(m * self.q.to_vec())), Quaternion::from_vec(&(m * self.q2.to_vec())))
    }
}

/// Orthogonal complex structure on `R^4` together with its chirality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlmostComplexStructure4<T> {
    pub matrix: Matrix4<T>,
    pub chirality: Chirality,
}

impl<T: Real> AlmostComplexStructure4<T> {
    /// Validates `J^2 = -1`, `J^T J = 1` (tolerance `1e-9`) and reads off the chirality.
    pub fn new(matrix: Matrix4<T>) -> Result<Self> {
        let t = tol::<T>(1e-9);
        let sq = (matrix * matrix + Matrix4::identity()).abs().max();
        let orth = (matrix.transpose() * matrix - Matrix4::identity()).abs().max();
        if sq > t || orth > t {
            return Err(Error::NotAntiInvolution(format!(
                "|J^2+1| = {:e}, |J^T J - 1| = {:e}",
                to_f64(sq),
                to_f64(orth)
            )));
        }
        Ok(Self { matrix, chirality: chirality_of(&matrix) })
    }
}

/// Sign of `det[v | Jv | w | Jw]` for `w` orthogonal to `span(v, Jv)`.
pub fn chirality_of<T: Real>(j: &Matrix4<T>) -> Chirality {
    let v = Vector4::new(T::one(), T::zero(), T::zero(), T::zero());
    let jv = j * v;
    let jvn = jv / jv.norm();
    let mut best = Vector4::zeros();
    for c in 1..4 {
        let mut e = Vector4::zeros();
        e[c] = T::one();
        let r = e - v * v.dot(&e) - jvn * jvn.dot(&e);
        if r.norm() > best.norm() {
            best = r;
        }
    }
    let w = best / best.norm();
    let m = Matrix4::from_columns(&[v, jv, w, j * w]);
    Chirality::from_sign(m.determinant())
}

/// `q x_L q' = -Im(q conj(q'))`.
pub fn cross_left<T: Real>(q: &Quaternion<T>, q2: &Quaternion<T>) -> Quaternion<T> {
    Quaternion::pure(&-(*q * q2.conj()).im())
}

/// `q x_R q' = -Im(conj(q) q')`.
pub fn cross_right<T: Real>(q: &Quaternion<T>, q2: &Quaternion<T>) -> Quaternion<T> {
    Quaternion::pure(&-(q.conj() * *q2).im())
}

pub fn j_plus<T: Real>(p: &OrientedPlane<T>) -> AlmostComplexStructure4<T> {
    AlmostComplexStructure4 {
        matrix: cross_left(&p.q, &p.q2).left_matrix(),
        chirality: Chirality::Plus,
    }
}

pub fn j_minus<T: Real>(p: &OrientedPlane<T>) -> AlmostComplexStructure4<T> {
    AlmostComplexStructure4 {
        matrix: -cross_right(&p.q, &p.q2).right_matrix(),
        chirality: Chirality::Minus,
    }
}

pub fn j_eps<T: Real>(p: &OrientedPlane<T>, eps: Chirality) -> AlmostComplexStructure4<T> {
    match eps {
        Chirality::Plus => j_plus(p),
        Chirality::Minus => j_minus(p),
    }
}

/// `rho_+ = x_L`, `rho_- = x_R`.
pub fn rho<T: Real>(p: &OrientedPlane<T>, eps: Chirality) -> SpherePoint<T> {
    let c = match eps {
        Chirality::Plus => cross_left(&p.q, &p.q2),
        Chirality::Minus => cross_right(&p.q, &p.q2),
    };
    SpherePoint(c.im())
}

pub fn gr2_to_s2s2<T: Real>(p: &OrientedPlane<T>) -> (SpherePoint<T>, SpherePoint<T>) {
    (rho(p, Chirality::Plus), rho(p, Chirality::Minus))
}

/// Inverse of [`gr2_to_s2s2`].
///
/// With `e = i`, `rho(1 ∧ e) = (e, -e)`. Picking `a e a^-1 = s+` and `-b e b^-1 = s-`,
/// the plane `chi(a, b)(1 ∧ e)` has image `(s+, s-)`.
pub fn s2s2_to_gr2<T: Real>(sp: &SpherePoint<T>, sm: &SpherePoint<T>) -> OrientedPlane<T> {
    let e = SpherePoint(Vector3::x());
    let a = rotation_to(&e, sp);
    let b = rotation_to(&e, &SpherePoint(-sm.0));
    let g = chi(&a, &b);
    let one = Quaternion::<T>::one().to_vec();
    let ev = Quaternion::<T>::i().to_vec();
    OrientedPlane::gram_schmidt(Quaternion::from_vec(&(g * one)), Quaternion::from_vec(&(g * ev)))
}

/// `chi(a, b) = L_a R_{conj(b)}`, i.e. `x -> a x conj(b)`.
pub fn chi<T: Real>(a: &Quaternion<T>, b: &Quaternion<T>) -> Matrix4<T> {
    a.left_matrix() * b.conj().right_matrix()
}

/// Hopf-type projection `a -> a e a^-1`.
pub fn hopf<T: Real>(a: &Quaternion<T>, e: &SpherePoint<T>) -> SpherePoint<T> {
    SpherePoint((*a * e.quat() * a.inverse()).im())
}

/// Minimal rotation `r` (unit quaternion) with `r s r^-1 = t`, or `None` when `t ≈ -s`.
pub fn minimal_rotation<T: Real>(s: &SpherePoint<T>, t: &SpherePoint<T>) -> Option<Quaternion<T>> {
    let r = Quaternion::one() - t.quat() * s.quat();
    if r.norm() <= lit::<T>(1e-8) {
        None
    } else {
        Some(r.normalize())
    }
}

/// Some unit quaternion rotating `s` onto `t`; handles the antipodal case.
pub fn rotation_to<T: Real>(s: &SpherePoint<T>, t: &SpherePoint<T>) -> Quaternion<T> {
    minimal_rotation(s, t).unwrap_or_else(|| {
        let v = s.0;
        let trial = if v[0].abs() < lit(0.9) { Vector3::x() } else { Vector3::y() };
        let f = (trial - v * v.dot(&trial)).normalize();
        Quaternion::pure(&f)
    })
}

/// `ω_i^ε(x, y) = <x, J y>` with `J = L_{e_i}` for `ε = +` and `R_{e_i}` for `ε = -`.
pub fn omega<T: Real>(eps: Chirality, i: usize, x: &Quaternion<T>, y: &Quaternion<T>) -> T {
    let e = Quaternion::<T>::basis(i);
    let jy = match eps {
        Chirality::Plus => e * *y,
        Chirality::Minus => *y * e,
    };
    x.dot(&jy)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Quaternion<f64>;

    #[test]
    fn unit_products() {
        assert_eq!(Q::i() * Q::j(), Q::k());
        assert_eq!(Q::j() * Q::k(), Q::i());
        assert_eq!(Q::k() * Q::i(), Q::j());
        assert_eq!(Q::i() * Q::i(), -Q::one());
    }

    #[test]
    fn cross_products_on_basis() {
        assert_eq!(cross_left(&Q::i(), &Q::j()), Q::k());
        assert_eq!(cross_right(&Q::i(), &Q::j()), Q::k());
        assert_eq!(cross_left(&Q::one(), &Q::i()), Q::i());
        assert_eq!(cross_right(&Q::one(), &Q::i()), -Q::i());
    }

    #[test]
    fn j_plus_of_one_i_is_left_i() {
        let p = OrientedPlane::new(Q::one(), Q::i()).unwrap();
        let j = j_plus(&p);
        assert!((j.matrix - Q::i().left_matrix()).abs().max() < 1e-15);
        assert_eq!(chirality_of(&j.matrix), Chirality::Plus);
        assert_eq!(chirality_of(&j_minus(&p).matrix), Chirality::Minus);
    }

    #[test]
    fn rho_of_one_wedge_e() {
        let p = OrientedPlane::new(Q::one(), Q::i()).unwrap();
        let (a, b) = gr2_to_s2s2(&p);
        assert_eq!(a.0, Vector3::x());
        assert_eq!(b.0, -Vector3::x());
    }

    #[test]
    fn rejects_non_orthonormal() {
        assert!(OrientedPlane::new(Q::one(), Q::one()).is_err());
        let near = Q::new(1e-11, 1.0, 0.0, 0.0);
        assert!(OrientedPlane::new(Q::one(), near).is_ok());
    }

    #[test]
    fn f32_cross_left() {
        let a = Quaternion::<f32>::i();
        let b = Quaternion::<f32>::j();
        assert_eq!(cross_left(&a, &b), Quaternion::<f32>::k());
    }
}
