use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{expm, standard_j};
use crate::quatgeom::Chirality;
use crate::scalar::{camax, lit, to_f64, tol, Cx, Real};

/// Component label of a ℂ-linear pair `(J1, J2)`: eigenvalue multiplicities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ComplexClass {
    /// `dim ker(J1 - i)`.
    pub l: usize,
    /// `dim ker(J2 - 1)`.
    pub r: usize,
}

/// Component label of a real pair `(J1, J2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RealClass {
    /// `Plus` for `(J1^2, J2^2) = (-Id, Id)`, `Minus` for the opposite sign.
    pub sign: Chirality,
    /// Orientation class of the factor that squares to `-Id`.
    pub chirality: Chirality,
    /// `dim ker(S - 1)` for the factor `S` that squares to `Id`.
    pub r: usize,
}

fn unitary_defect<T: Real>(u: &DMatrix<Cx<T>>) -> T {
    let n = u.nrows();
    camax((u.adjoint() * u - DMatrix::identity(n, n)).iter())
}

fn square_defect<T: Real>(u: &DMatrix<Cx<T>>, s: T) -> T {
    let n = u.nrows();
    camax((u * u - DMatrix::identity(n, n) * Cx::new(s, T::zero())).iter())
}

/// For normal `J` with eigenvalues of modulus one, the singular values of `J - μ` are
/// `|λ - μ|`: zero on the `μ` eigenspace and at least `√2` off it, so an absolute cut applies.
const MULTIPLICITY_CUT: f64 = 1e-6;

fn small_singular_values<T: Real>(m: &DMatrix<T>) -> usize {
    m.clone().svd(false, false).singular_values.iter().filter(|s| to_f64(**s) < MULTIPLICITY_CUT).count()
}

fn small_singular_values_cx<T: Real>(m: &DMatrix<Cx<T>>) -> usize {
    m.clone().svd(false, false).singular_values.iter().filter(|s| to_f64(**s) < MULTIPLICITY_CUT).count()
}

/// `(l, r)` for unitary `J1` with `J1^2 = -1` and `J2` with `J2^2 = 1`.
pub fn classify_complex_component<T: Real>(j1: &DMatrix<Cx<T>>, j2: &DMatrix<Cx<T>>) -> Result<ComplexClass> {
    let t = tol::<T>(1e-9);
    let bad = unitary_defect(j1)
        .max(unitary_defect(j2))
        .max(square_defect(j1, -T::one()))
        .max(square_defect(j2, T::one()));
    if bad > t {
        return Err(Error::NotInSigmaAut(format!("defect {:e}", to_f64(bad))));
    }
    let i = Cx::new(T::zero(), T::one());
    let p = j1.nrows();
    let q = j2.nrows();
    let l = small_singular_values_cx(&(j1 - DMatrix::identity(p, p) * i));
    let r = small_singular_values_cx(&(j2 - DMatrix::identity(q, q)));
    Ok(ComplexClass { l, r })
}

/// Orientation of `(v1, J v1, v2, J v2, ...)` for an orthogonal complex structure.
pub fn complex_structure_chirality<T: Real>(j: &DMatrix<T>) -> Chirality {
    let n = j.nrows();
    let mut frame: Vec<nalgebra::DVector<T>> = Vec::new();
    for c in 0..n {
        if frame.len() == n {
            break;
        }
        let mut v = nalgebra::DVector::zeros(n);
        v[c] = T::one();
        for _ in 0..2 {
            for f in &frame {
                let d = f.dot(&v);
                v.axpy(-d, f, T::one());
            }
        }
        if v.norm() < lit(1e-6) {
            continue;
        }
        let v = v.normalize();
        let jv = j * &v;
        frame.push(v);
        frame.push(jv);
    }
    let m = crate::linalg::columns(n, &frame);
    Chirality::from_sign(m.determinant())
}

/// Label of a real pair with `(J1^2, J2^2) = ±(-Id, Id)`, both orthogonal.
pub fn classify_real_component<T: Real>(j1: &DMatrix<T>, j2: &DMatrix<T>) -> Result<RealClass> {
    let t = tol::<T>(1e-9);
    let sq = |m: &DMatrix<T>, s: T| {
        let n = m.nrows();
        (m * m - DMatrix::identity(n, n) * s)
            .amax()
            .max((m.transpose() * m - DMatrix::identity(n, n)).amax())
    };
    let (sign, cs, sym) = if sq(j1, -T::one()) <= t && sq(j2, T::one()) <= t {
        (Chirality::Plus, j1, j2)
    } else if sq(j1, T::one()) <= t && sq(j2, -T::one()) <= t {
        (Chirality::Minus, j2, j1)
    } else {
        return Err(Error::NotInSigmaAut("(J1^2, J2^2) is not ±(-Id, Id)".into()));
    };
    let n = sym.nrows();
    let r = small_singular_values(&(sym - DMatrix::identity(n, n)));
    Ok(RealClass { sign, chirality: complex_structure_chirality(cs), r })
}

fn random_orthogonal<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<T> {
    let a = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let skew = (&a - a.transpose()).map(|x| lit::<T>(0.5 * x));
    expm(&skew)
}

fn random_unitary<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Cx<T>> {
    let re = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let im = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    // Real form of the skew-Hermitian matrix (re - re^T) / 2 + i (im + im^T) / 2.
    let a = (&re - re.transpose()).map(|x| lit::<T>(0.5 * x));
    let b = (&im + im.transpose()).map(|x| lit::<T>(0.5 * x));
    let u = expm(&crate::liecore::matrices::realify(&a, &b));
    DMatrix::from_fn(n, n, |r, c| Cx::new(u[(r, c)], u[(r + n, c)]))
}

/// Classifies randomly conjugated representatives of every `(l, r)` signature.
pub fn enumerate_complex_classes<T: Real>(p: usize, q: usize, seed: u64) -> Result<Vec<ComplexClass>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i = Cx::new(T::zero(), T::one());
    let one = Cx::new(T::one(), T::zero());
    let mut out = Vec::new();
    for l in 0..=p {
        for r in 0..=q {
            let d1 = DMatrix::from_fn(p, p, |a, b| if a != b { Cx::new(T::zero(), T::zero()) } else if a < l { i } else { -i });
            let d2 = DMatrix::from_fn(q, q, |a, b| if a != b { Cx::new(T::zero(), T::zero()) } else if a < r { one } else { -one });
            let u1 = random_unitary::<T>(p, &mut rng);
            let u2 = random_unitary::<T>(q, &mut rng);
            let j1 = &u1 * d1 * u1.adjoint();
            let j2 = &u2 * d2 * u2.adjoint();
            out.push(classify_complex_component(&j1, &j2)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Classifies conjugated representatives of every block signature and sign.
///
/// For the sign `+` (needs `p` even) `J1` is a complex structure of either
/// orientation and `J2 = diag(Id_r, -Id_{q-r})`; the sign `-` swaps roles (needs `q` even).
pub fn enumerate_real_classes<T: Real>(p: usize, q: usize, seed: u64) -> Result<Vec<RealClass>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<RealClass> = Vec::new();
    let mut reps = |cs_dim: usize, sym_dim: usize, swap: bool, rng: &mut ChaCha8Rng| -> Result<()> {
        if cs_dim % 2 == 1 {
            return Ok(());
        }
        for flip in [false, true] {
            let mut j = standard_j::<T>(cs_dim / 2);
            if flip {
                let mut refl = DMatrix::<T>::identity(cs_dim, cs_dim);
                refl[(cs_dim - 1, cs_dim - 1)] = -T::one();
                j = &refl * j * &refl;
            }
            for r in 0..=sym_dim {
                let s = DMatrix::from_fn(sym_dim, sym_dim, |a, b| {
                    if a != b {
                        T::zero()
                    } else if a < r {
                        T::one()
                    } else {
                        -T::one()
                    }
                });
                let o1 = random_orthogonal::<T>(cs_dim, rng);
                let o2 = random_orthogonal::<T>(sym_dim, rng);
                let jc = &o1 * &j * o1.transpose();
                let sc = &o2 * s * o2.transpose();
                let class = if swap { classify_real_component(&sc, &jc)? } else { classify_real_component(&jc, &sc)? };
                if !out.contains(&class) {
                    out.push(class);
                }
            }
        }
        Ok(())
    };
    reps(p, q, false, &mut rng)?;
    reps(q, p, true, &mut rng)?;
    Ok(out)
}
