use nalgebra::{DMatrix, Vector3};
use serde_json::json;

use super::spec::{Family, FourSymmetricSpec};
use crate::error::{Error, Result};
use crate::liecore::matrices::{commutant, realify, so_basis, su_basis_realified};
use crate::liecore::{affine_element, make_algebra, semidirect, LinearAutomorphism};
use crate::linalg::{block_diag, standard_j};
use crate::quatgeom::{j_eps, Chirality, OrientedPlane, Quaternion};
use crate::scalar::{to_f64, tol, Real};

fn rows<T: Real>(m: &DMatrix<T>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| to_f64(m[(r, c)])).collect()).collect()
}

fn check_square_sign<T: Real>(j: &DMatrix<T>, sign: T) -> T {
    let n = j.nrows();
    let sq = (j * j - DMatrix::identity(n, n) * sign).amax();
    let orth = (j.transpose() * j - DMatrix::identity(n, n)).amax();
    sq.max(orth)
}

/// `S^{2n} = SO(2n+1)/SO(2n)` with `tau = Int(diag(-J0, 1))`.
pub fn sphere_spec<T: Real>(n: usize, j0: Option<DMatrix<T>>) -> Result<FourSymmetricSpec<T>> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let j0 = j0.unwrap_or_else(|| standard_j(n));
    if j0.nrows() != 2 * n || j0.ncols() != 2 * n {
        return Err(Error::ShapeMismatch(format!("J0 must be {0}x{0}", 2 * n)));
    }
    let defect = check_square_sign(&j0, -T::one());
    if defect > tol::<T>(1e-9) {
        return Err(Error::NotAntiInvolution(format!("defect {:e}", to_f64(defect))));
    }
    let alg = make_algebra(2 * n + 1, so_basis(2 * n + 1), None, tol::<T>(1e-9))?;
    let t = block_diag(&[&(-&j0), &DMatrix::identity(1, 1)]);
    let tau = LinearAutomorphism::inner(&alg, &t, 4)?;
    let params = json!({ "n": n, "J0": rows(&j0) });
    FourSymmetricSpec::new(alg, tau, Some(t), Family::Sphere, params)
}

/// `SO(p+q)/SO(p)xSO(q)` with `tau = Int(diag(J1, J2))`, `(J1^2, J2^2) = ±(-Id_p, Id_q)`.
pub fn real_grassmannian_spec<T: Real>(p: usize, q: usize, j1: &DMatrix<T>, j2: &DMatrix<T>) -> Result<FourSymmetricSpec<T>> {
    if p == 0 || q == 0 {
        return Err(Error::OutOfRange("p and q must be positive".into()));
    }
    if (p * q) % 2 == 1 {
        return Err(Error::ParityViolation(format!("p q = {} is odd", p * q)));
    }
    if j1.nrows() != p || j1.ncols() != p || j2.nrows() != q || j2.ncols() != q {
        return Err(Error::ShapeMismatch("J1 must be p x p and J2 q x q".into()));
    }
    let t = tol::<T>(1e-9);
    let plus = check_square_sign(j1, -T::one()).max(check_square_sign(j2, T::one()));
    let minus = check_square_sign(j1, T::one()).max(check_square_sign(j2, -T::one()));
    let sign = if plus <= t {
        "+"
    } else if minus <= t {
        "-"
    } else {
        return Err(Error::ParityViolation("(J1^2, J2^2) must be ±(-Id_p, Id_q)".into()));
    };
    let alg = make_algebra(p + q, so_basis(p + q), None, t)?;
    let tm = block_diag(&[j1, j2]);
    let tau = LinearAutomorphism::inner(&alg, &tm, 4)?;
    let params = json!({ "p": p, "q": q, "sign": sign, "J1": rows(j1), "J2": rows(j2) });
    let mut spec = FourSymmetricSpec::new(alg, tau, Some(tm), Family::RealGr, params)?;
    spec.notes.push("quotient not modeled".into());
    let r1 = eig_one_count(j1);
    let r2 = eig_one_count(j2);
    let exceptional = match sign {
        "+" => p % 4 == 0 && 2 * r2 == q,
        _ => q % 4 == 0 && 2 * r1 == p,
    };
    if exceptional {
        spec.notes.push("exceptional case: G0 has two components, only the identity component is modeled".into());
    }
    Ok(spec)
}

fn eig_one_count<T: Real>(s: &DMatrix<T>) -> usize {
    let n = s.nrows();
    crate::linalg::null_space(&(s - DMatrix::identity(n, n)), tol::<T>(1e-9)).ncols()
}

/// `SU(p+q)/S(U(p)xU(q))` with `J1 = i I_{l,p-l}` and `J2 = I_{r,q-r}`, in real form.
pub fn complex_grassmannian_spec<T: Real>(p: usize, q: usize, l: usize, r: usize) -> Result<FourSymmetricSpec<T>> {
    if p == 0 || q == 0 {
        return Err(Error::OutOfRange("p and q must be positive".into()));
    }
    if l > p || r > q {
        return Err(Error::OutOfRange(format!("need l <= p and r <= q, got l={l}, r={r}")));
    }
    let n = p + q;
    let mut re = DMatrix::<T>::zeros(n, n);
    let mut im = DMatrix::<T>::zeros(n, n);
    for k in 0..p {
        im[(k, k)] = if k < l { T::one() } else { -T::one() };
    }
    for k in 0..q {
        re[(p + k, p + k)] = if k < r { T::one() } else { -T::one() };
    }
    let tm = realify(&re, &im);
    let alg = make_algebra(2 * n, su_basis_realified(n), None, tol::<T>(1e-9))?;
    let tau = LinearAutomorphism::inner(&alg, &tm, 4)?;
    let params = json!({ "p": p, "q": q, "l": l, "r": r });
    let mut spec = FourSymmetricSpec::new(alg, tau, Some(tm), Family::ComplexGr, params)?;
    spec.notes.push("quotient not modeled".into());
    Ok(spec)
}

/// Affine spec `G_I ⋉ R^4` with `tau = Int(-ε J^ε_{1∧e}, 0)`.
///
/// `isotropy` lists indices of `(i, j, k)` as `1, 2, 3`; `G_I` is the commutant in
/// `SO(4)` of the structures `J^ε_{1∧e_i}`, `i ∈ I` (so `SO(4)`, `U(2)`, `SU(2)`).
/// `e` must be a unit vector orthogonal to those `e_i`.
pub fn affine_spec<T: Real>(isotropy: &[usize], eps: Chirality, e: &Vector3<T>) -> Result<FourSymmetricSpec<T>> {
    let mut idx = isotropy.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != isotropy.len() || idx.iter().any(|&i| !(1..=3).contains(&i)) || idx.len() > 2 {
        return Err(Error::OutOfRange(format!("isotropy set {isotropy:?} must be a subset of {{1,2,3}} of size <= 2")));
    }
    let en = e.norm();
    if en <= T::default_epsilon() {
        return Err(Error::NotUnit(0.0));
    }
    let e = e / en;
    for &i in &idx {
        if e[i - 1].abs() > tol::<T>(1e-9) {
            return Err(Error::OutOfRange(format!("e must be orthogonal to e_{i}")));
        }
    }
    let one = Quaternion::<T>::one();
    let structures: Vec<DMatrix<T>> = idx
        .iter()
        .map(|&i| {
            let p = OrientedPlane::new(one, Quaternion::basis(i)).expect("orthonormal");
            to_dyn(&j_eps(&p, eps).matrix)
        })
        .collect();
    let lin = commutant(&so_basis::<T>(4), &structures);
    let alg = semidirect(&lin, 4)?;
    let pe = OrientedPlane::new(one, Quaternion::pure(&e))?;
    let m = to_dyn(&j_eps(&pe, eps).matrix) * (-eps.sign::<T>());
    let tm = affine_element(&m, &[T::zero(); 4]);
    let tau = LinearAutomorphism::inner(&alg, &tm, 4)?;
    let params = json!({
        "isotropy": idx,
        "eps": if eps == Chirality::Plus { "+" } else { "-" },
        "e": [to_f64(e[0]), to_f64(e[1]), to_f64(e[2])],
    });
    FourSymmetricSpec::new(alg, tau, Some(tm), Family::Affine, params)
}

pub(crate) fn to_dyn<T: Real>(m: &nalgebra::Matrix4<T>) -> DMatrix<T> {
    DMatrix::from_fn(4, 4, |r, c| m[(r, c)])
}
