mod common;

use common::*;
use foursym::fourbundle::{affine_spec, complex_grassmannian_spec, real_grassmannian_spec, sphere_spec};
use foursym::liecore::matrices::{commutant, so_basis, su_basis_realified};
use foursym::liecore::*;
use foursym::linalg::{block_diag, standard_j};
use foursym::quatgeom::{j_eps, Chirality, OrientedPlane, Quaternion};
use foursym::{Cx, Error};
use nalgebra::{DMatrix, DVector, Vector3};
use proptest::prelude::*;

fn unit(d: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(d);
    v[i] = 1.0;
    v
}

fn eye(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n)
}

/// `J^+_{1∧e_i}` as a 4x4 matrix.
fn j_plus_basis(i: usize) -> DMatrix<f64> {
    let p = OrientedPlane::new(Quaternion::<f64>::one(), Quaternion::basis(i)).unwrap();
    let m = j_eps(&p, Chirality::Plus).matrix;
    DMatrix::from_fn(4, 4, |r, c| m[(r, c)])
}

fn real_gr_22() -> foursym::Spec64 {
    let j1 = standard_j::<f64>(1);
    let j2 = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
    real_grassmannian_spec(2, 2, &j1, &j2).unwrap()
}

#[test]
fn so3_structure_constants_are_levi_civita() {
    let alg = make_algebra(3, so_basis::<f64>(3), None, 1e-9).unwrap();
    assert_eq!(alg.dim(), 3);
    for i in 0..3 {
        for j in 0..3 {
            let direct = &alg.basis[i] * &alg.basis[j] - &alg.basis[j] * &alg.basis[i];
            let mut from_c = DMatrix::zeros(3, 3);
            let mut nonzero = 0;
            for k in 0..3 {
                let c = alg.c(i, j, k);
                assert!(c == 0.0 || (c.abs() - 1.0).abs() < 1e-12, "c[{i}][{j}][{k}] = {c}");
                assert!((c + alg.c(j, i, k)).abs() < 1e-12);
                if c != 0.0 {
                    nonzero += 1;
                    assert!(k != i && k != j);
                }
                from_c += &alg.basis[k] * c;
            }
            assert_eq!(nonzero, usize::from(i != j));
            assert!((direct - from_c).amax() < 1e-12);
        }
    }
    assert!(alg.closure_residual < 1e-12 && alg.jacobi_residual < 1e-12);
}

#[test]
fn non_closing_and_dependent_bases_rejected() {
    let so = so_basis::<f64>(3);
    let r = make_algebra(3, vec![so[0].clone(), so[2].clone()], None, 1e-9);
    assert!(matches!(r, Err(Error::NotClosed(x)) if x > 0.1));
    let r = make_algebra(3, vec![so[0].clone(), &so[0] * 2.0], None, 1e-9);
    assert!(matches!(r, Err(Error::DependentBasis(_))));
    assert!(matches!(make_algebra::<f64>(3, vec![], None, 1e-9), Err(Error::DependentBasis(_))));
}

#[test]
fn su2_closes_to_round_off() {
    let alg = make_algebra(4, su_basis_realified::<f64>(2), None, 1e-9).unwrap();
    assert_eq!(alg.dim(), 3);
    assert!(alg.closure_residual < 1e-12);
    assert!(alg.jacobi_residual < 1e-12);
    // su(2) is compact: the Killing form is negative definite.
    let k = alg.killing();
    assert!(k.symmetric_eigenvalues().iter().all(|&e| e < -1e-9));
}

#[test]
fn so3_grading_has_dims_1_1_0_1() {
    let spec = sphere_spec::<f64>(1, None).unwrap();
    assert_eq!(spec.grading.dims(), [1, 1, 0, 1]);
    assert!(check_grading(&spec.algebra, &spec.grading) < 1e-9);
}

#[test]
fn sphere_gradings_for_n_up_to_4() {
    for n in 1..=4usize {
        let spec = sphere_spec::<f64>(n, None).unwrap();
        let [g0, g1, g2, gm1] = spec.grading.dims();
        assert_eq!((g0, g2, g1, gm1), (n * n, n * n - n, n, n), "n = {n}");
        assert!(check_grading(&spec.algebra, &spec.grading) < 1e-9);
        assert_eq!(spec.g0.ncols(), n * n);
    }
}

#[test]
fn tau_squared_separates_h_and_m() {
    let spec = sphere_spec::<f64>(2, None).unwrap();
    let t = &spec.grading.tau.matrix;
    let s = t * t;
    assert!((&s * &spec.grading.h - &spec.grading.h).amax() < 1e-12);
    assert!((&s * &spec.grading.m + &spec.grading.m).amax() < 1e-12);
    let tc = s.map(|x| Cx::new(x, 0.0));
    for k in 0..4 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let b = &spec.grading.bases[k];
        assert!((&tc * b - b * Cx::new(sign, 0.0)).camax() < 1e-12);
    }
}

#[test]
fn swapped_basis_vector_breaks_closure() {
    let spec = sphere_spec::<f64>(2, None).unwrap();
    let g = &spec.grading;
    let mut bases = g.bases.clone();
    let (c1, c2) = (bases[1].column(0).into_owned(), bases[2].column(0).into_owned());
    bases[1].set_column(0, &c2);
    bases[2].set_column(0, &c1);
    let bad = Z4Grading::from_parts(&spec.algebra, g.tau.clone(), bases).unwrap();
    assert!(check_grading(&spec.algebra, &bad) > 0.1);
}

#[test]
fn affine_u2_grading_has_abelian_m() {
    let spec = affine_spec::<f64>(&[1], Chirality::Plus, &Vector3::y()).unwrap();
    assert_eq!(spec.algebra.dim(), 8);
    assert!(check_grading(&spec.algebra, &spec.grading) < 1e-9);
    let g = &spec.grading;
    let odd: Vec<DVector<Cx<f64>>> =
        [1usize, 3].iter().flat_map(|&k| (0..g.bases[k].ncols()).map(move |c| g.bases[k].column(c).into_owned())).collect();
    assert_eq!(odd.len(), 4);
    for x in &odd {
        for y in &odd {
            assert!(spec.algebra.bracket_cx(x, y).camax() < 1e-12);
        }
    }
}

#[test]
fn tau_from_j0_on_sphere_data() {
    let spec = sphere_spec::<f64>(2, None).unwrap();
    let mut r = rng(11);
    for _ in 0..20 {
        let j0 = random_j0(2, &mut r);
        let ext = tau_from_j0(&spec.pair.ad_m, &j0).unwrap();
        let (dh, dm) = (spec.pair.dim_h(), spec.pair.dim_m());
        let sq = &ext.tau * &ext.tau;
        let want = block_diag(&[&eye(dh), &(-eye(dm))]);
        assert!((sq - want).amax() < 1e-10);
        let tau = spec.pair.tau_from_j0(&spec.algebra, &j0).unwrap();
        assert!(tau.residual < 1e-9);
        assert!(curvature_invariance_check(&spec.pair.curvature, &j0).0);
        // The centralizer of the new tau is again u(2).
        let grading = z4_decompose(&spec.algebra, &tau).unwrap();
        let pair = SymmetricPair::new(&spec.algebra, grading.h.clone(), grading.m.clone(), None).unwrap();
        let g0 = compute_g0(&pair, &grading).unwrap();
        assert_eq!(g0.ncols(), 4);
    }
}

#[test]
fn s1_times_s3_admits_no_invariant_j0() {
    // h = so(3) acting on the R^3 factor of R (+) R^3.
    let action: Vec<DMatrix<f64>> = so_basis::<f64>(3).iter().map(|a| block_diag(&[&DMatrix::zeros(1, 1), a])).collect();
    let mut r = rng(12);
    for _ in 0..100 {
        let j0 = random_j0(2, &mut r);
        assert!(matches!(tau_from_j0(&action, &j0), Err(Error::NotInvariant(x)) if x > 1e-6));
    }
}

#[test]
fn tau_from_j0_rejects_non_complex_structure() {
    let spec = sphere_spec::<f64>(1, None).unwrap();
    assert!(matches!(tau_from_j0(&spec.pair.ad_m, &eye(2)), Err(Error::NotComplexStructure(_))));
}

#[test]
fn real_grassmannian_chi_structure_extends() {
    let spec = real_gr_22();
    let ext = tau_from_j0(&spec.pair.ad_m, &spec.j0_m).unwrap();
    assert!(ext.residual < 1e-10);
    assert!(curvature_invariance_check(&spec.pair.curvature, &spec.j0_m).0);
    assert!(spec.pair.tau_from_j0(&spec.algebra, &spec.j0_m).is_ok());
}

#[test]
fn complex_grassmannian_11_is_curvature_invariant() {
    let spec = complex_grassmannian_spec::<f64>(1, 1, 1, 1).unwrap();
    let (ok, res) = curvature_invariance_check(&spec.pair.curvature, &spec.j0_m);
    assert!(ok && res < 1e-12);
}

#[test]
fn generic_j0_on_real_grassmannian_fails_both_tests() {
    let spec = real_gr_22();
    let mut r = rng(13);
    for _ in 0..20 {
        let j0 = random_j0(2, &mut r);
        let (ok, res) = curvature_invariance_check(&spec.pair.curvature, &j0);
        assert!(!ok && res > 1e-3);
        assert!(tau_from_j0(&spec.pair.ad_m, &j0).is_err());
    }
}

#[test]
fn centralizer_dimensions() {
    let sphere = sphere_spec::<f64>(2, None).unwrap();
    assert_eq!(compute_g0(&sphere.pair, &sphere.grading).unwrap().ncols(), 4);
    let cg = complex_grassmannian_spec::<f64>(2, 1, 1, 0).unwrap();
    assert_eq!(compute_g0(&cg.pair, &cg.grading).unwrap().ncols(), 2);
}

#[test]
fn abelian_h_commuting_with_tau_is_g0() {
    // u(1) acting on R^2, tau = Int(diag(J, 1)).
    let j = standard_j::<f64>(1);
    let alg = semidirect(&[j.clone()], 2).unwrap();
    let tau = LinearAutomorphism::inner(&alg, &affine_element(&j, &[0.0, 0.0]), 4).unwrap();
    let grading = z4_decompose(&alg, &tau).unwrap();
    assert_eq!(grading.dims(), [1, 1, 0, 1]);
    let pair = SymmetricPair::new(&alg, grading.h.clone(), grading.m.clone(), None).unwrap();
    let g0 = compute_g0(&pair, &grading).unwrap();
    assert_eq!(g0.ncols(), pair.dim_h());
}

#[test]
fn derivations_of_m() {
    for n in 1..=3usize {
        let spec = sphere_spec::<f64>(n, None).unwrap();
        assert_eq!(der_m(&spec.pair.curvature).len(), n * (2 * n - 1), "n = {n}");
    }
    let ders = der_m(&real_gr_22().pair.curvature);
    assert_eq!(ders.len(), 2);
    for a in &ders {
        assert!((a + a.transpose()).amax() < 1e-12);
    }
    let flat = CurvatureTensor { p: 3, r: vec![vec![DMatrix::<f64>::zeros(3, 3); 3]; 3] };
    assert_eq!(der_m(&flat).len(), 3);
}

#[test]
fn semidirect_dimensions() {
    let so4 = so_basis::<f64>(4);
    let u2 = commutant(&so4, &[j_plus_basis(1)]);
    let su2 = commutant(&so4, &[j_plus_basis(1), j_plus_basis(2)]);
    assert_eq!((u2.len(), su2.len()), (4, 3));
    assert_eq!(semidirect(&u2, 4).unwrap().dim(), 8);
    assert_eq!(semidirect(&su2, 4).unwrap().dim(), 7);
    let abelian = semidirect::<f64>(&[], 3).unwrap();
    assert_eq!(abelian.dim(), 3);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(abelian.bracket(&unit(3, i), &unit(3, j)).amax(), 0.0);
        }
    }
    assert!(matches!(semidirect(&[eye(3)], 4), Err(Error::ActionMismatch(_))));
}

#[test]
fn semidirect_bracket_formula() {
    let u2 = commutant(&so_basis::<f64>(4), &[j_plus_basis(1)]);
    let alg = semidirect(&u2, 4).unwrap();
    let mut r = rng(14);
    let mut rand_elem = || DVector::from_fn(8, |_, _| gaussian_quat(&mut r).w);
    for _ in 0..20 {
        let (x, y) = (rand_elem(), rand_elem());
        let (mx, my) = (alg.element(&x), alg.element(&y));
        let (a, v) = (mx.view((0, 0), (4, 4)).into_owned(), mx.view((0, 4), (4, 1)).into_owned());
        let (b, w) = (my.view((0, 0), (4, 4)).into_owned(), my.view((0, 4), (4, 1)).into_owned());
        let got = alg.element(&alg.bracket(&x, &y));
        assert!((got.view((0, 0), (4, 4)) - (&a * &b - &b * &a)).amax() < 1e-12);
        assert!((got.view((0, 4), (4, 1)) - (&a * &w - &b * &v)).amax() < 1e-12);
    }
}

#[test]
fn single_precision_grading() {
    let spec = sphere_spec::<f32>(2, None).unwrap();
    assert_eq!(spec.grading.dims(), [4, 2, 2, 2]);
    assert!(check_grading(&spec.algebra, &spec.grading) < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_sphere_gradings_are_consistent(seed in any::<u64>(), n in 1usize..=3) {
        let j0 = random_j0(n, &mut rng(seed));
        let spec = sphere_spec(n, Some(j0)).unwrap();
        let g = &spec.grading;
        let [g0, g1, g2, gm1] = g.dims();
        prop_assert_eq!((g0, g1, g2, gm1), (n * n, n, n * n - n, n));
        prop_assert!(check_grading(&spec.algebra, g) < 1e-9);
        // conj(g~1) lies in g~-1: tau acts on it by -i.
        let t = g.tau.matrix.map(|x| Cx::new(x, 0.0));
        let c1 = g.bases[1].map(|z| z.conj());
        prop_assert!((&t * &c1 - &c1 * Cx::new(0.0, -1.0)).camax() < 1e-10);
        prop_assert!((&g.projectors[3] * &c1 - &c1).camax() < 1e-10);
        // The centralizer equals the real part of g~0.
        let g0r = compute_g0(&spec.pair, g).unwrap();
        let re = g.bases[0].map(|z| z.re);
        let proj = &re * re.clone().pseudo_inverse(1e-12).unwrap();
        prop_assert!((&g0r - &proj * &g0r).amax() < 1e-9);
    }
}
