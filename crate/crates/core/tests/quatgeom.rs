mod common;

use approx::assert_abs_diff_eq;
use common::*;
use foursym::quatgeom::*;
use nalgebra::{Matrix4, Vector3};
use proptest::prelude::*;

fn pure(v: [f64; 3]) -> Q {
    Q::new(0.0, v[0], v[1], v[2])
}

fn close(a: &Q, b: &Q, eps: f64) -> bool {
    (*a - *b).norm() <= eps
}

#[test]
fn cross_products_on_examples() {
    let (one, i, j, k) = (Q::one(), Q::i(), Q::j(), Q::k());
    assert_eq!(cross_left(&i, &j), k);
    assert_eq!(cross_right(&i, &j), k);
    assert_eq!(cross_left(&one, &i), i);
    assert_eq!(cross_right(&one, &i), -i);
    let q = Q::new(0.3, -1.2, 0.5, 2.0);
    assert_eq!(cross_left(&q, &q).norm(), 0.0);
    assert_eq!(cross_right(&q, &q).norm(), 0.0);
}

#[test]
fn cross_products_match_hamilton_oracle() {
    let mut r = rng(1);
    for _ in 0..200 {
        let (a, b) = (gaussian_quat(&mut r), gaussian_quat(&mut r));
        let l = hamilton(arr(&a), conj_arr(arr(&b)));
        let rr = hamilton(conj_arr(arr(&a)), arr(&b));
        assert!(close(&cross_left(&a, &b), &pure([-l[1], -l[2], -l[3]]), 1e-12));
        assert!(close(&cross_right(&a, &b), &pure([-rr[1], -rr[2], -rr[3]]), 1e-12));
    }
}

#[test]
fn restriction_to_imaginary_is_the_classical_cross_product() {
    let mut r = rng(2);
    for _ in 0..200 {
        let u = sphere_point(&mut r).0;
        let w = sphere_point(&mut r).0;
        let v = (w - u * u.dot(&w)).normalize();
        let c = u.cross(&v);
        let expected = pure([c.x, c.y, c.z]);
        assert!(close(&cross_left(&Q::pure(&u), &Q::pure(&v)), &expected, 1e-12));
        assert!(close(&cross_right(&Q::pure(&u), &Q::pure(&v)), &expected, 1e-12));
    }
}

#[test]
fn complex_structures_of_one_wedge_i() {
    let p = OrientedPlane::new(Q::one(), Q::i()).unwrap();
    let jp = j_plus(&p);
    assert_abs_diff_eq!(jp.matrix, Q::i().left_matrix(), epsilon = 1e-15);
    assert_eq!(jp.chirality, Chirality::Plus);
    assert_eq!(chirality_of(&jp.matrix), Chirality::Plus);
    let jm = j_minus(&p);
    assert_abs_diff_eq!(jm.matrix, -(-Q::i()).right_matrix(), epsilon = 1e-15);
    assert_eq!(chirality_of(&jm.matrix), Chirality::Minus);
    assert_eq!(rho(&p, Chirality::Plus).0, Vector3::x());
    assert_eq!(rho(&p, Chirality::Minus).0, -Vector3::x());
    let (sp, sm) = gr2_to_s2s2(&p);
    assert_eq!((sp.0, sm.0), (Vector3::x(), -Vector3::x()));
}

#[test]
fn non_orthonormal_input_rejected() {
    assert!(matches!(OrientedPlane::new(Q::one(), Q::new(0.1, 1.0, 0.0, 0.0)), Err(foursym::Error::NotOrthonormal(_))));
    assert!(matches!(OrientedPlane::new(Q::one() * 1.01, Q::i()), Err(foursym::Error::NotOrthonormal(_))));
    assert!(AlmostComplexStructure4::new(Matrix4::<f64>::identity()).is_err());
}

#[test]
fn chi_examples() {
    assert_abs_diff_eq!(chi(&Q::one(), &Q::one()), Matrix4::identity(), epsilon = 0.0);
    let mut r = rng(3);
    for _ in 0..100 {
        let (a, b) = (unit_quat(&mut r), unit_quat(&mut r));
        let g = chi(&a, &b);
        assert_abs_diff_eq!(g.determinant(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.transpose() * g, Matrix4::identity(), epsilon = 1e-12);
        assert_abs_diff_eq!(chi(&-a, &-b), g, epsilon = 1e-15);
        let x = gaussian_quat(&mut r);
        let want = hamilton(hamilton(arr(&a), arr(&x)), conj_arr(arr(&b)));
        let got = g * x.to_vec();
        for c in 0..4 {
            assert_abs_diff_eq!(got[c], want[c], epsilon = 1e-12);
        }
    }
}

#[test]
fn hopf_examples() {
    let mut r = rng(4);
    for _ in 0..100 {
        let e = sphere_point(&mut r);
        assert!(hopf(&Q::one(), &e).dist(&e) < 1e-15);
        let th = 3.0 * gaussian_quat(&mut r).w;
        let fibre = Q::one() * th.cos() + e.quat() * th.sin();
        assert!(hopf(&fibre, &e).dist(&e) < 1e-14);
        let a = unit_quat(&mut r);
        assert_abs_diff_eq!(hopf(&a, &e).0.norm(), 1.0, epsilon = 1e-14);
        // Right multiplication by the fibre circle leaves the projection unchanged.
        assert!(hopf(&(a * fibre), &e).dist(&hopf(&a, &e)) < 1e-14);
    }
}

#[test]
fn gr2_round_trip_on_ten_thousand_planes() {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let p = plane(&mut r);
        let (sp, sm) = gr2_to_s2s2(&p);
        let back = s2s2_to_gr2(&sp, &sm);
        worst = worst.max((back.projector() - p.projector()).abs().max());
        assert!(back.equivalent(&p, 1e-10));
    }
    assert!(worst < 1e-12, "worst projector error {worst:e}");
}

#[test]
fn s2s2_is_surjective_on_random_pairs() {
    let mut r = rng(6);
    for _ in 0..1000 {
        let (sp, sm) = (sphere_point(&mut r), sphere_point(&mut r));
        let p = s2s2_to_gr2(&sp, &sm);
        let (a, b) = gr2_to_s2s2(&p);
        assert!(a.dist(&sp) < 1e-12 && b.dist(&sm) < 1e-12);
    }
    // Antipodal targets go through the fallback rotation.
    let (sp, sm) = (SpherePoint(-Vector3::<f64>::x()), SpherePoint(Vector3::<f64>::x()));
    let (a, b) = gr2_to_s2s2(&s2s2_to_gr2(&sp, &sm));
    assert!(a.dist(&sp) < 1e-12 && b.dist(&sm) < 1e-12);
}

#[test]
fn omega_is_skew_and_matches_structure() {
    let mut r = rng(7);
    for eps in [Chirality::Plus, Chirality::Minus] {
        for i in 1..=3 {
            let (x, y) = (gaussian_quat(&mut r), gaussian_quat(&mut r));
            assert_abs_diff_eq!(omega(eps, i, &x, &y), -omega(eps, i, &y, &x), epsilon = 1e-12);
            assert_abs_diff_eq!(omega(eps, i, &x, &x), 0.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn single_precision_api() {
    let p = OrientedPlane::<f32>::new(Quaternion::one(), Quaternion::j()).unwrap();
    let s = rho(&p, Chirality::Plus);
    assert!((s.0 - Vector3::new(0.0f32, 1.0, 0.0)).norm() < 1e-6);
    assert!(((j_plus(&p).matrix * j_plus(&p).matrix) + Matrix4::identity()).abs().max() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn conjugation_is_an_anti_automorphism(a in quat_strategy(), b in quat_strategy()) {
        prop_assert!(close(&(a * b).conj(), &(b.conj() * a.conj()), 1e-12));
        prop_assert!((a.norm_sq() - (a * a.conj()).w).abs() < 1e-12);
    }

    #[test]
    fn cross_products_are_antisymmetric_and_imaginary(a in quat_strategy(), b in quat_strategy()) {
        let (l, r) = (cross_left(&a, &b), cross_right(&a, &b));
        prop_assert_eq!(l.w, 0.0);
        prop_assert_eq!(r.w, 0.0);
        prop_assert!(close(&l, &-cross_left(&b, &a), 1e-12));
        prop_assert!(close(&r, &-cross_right(&b, &a), 1e-12));
    }

    #[test]
    fn structures_square_to_minus_one_and_match_rho(p in plane_strategy()) {
        let jp = j_plus(&p).matrix;
        let jm = j_minus(&p).matrix;
        prop_assert!((jp * jp + Matrix4::identity()).abs().max() < 1e-12);
        prop_assert!((jm * jm + Matrix4::identity()).abs().max() < 1e-12);
        prop_assert!((jp - rho(&p, Chirality::Plus).quat().left_matrix()).abs().max() < 1e-12);
        prop_assert!((jm + rho(&p, Chirality::Minus).quat().right_matrix()).abs().max() < 1e-12);
        // J maps q to q'.
        prop_assert!((jp * p.q.to_vec() - p.q2.to_vec()).norm() < 1e-12);
        prop_assert!((jm * p.q.to_vec() - p.q2.to_vec()).norm() < 1e-12);
        prop_assert_eq!(chirality_of(&jp), Chirality::Plus);
        prop_assert_eq!(chirality_of(&jm), Chirality::Minus);
    }

    #[test]
    fn rho_is_so2_invariant(p in plane_strategy(), th in -3.2f64..3.2) {
        let q = p.q * th.cos() + p.q2 * th.sin();
        let q2 = p.q * -th.sin() + p.q2 * th.cos();
        let p2 = OrientedPlane::new(q, q2).unwrap();
        for eps in [Chirality::Plus, Chirality::Minus] {
            prop_assert!(rho(&p, eps).dist(&rho(&p2, eps)) < 1e-12);
        }
        prop_assert!(p.equivalent(&p2, 1e-10));
        prop_assert!(!p.equivalent(&p.reversed(), 1e-10));
    }

    #[test]
    fn equivariance_under_so4(p in plane_strategy(), a in unit_quat_strategy(), b in unit_quat_strategy()) {
        let g = chi(&a, &b);
        let gp = p.mapped(&g).unwrap();
        let rp = rho(&gp, Chirality::Plus);
        let rm = rho(&gp, Chirality::Minus);
        prop_assert!(rp.dist(&hopf(&a, &rho(&p, Chirality::Plus))) < 1e-12);
        prop_assert!(rm.dist(&hopf(&b, &rho(&p, Chirality::Minus))) < 1e-12);
        let lhs = j_plus(&gp).matrix;
        let rhs = g * j_plus(&p).matrix * g.transpose();
        prop_assert!((lhs - rhs).abs().max() < 1e-12);
        let lhs = j_minus(&gp).matrix;
        let rhs = g * j_minus(&p).matrix * g.transpose();
        prop_assert!((lhs - rhs).abs().max() < 1e-12);
    }

    #[test]
    fn orthogonal_complement_is_direct(p in plane_strategy()) {
        let o = p.orthogonal();
        prop_assert!((p.projector() + o.projector() - Matrix4::identity()).abs().max() < 1e-12);
        let m = Matrix4::from_columns(&[p.q.to_vec(), p.q2.to_vec(), o.q.to_vec(), o.q2.to_vec()]);
        prop_assert!(m.determinant() > 0.0);
    }

    #[test]
    fn minimal_rotation_maps_source_to_target(s in sphere_strategy(), t in sphere_strategy()) {
        prop_assume!(s.dist(&SpherePoint(-t.0)) > 1e-3);
        let r = minimal_rotation(&s, &t).unwrap();
        prop_assert!(hopf(&r, &s).dist(&t) < 1e-12);
        // Minimal: the rotation axis is orthogonal to both points.
        prop_assert!(r.im().dot(&s.0).abs() < 1e-12 && r.im().dot(&t.0).abs() < 1e-12);
    }
}
