mod common;

use common::*;
use foursym::fourbundle::*;
use foursym::io::SpecJson;
use foursym::linalg::standard_j;
use foursym::quatgeom::Chirality;
use foursym::{Cx, Error, Spec64};
use nalgebra::{DMatrix, DVector, Vector3};
use proptest::prelude::*;

fn diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_column_slice(v))
}

fn all_specs() -> Vec<(&'static str, Spec64)> {
    vec![
        ("sphere1", sphere_spec(1, None).unwrap()),
        ("sphere2", sphere_spec(2, None).unwrap()),
        ("sphere3", sphere_spec(3, None).unwrap()),
        ("real21", real_grassmannian_spec(2, 1, &standard_j(1), &diag(&[1.0])).unwrap()),
        ("real22", real_grassmannian_spec(2, 2, &standard_j(1), &diag(&[1.0, -1.0])).unwrap()),
        ("complex1100", complex_grassmannian_spec(1, 1, 0, 0).unwrap()),
        ("complex2111", complex_grassmannian_spec(2, 1, 1, 1).unwrap()),
        ("affine_empty", affine_spec(&[], Chirality::Plus, &Vector3::x()).unwrap()),
        ("affine_1", affine_spec(&[1], Chirality::Minus, &Vector3::z()).unwrap()),
        ("affine_12", affine_spec(&[1, 2], Chirality::Plus, &Vector3::z()).unwrap()),
    ]
}

/// Projector onto `Ad g (m)` along `Ad g (h)`.
fn moved_m_projector(spec: &Spec64, g: &DMatrix<f64>) -> DMatrix<f64> {
    let (ad, _) = spec.algebra.adjoint(g).unwrap();
    let inv = ad.clone().try_inverse().unwrap();
    &ad * spec.grading.proj_m() * inv
}

#[test]
fn embedding_of_identity_is_tau_on_m() {
    for (name, spec) in all_specs() {
        let n = spec.algebra.n;
        let p = spec.embed(&DMatrix::identity(n, n)).unwrap();
        assert!((&p.j - spec.tau_on_m()).amax() < 1e-12, "{name}");
        assert!((spec.pair.restrict_m(&p.j) - &spec.j0_m).amax() < 1e-10, "{name}");
    }
}

#[test]
fn embedding_is_a_complex_structure_on_moved_m() {
    for (name, spec) in all_specs() {
        let mut s = spec.sampler(21);
        for _ in 0..10 {
            let g = s.group();
            let j = spec.embed(&g).unwrap().j;
            let pm = moved_m_projector(&spec, &g);
            let scale = 1.0 + j.amax();
            assert!((&j * &j + &pm).amax() < 1e-9 * scale * scale, "{name}: J^2 != -Id on Ad g(m)");
            assert!((&j * &pm - &j).amax() < 1e-9 * scale, "{name}: J does not vanish on Ad g(h)");
        }
    }
}

#[test]
fn embedding_is_constant_on_g0_cosets() {
    for (name, spec) in all_specs() {
        let mut s = spec.sampler(22);
        for _ in 0..10 {
            let g = s.group();
            let g0 = s.g0();
            let a = spec.embed(&g).unwrap();
            let b = spec.embed(&(&g * g0)).unwrap();
            assert!(a.dist(&b) < 1e-9 * (1.0 + a.j.norm()), "{name}");
        }
    }
}

#[test]
fn h_samples_stabilize_m() {
    for (name, spec) in all_specs() {
        let mut s = spec.sampler(23);
        let pm = spec.grading.proj_m();
        for _ in 0..10 {
            let h = s.h();
            let (ad, _) = spec.algebra.adjoint(&h).unwrap();
            let moved = &ad * &spec.grading.m;
            assert!((&pm * &moved - &moved).amax() < 1e-8, "{name}");
        }
    }
}

#[test]
fn embedding_separates_distinct_cosets() {
    let spec = sphere_spec::<f64>(1, None).unwrap();
    let mut s = spec.sampler(24);
    let pts: Vec<DMatrix<f64>> = (0..1000).map(|_| spec.embed(&s.group()).unwrap().j).collect();
    let mut min = f64::INFINITY;
    for a in 0..pts.len() {
        for b in (a + 1)..pts.len() {
            min = min.min((&pts[a] - &pts[b]).norm());
        }
    }
    assert!(min > 1e-6, "closest pair at {min:e}");
    // Two H-samples differing by more than G0 land on distinct fibre points.
    let spec = sphere_spec::<f64>(2, None).unwrap();
    let mut s = spec.sampler(25);
    let (h1, h2) = (s.h(), s.h());
    assert!(spec.embed(&h1).unwrap().dist(&spec.embed(&h2).unwrap()) > 1e-3);
}

#[test]
fn fibre_orbit_dimensions() {
    let want = [
        ("sphere1", 0),
        ("sphere2", 2),
        ("sphere3", 6),
        ("real21", 0),
        ("real22", 1),
        ("complex1100", 0),
        ("complex2111", 2),
    ];
    let specs = all_specs();
    for (name, dim) in want {
        let spec = &specs.iter().find(|(n, _)| *n == name).unwrap().1;
        let est = fibre_orbit(spec, 200, 1e-3, 26);
        assert_eq!(est.expected, spec.pair.dim_h() - spec.g0.ncols());
        assert_eq!((est.dim, est.expected), (dim, dim), "{name}: {:?}", est.singular_values);
    }
    for (name, spec) in &specs {
        let est = fibre_orbit(spec, 200, 1e-3, 27);
        assert_eq!(est.dim, est.expected, "{name}");
    }
}

#[test]
fn sphere_fibre_stays_in_one_chirality() {
    let spec = sphere_spec::<f64>(2, None).unwrap();
    let c0 = complex_structure_chirality(&spec.j0_m);
    let mut r = rng(28);
    for _ in 0..50 {
        let c = DVector::from_fn(spec.pair.dim_h(), |_, _| 2.0 * gaussian_quat(&mut r).w);
        let e = spec.ad_m_exp(&c);
        let j = &e * &spec.j0_m * e.transpose();
        assert_eq!(complex_structure_chirality(&j), c0);
    }
}

#[test]
fn sphere_specs_are_curvature_invariant() {
    for n in 1..=3 {
        let spec = sphere_spec::<f64>(n, None).unwrap();
        assert!(foursym::liecore::curvature_invariance_check(&spec.pair.curvature, &spec.j0_m).0);
    }
    assert!(matches!(sphere_spec::<f64>(1, Some(diag(&[1.0, 1.0]))), Err(Error::NotAntiInvolution(_))));
    assert!(sphere_spec::<f64>(0, None).is_err());
}

#[test]
fn real_grassmannian_centralizers() {
    let s21 = real_grassmannian_spec::<f64>(2, 1, &standard_j(1), &diag(&[1.0])).unwrap();
    assert_eq!(s21.g0.ncols(), 1);
    let s22 = real_grassmannian_spec::<f64>(2, 2, &standard_j(1), &diag(&[1.0, -1.0])).unwrap();
    assert_eq!(s22.g0.ncols(), 1);
    assert!(s22.notes.iter().any(|n| n.contains("quotient not modeled")));
    assert!(matches!(real_grassmannian_spec::<f64>(1, 1, &diag(&[1.0]), &diag(&[1.0])), Err(Error::ParityViolation(_))));
    assert!(matches!(real_grassmannian_spec::<f64>(2, 2, &diag(&[1.0, 1.0]), &diag(&[1.0, 1.0])), Err(Error::ParityViolation(_))));
}

#[test]
fn exceptional_real_grassmannian_is_flagged() {
    let flagged = |s: &Spec64| s.notes.iter().any(|n| n.contains("exceptional"));
    let s42 = real_grassmannian_spec::<f64>(4, 2, &standard_j(2), &diag(&[1.0, -1.0])).unwrap();
    assert!(flagged(&s42));
    let s42b = real_grassmannian_spec::<f64>(4, 2, &standard_j(2), &diag(&[1.0, 1.0])).unwrap();
    assert!(!flagged(&s42b));
    let s22 = real_grassmannian_spec::<f64>(2, 2, &standard_j(1), &diag(&[1.0, -1.0])).unwrap();
    assert!(!flagged(&s22));
}

#[test]
fn complex_grassmannian_centralizers() {
    assert_eq!(complex_grassmannian_spec::<f64>(1, 1, 0, 0).unwrap().g0.ncols(), 1);
    assert_eq!(complex_grassmannian_spec::<f64>(2, 2, 1, 1).unwrap().g0.ncols(), 3);
    assert!(matches!(complex_grassmannian_spec::<f64>(1, 1, 2, 0), Err(Error::OutOfRange(_))));
    assert!(matches!(complex_grassmannian_spec::<f64>(1, 1, 0, 2), Err(Error::OutOfRange(_))));
}

#[test]
fn affine_spec_dimensions() {
    let dims: Vec<usize> = [vec![], vec![1], vec![1, 2]]
        .iter()
        .map(|i: &Vec<usize>| affine_spec::<f64>(i, Chirality::Plus, &Vector3::z()).unwrap().algebra.dim())
        .collect();
    assert_eq!(dims, vec![10, 8, 7]);
    assert!(affine_spec::<f64>(&[1], Chirality::Plus, &Vector3::x()).is_err());
    assert!(affine_spec::<f64>(&[1, 2, 3], Chirality::Plus, &Vector3::x()).is_err());
    assert!(affine_spec::<f64>(&[], Chirality::Plus, &Vector3::zeros()).is_err());
}

#[test]
fn opposite_j0_gives_the_same_g0() {
    let mut r = rng(29);
    for n in 1..=3 {
        let j0 = random_j0(n, &mut r);
        let a = sphere_spec(n, Some(j0.clone())).unwrap();
        let b = sphere_spec(n, Some(-j0)).unwrap();
        assert_eq!(a.g0.ncols(), b.g0.ncols());
        let proj = &a.g0 * a.g0.clone().pseudo_inverse(1e-12).unwrap();
        assert!((&b.g0 - &proj * &b.g0).amax() < 1e-9);
    }
}

#[test]
fn complex_classification_counts_and_invariance() {
    let classes = enumerate_complex_classes::<f64>(1, 1, 30).unwrap();
    assert_eq!(classes.len(), 4);
    for (p, q) in [(2, 1), (2, 2), (3, 2)] {
        assert_eq!(enumerate_complex_classes::<f64>(p, q, 31).unwrap().len(), (p + 1) * (q + 1));
    }
    let i = Cx::new(0.0, 1.0);
    let one = Cx::new(1.0, 0.0);
    let j1 = DMatrix::from_diagonal(&DVector::from_vec(vec![i, -i, i]));
    let j2 = DMatrix::from_diagonal(&DVector::from_vec(vec![one, -one]));
    let base = classify_complex_component(&j1, &j2).unwrap();
    assert_eq!(base, ComplexClass { l: 2, r: 1 });
    // Conjugation by a unitary diagonal phase and a permutation keeps the class.
    let u = DMatrix::from_fn(3, 3, |a, b| if (a + 1) % 3 == b { Cx::from_polar(1.0, a as f64) } else { Cx::new(0.0, 0.0) });
    let moved = &u * &j1 * u.adjoint();
    assert_eq!(classify_complex_component(&moved, &j2).unwrap(), base);
    assert!(matches!(classify_complex_component(&j2, &j2), Err(Error::NotInSigmaAut(_))));
}

#[test]
fn real_classification_counts() {
    let classes = enumerate_real_classes::<f64>(2, 2, 32).unwrap();
    assert_eq!(classes.len(), 12);
    assert_eq!(enumerate_real_classes::<f64>(2, 4, 33).unwrap().len(), 2 * (2 + 4 + 2));
    let c = classify_real_component(&standard_j::<f64>(1), &diag(&[1.0, -1.0])).unwrap();
    assert_eq!((c.sign, c.r), (Chirality::Plus, 1));
    let c = classify_real_component(&diag(&[-1.0, -1.0]), &standard_j::<f64>(1)).unwrap();
    assert_eq!((c.sign, c.r), (Chirality::Minus, 0));
    assert!(classify_real_component(&diag(&[1.0, 1.0]), &diag(&[1.0, 1.0])).is_err());
}

#[test]
fn spec_json_round_trip() {
    for (name, spec) in all_specs() {
        let text = serde_json::to_string(&SpecJson::from_spec(&spec)).unwrap();
        let back: Spec64 = serde_json::from_str::<SpecJson>(&text).unwrap().build().unwrap();
        assert_eq!(back.family, spec.family, "{name}");
        assert_eq!(back.grading.dims(), spec.grading.dims(), "{name}");
        assert!((&back.j0_m - &spec.j0_m).amax() < 1e-12, "{name}");
        assert!((&back.grading.m - &spec.grading.m).amax() < 1e-12, "{name}");
    }
}

#[test]
fn tampered_spec_json_is_rejected() {
    let spec = sphere_spec::<f64>(2, None).unwrap();
    let mut js = SpecJson::from_spec(&spec);
    js.j0_m[0][1] += 0.5;
    assert!(matches!(js.build::<f64>(), Err(Error::Format(_))));
    let mut js = SpecJson::from_spec(&spec);
    js.tau.matrix[0][0] += 0.5;
    assert!(js.build::<f64>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coset_invariance_on_random_spheres(seed in any::<u64>(), n in 1usize..=2) {
        let j0 = random_j0(n, &mut rng(seed));
        let spec = sphere_spec(n, Some(j0)).unwrap();
        let mut s = spec.sampler(seed);
        let g = s.group();
        let k = s.g0();
        let a = spec.embed(&g).unwrap();
        let b = spec.embed(&(&g * k)).unwrap();
        prop_assert!(a.dist(&b) < 1e-9);
    }
}
