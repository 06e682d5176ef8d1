use aecodes_core::angular::{wigner_d, ComplexMatrix, Su2};
use aecodes_core::codes::{fixture, map_h, random_code, CodeKind};
use aecodes_core::covariance::{
    check_covariance, check_covariance_full, logical_action, orthonormalize, subspace_residual,
    GroupSpec,
};
use aecodes_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};

const PREC: u32 = 200;
const TOL: f64 = 1e-10;

fn bd8() -> GroupSpec {
    GroupSpec::binary_dihedral(4).unwrap()
}

#[test]
fn eleven_half_code_is_bd8_covariant() {
    let c = fixture("J11half").unwrap();
    let rep = check_covariance(&c, &bd8(), TOL, PREC).unwrap();
    assert!(rep.pass, "max residual {}", rep.max_residual);
    assert_eq!(rep.group_order, 32);
    assert_eq!(rep.per_generator.len(), 3);
}

#[test]
fn seven_half_code_is_2i_covariant() {
    let c = fixture("J7half").unwrap();
    let rep = check_covariance(&c, &GroupSpec::binary_icosahedral(), TOL, PREC).unwrap();
    assert!(rep.pass, "max residual {}", rep.max_residual);
    assert_eq!(rep.group_order, 120);
}

#[test]
fn seven_half_code_is_not_bd8_covariant() {
    let c = fixture("J7half").unwrap();
    let rep = check_covariance(&c, &bd8(), TOL, PREC).unwrap();
    assert!(!rep.pass);
    assert!(rep.max_residual > 1e-3);
}

#[test]
fn full_group_agrees_with_generators() {
    let c = fixture("J11half").unwrap();
    let rep = check_covariance_full(&c, &bd8(), TOL, PREC).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.per_generator.len(), 32);
    let c = fixture("J7half").unwrap();
    let rep = check_covariance_full(&c, &GroupSpec::binary_icosahedral(), TOL, 128).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.per_generator.len(), 120);
}

#[test]
fn random_subspaces_fail() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for tj in [7u32, 11] {
        for _ in 0..5 {
            let c = random_code(&mut rng, tj, 2, tj as usize + 1).unwrap();
            for g in [bd8(), GroupSpec::binary_icosahedral(), GroupSpec::binary_octahedral()] {
                let rep = check_covariance(&c, &g, TOL, PREC).unwrap();
                assert!(!rep.pass, "{} unexpectedly {}-covariant", c.label(), g.name());
            }
        }
    }
}

#[test]
fn rejects_pi_kind_and_tiny_tolerance() {
    let c = fixture("J7half").unwrap();
    let pi = map_h(&c.clone().with_kind(CodeKind::Spin)).unwrap();
    assert!(matches!(
        check_covariance(&pi, &bd8(), TOL, PREC),
        Err(Error::WrongKind { .. })
    ));
    assert!(matches!(
        check_covariance(&c, &bd8(), 1e-60, PREC),
        Err(Error::Precondition(_))
    ));
}

fn code_matrix(c: &aecodes_core::codes::CodeBasis, prec: u32) -> ComplexMatrix {
    let dim = c.two_j() as usize + 1;
    let mut m = ComplexMatrix::zeros(dim, c.dimension(), prec);
    for (col, v) in c.basis().iter().enumerate() {
        for (i, e) in v.iter().enumerate() {
            m[(dim - 1 - i, col)] = Complex::with_val(prec, e.to_float(prec));
        }
    }
    orthonormalize(&m).unwrap()
}

#[test]
fn identity_residual_is_rounding_level() {
    for name in ["J7half", "J11half", "J21half", "J27half"] {
        let c = fixture(name).unwrap();
        for prec in [128u32, 200, 400] {
            let v = code_matrix(&c, prec);
            let d = wigner_d(c.two_j(), &Su2::identity(prec), prec);
            let r = subspace_residual(&v, &d).unwrap();
            let bound = Float::with_val(prec, Float::i_exp(1, 10 - prec as i32));
            assert!(r <= bound, "{name} at {prec} bits: {r}");
        }
    }
}

#[test]
fn residuals_are_basis_independent() {
    let prec = PREC;
    let (th, ph) = (Float::with_val(prec, 0.37), Float::with_val(prec, 1.1));
    // unitary mixing [[cos, -e^{-iφ} sin], [e^{iφ} sin, cos]]
    let (s, c) = th.sin_cos(Float::new(prec));
    let e = Complex::with_val(prec, (Float::new(prec), ph)).exp();
    let mix = ComplexMatrix::from_rows(
        vec![
            vec![Complex::with_val(prec, &c), -Complex::with_val(prec, e.conj_ref()) * &s],
            vec![Complex::with_val(prec, &e * &s), Complex::with_val(prec, &c)],
        ],
        prec,
    )
    .unwrap();
    for (name, g) in [("J11half", bd8()), ("J7half", GroupSpec::binary_icosahedral()), ("J7half", bd8())] {
        let c = fixture(name).unwrap();
        let v = code_matrix(&c, prec);
        let rotated = v.mul(&mix).unwrap();
        for (_, u) in g.generators(prec).unwrap() {
            let d = wigner_d(c.two_j(), &u, prec);
            let a = subspace_residual(&v, &d).unwrap();
            let b = subspace_residual(&rotated, &d).unwrap();
            assert!(Float::with_val(prec, a - b).abs() < 1e-20);
        }
    }
}

#[test]
fn precision_doubling_keeps_verdicts() {
    let cases = [
        ("J11half", bd8()),
        ("J7half", GroupSpec::binary_icosahedral()),
        ("J7half", bd8()),
        ("J7half", GroupSpec::binary_octahedral()),
        ("J21half", bd8()),
        ("J27half", GroupSpec::binary_icosahedral()),
    ];
    for (name, g) in cases {
        let c = fixture(name).unwrap();
        let lo = check_covariance(&c, &g, TOL, 200).unwrap();
        let hi = check_covariance(&c, &g, TOL, 400).unwrap();
        assert_eq!(lo.pass, hi.pass, "{name} vs {}", g.name());
    }
}

#[test]
fn logical_action_is_a_representation() {
    let prec = PREC;
    let c = fixture("J11half").unwrap();
    let id = logical_action(&c, &Su2::identity(prec), prec).unwrap();
    assert!(id.sub(&ComplexMatrix::identity(2, prec)).unwrap().max_abs() < 1e-50);

    let gens = bd8().generators(prec).unwrap();
    let mats: Vec<ComplexMatrix> =
        gens.iter().map(|(_, u)| logical_action(&c, u, prec).unwrap()).collect();
    for l in &mats {
        let dev = l.adjoint().mul(l).unwrap().sub(&ComplexMatrix::identity(2, prec)).unwrap();
        assert!(dev.max_abs() < 1e-9);
        let det = Float::with_val(prec, l.determinant_2x2().unwrap().abs_ref());
        assert!(Float::with_val(prec, det - 1u32).abs() < 1e-10);
    }
    for (i, (_, a)) in gens.iter().enumerate() {
        for (j, (_, b)) in gens.iter().enumerate() {
            let ab = logical_action(&c, &a.mul(b), prec).unwrap();
            let prod = mats[i].mul(&mats[j]).unwrap();
            assert!(ab.sub(&prod).unwrap().max_abs() < 1e-8);
        }
    }

    let j7 = fixture("J7half").unwrap();
    let (_, diag) = &gens[2];
    assert!(matches!(logical_action(&j7, diag, prec), Err(Error::NotCovariant(_))));
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]

    #[test]
    fn any_unitary_mixing_leaves_residuals(th in 0.0f64..3.2, ph in 0.0f64..6.3, code in 0usize..2) {
        let prec = PREC;
        let (th, ph) = (Float::with_val(prec, th), Float::with_val(prec, ph));
        let (s, c) = th.sin_cos(Float::new(prec));
        let e = Complex::with_val(prec, (Float::new(prec), ph)).exp();
        let mix = ComplexMatrix::from_rows(
            vec![
                vec![Complex::with_val(prec, &c), -Complex::with_val(prec, e.conj_ref()) * &s],
                vec![Complex::with_val(prec, &e * &s), Complex::with_val(prec, &c)],
            ],
            prec,
        )
        .unwrap();
        let c = fixture(["J7half", "J11half"][code]).unwrap();
        let v = code_matrix(&c, prec);
        let rotated = v.mul(&mix).unwrap();
        for g in [bd8(), GroupSpec::binary_icosahedral()] {
            for (_, u) in g.generators(prec).unwrap() {
                let d = wigner_d(c.two_j(), &u, prec);
                let a = subspace_residual(&v, &d).unwrap();
                let b = subspace_residual(&rotated, &d).unwrap();
                proptest::prop_assert!(Float::with_val(prec, a - b).abs() < 1e-20);
            }
        }
    }
}
