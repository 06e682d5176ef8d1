use aecodes_core::angular::{
    cg_binomial_form, check_specialized_indices, specialized_prefactor, specialized_window,
    sweep_orthogonality, sweep_specialized_agreement, wigner_d, ComplexMatrix, Su2,
};
use aecodes_core::combinatorics::binom_int;
use aecodes_core::exactnum::{RadicalSum, Rational, SqrtRational};
use proptest::prelude::*;
use rug::Float;

const PREC: u32 = 200;

#[test]
fn specialized_form_matches_general_formula() {
    let report = sweep_specialized_agreement(12, 2);
    assert!(report.pass(), "{:?}", &report.failures[..report.failures.len().min(5)]);
}

#[test]
fn orthogonality_sums_exact() {
    let report = sweep_orthogonality(8);
    assert!(report.pass(), "{:?}", &report.failures[..report.failures.len().min(5)]);
}

/// Multiplying the binomial form by `√(binom(n, j+a)·binom(n̄+q, j+q))` and
/// expanding `binom(n̄+t-r, j+k)` by Vandermonde gives a double sum with a
/// j-independent coefficient `h(k, k')`.
#[test]
fn binomial_form_reconstructs_from_vandermonde_expansion() {
    let mut checked = 0;
    for t in 0..=2i64 {
        for n in 2 * t..=10 {
            for r in 0..=t {
                for a in (t - r)..=(t + r) {
                    for q in (t - r)..=(t + r) {
                        check_specialized_indices(n, t, r, a, q).unwrap();
                        let nbar = n - 2 * t + q;
                        let pre = SqrtRational::sqrt_of(specialized_prefactor(n, t, r, a, q))
                            .unwrap()
                            .to_surd();
                        for j in (-a.min(q))..=(n - a.max(2 * t - q)) {
                            assert!(specialized_window(n, t, a, q, j));
                            let c = cg_binomial_form(n, t, r, a, q, j).unwrap();
                            let norm = Rational::from(
                                binom_int(n, j + a) * binom_int(nbar + q, j + q),
                            );
                            let lhs_root = SqrtRational::sqrt_of(norm).unwrap();
                            let lhs = RadicalSum::from_sqrt(&(&c * &lhs_root));

                            let mut h_sum = rug::Integer::new();
                            for k in (t - r)..=q {
                                let h = binom_int(q - (t - r), k - (t - r))
                                    * binom_int(t + r - q, a - k);
                                let h = if k % 2 == 0 { h } else { -h };
                                for kp in 0..=(t - r) {
                                    h_sum += &h * binom_int(t - r, kp)
                                        * binom_int(nbar, j + k - kp);
                                }
                            }
                            let rhs = RadicalSum::from_surd(&pre.scale(&Rational::from(h_sum)));
                            assert_eq!(lhs, rhs, "n={n} t={t} r={r} a={a} q={q} j={j}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
}

fn su2_strategy() -> impl Strategy<Value = Su2> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("nonzero quaternion", |q| q.iter().map(|v| v * v).sum::<f64>() > 1e-3)
        .prop_map(|q| Su2::from_quaternion(q.map(|v| Float::with_val(PREC, v)), PREC).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wigner_is_a_homomorphism(u1 in su2_strategy(), u2 in su2_strategy(), two_j in 0u32..=15) {
        let d12 = wigner_d(two_j, &u1.mul(&u2), PREC);
        let prod = wigner_d(two_j, &u1, PREC).mul(&wigner_d(two_j, &u2, PREC)).unwrap();
        prop_assert!(d12.sub(&prod).unwrap().max_abs() < 1e-25);
    }

    #[test]
    fn wigner_is_unitary(u in su2_strategy(), two_j in 0u32..=15) {
        let d = wigner_d(two_j, &u, PREC);
        let dim = two_j as usize + 1;
        let dev = d.adjoint().mul(&d).unwrap().sub(&ComplexMatrix::identity(dim, PREC)).unwrap();
        let bound = Float::with_val(PREC, Float::i_exp(1, 10 - PREC as i32)) * (dim as u32);
        prop_assert!(dev.max_abs() <= bound);
    }
}
