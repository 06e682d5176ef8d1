use aecodes_core::combinatorics::{
    binom, binom_int, sweep_binomial_ratio_exchange, sweep_bounded_convolution,
    sweep_double_binomial_convolution, sweep_ratio_expansion, SweepReport,
};
use proptest::prelude::*;
use rug::{Integer, Rational};

fn assert_clean(report: SweepReport) {
    assert!(
        report.pass(),
        "{} failed on {} of {} cases, first: {:?}",
        report.identity,
        report.failures.len(),
        report.checked,
        report.failures.first()
    );
}

#[test]
fn ratio_exchange_exhaustive() {
    assert_clean(sweep_binomial_ratio_exchange(20));
}

#[test]
fn double_convolution_exhaustive() {
    assert_clean(sweep_double_binomial_convolution(6));
}

#[test]
fn bounded_convolution_exhaustive() {
    assert_clean(sweep_bounded_convolution(8, -2, 10));
}

#[test]
fn ratio_expansion_exhaustive() {
    assert_clean(sweep_ratio_expansion(8, 2));
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

proptest! {
    #[test]
    fn binom_matches_factorials(n in 0u32..40, k in 0u32..40) {
        prop_assume!(k <= n);
        let expect = factorial(n) / (factorial(k) * factorial(n - k));
        prop_assert_eq!(binom_int(i64::from(n), i64::from(k)), expect.clone());
        prop_assert_eq!(binom(&Rational::from(n), i64::from(k)), Rational::from(expect));
    }

    #[test]
    fn pascal_recurrence(num in -200i64..200, den in 1i64..30, k in -3i64..12) {
        let x = Rational::from((num, den));
        let xm1 = Rational::from(&x - 1);
        prop_assert_eq!(binom(&x, k), binom(&xm1, k - 1) + binom(&xm1, k));
    }
}
