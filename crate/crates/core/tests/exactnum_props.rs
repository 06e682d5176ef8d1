use aecodes_core::exactnum::{
    normalize, sqrt_mul, squarefree_decompose, RadicalSum, Rational, Sign, SqrtRational,
};
use proptest::prelude::*;
use rug::Float;

fn rational() -> impl Strategy<Value = Rational> {
    (-999_999i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| normalize(n, d).unwrap())
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| normalize(n, d).unwrap())
}

fn sqrt_rational() -> impl Strategy<Value = SqrtRational> {
    (prop_oneof![Just(Sign::Negative), Just(Sign::Zero), Just(Sign::Positive)], positive_rational())
        .prop_map(|(s, r)| {
            if s == Sign::Zero {
                SqrtRational::zero()
            } else {
                SqrtRational::new(s, r).unwrap()
            }
        })
}

/// Up to 20 signed roots. Mode 1 pads the list with disguised negatives
/// `-√(r·s²)·(1/s)` of a prefix, mode 2 of every term, so cancellation only
/// shows up after kernel grouping.
fn radical_terms() -> impl Strategy<Value = Vec<(SqrtRational, Rational)>> {
    (
        prop::collection::vec((sqrt_rational(), 1u32..6), 1..=10),
        0u8..3,
        any::<prop::sample::Index>(),
    )
        .prop_map(|(terms, mode, idx)| {
            let mut out: Vec<(SqrtRational, Rational)> = terms
                .iter()
                .map(|(s, _)| (s.clone(), Rational::from(1)))
                .collect();
            let cancelled = match mode {
                0 => 0,
                1 => idx.index(terms.len()),
                _ => terms.len(),
            };
            for (s, k) in terms.iter().take(cancelled) {
                let k2 = Rational::from(k * k);
                let hidden = (-s.clone()).scale_radicand(&k2).unwrap();
                out.push((hidden, Rational::from((1, *k))));
            }
            out
        })
}

fn build(terms: &[(SqrtRational, Rational)]) -> RadicalSum {
    let mut acc = RadicalSum::zero();
    for (s, c) in terms {
        acc.add_surd(&s.to_surd().scale(c));
    }
    acc
}

proptest! {
    #[test]
    fn zero_test_matches_high_precision_float(terms in radical_terms()) {
        let sum = build(&terms);
        // independent evaluation: sum the raw terms without grouping
        let mut reference = Float::with_val(256, 0);
        for (s, c) in &terms {
            reference += s.to_float(256) * Float::with_val(256, c);
        }
        let tiny = Float::with_val(256, Float::i_exp(1, -200));
        prop_assert_eq!(sum.is_zero(), reference.clone().abs() < tiny);
        let grouped = sum.to_float(256);
        prop_assert_eq!(sum.is_zero(), grouped.abs() < tiny);
    }

    #[test]
    fn decompose_round_trips(r in positive_rational()) {
        let (scale, kernel) = squarefree_decompose(&r).unwrap();
        prop_assert_eq!(Rational::from(&scale * &scale) * kernel.clone(), r);
        prop_assert!(scale > 0);
        let (_, again) = squarefree_decompose(&Rational::from(kernel.clone())).unwrap();
        prop_assert_eq!(again, kernel);
    }

    #[test]
    fn sqrt_mul_commutative_associative(
        a in sqrt_rational(),
        b in sqrt_rational(),
        c in sqrt_rational(),
    ) {
        prop_assert_eq!(sqrt_mul(&a, &b), sqrt_mul(&b, &a));
        prop_assert_eq!(
            sqrt_mul(&sqrt_mul(&a, &b), &c),
            sqrt_mul(&a, &sqrt_mul(&b, &c))
        );
    }

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        let add = |x: &Rational, y: &Rational| Rational::from(x + y);
        let mul = |x: &Rational, y: &Rational| Rational::from(x * y);
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        prop_assert_eq!(add(&a, &Rational::new()), a.clone());
        prop_assert_eq!(mul(&a, &Rational::from(1)), a.clone());
        prop_assert_eq!(add(&a, &Rational::from(-&a)), Rational::new());
        if a != 0 {
            prop_assert_eq!(mul(&a, &Rational::from(a.recip_ref())), Rational::from(1));
        }
        // canonical form
        prop_assert!(*a.denom() >= 1);
        prop_assert_eq!(a.numer().clone().gcd(a.denom()), 1);
    }
}
