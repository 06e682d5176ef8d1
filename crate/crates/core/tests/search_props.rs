use aecodes_core::errorset::{build_ae_error_set, ErrorSetCache};
use aecodes_core::search::{enumerate_and_search, enumerate_with, moment_residuals, solve_staggered, SearchSpec};
use aecodes_core::verify::{check_kl_correct, cross_validate_cached};
use aecodes_core::{Error, Rational};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

#[test]
fn nine_qubit_witness_is_enumerated() {
    let all = enumerate_and_search(9, 1, 2, usize::MAX).unwrap();
    let hit = all
        .iter()
        .find(|r| r.spec.support0 == [0, 6] && r.spec.support1 == [3, 9])
        .expect("witness supports are feasible");
    assert_eq!(hit.x.values().cloned().collect::<Vec<_>>(), vec![q(1, 4), q(3, 4)]);
    assert_eq!(hit.y.values().cloned().collect::<Vec<_>>(), vec![q(3, 4), q(1, 4)]);
    assert!(!enumerate_and_search(9, 1, 2, 1).unwrap().is_empty());
}

#[test]
fn witness_code_corrects_one_transition() {
    let r = solve_staggered(&SearchSpec::new(9, 1, vec![0, 6], vec![3, 9])).unwrap();
    let code = r.code.unwrap();
    let set = build_ae_error_set(9, 1).unwrap();
    assert!(check_kl_correct(&code, &set).unwrap().pass);
}

#[test]
fn tiny_spin_has_nothing() {
    assert!(enumerate_and_search(3, 1, 2, usize::MAX).unwrap().is_empty());
    assert!(matches!(enumerate_and_search(4, 2, 2, 5), Err(Error::Precondition(_))));
}

#[test]
fn enumeration_is_restart_stable() {
    let a = enumerate_and_search(13, 1, 3, usize::MAX).unwrap();
    let b = enumerate_and_search(13, 1, 3, usize::MAX).unwrap();
    assert!(!a.is_empty());
    let key = |v: &[aecodes_core::search::SearchResult]| {
        v.iter()
            .map(|r| (r.spec.support0.clone(), r.spec.support1.clone(), r.x.clone(), r.y.clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(key(&a), key(&b));
    // a limited run is a prefix of the full run
    let c = enumerate_and_search(13, 1, 3, 2).unwrap();
    assert_eq!(key(&c), key(&a)[..c.len()].to_vec());
}

#[test]
fn emitted_codes_cross_validate() {
    let mut cache = ErrorSetCache::default();
    for (n, t, size) in [(9, 1, 2), (11, 1, 3), (13, 1, 3), (17, 2, 2), (21, 2, 3)] {
        for r in enumerate_and_search(n, t, size, usize::MAX).unwrap() {
            assert!(moment_residuals(&r.x, &r.y, t).iter().all(|v| *v == 0));
            let code = r.code.as_ref().unwrap();
            let cv = cross_validate_cached(code, t, &mut cache).unwrap();
            assert!(cv.consistent, "{}", code.label());
            assert!(cv.kl_correct, "{}", code.label());
        }
    }
}

#[test]
fn counter_symmetric_filter() {
    for r in enumerate_with(15, 1, 3, usize::MAX, true).unwrap() {
        assert!(r.spec.is_counter_symmetric());
    }
}

fn staggered_specs() -> impl Strategy<Value = SearchSpec> {
    (0u32..3, proptest::collection::vec(0u32..4, 2..6), any::<u64>()).prop_map(|(t, gaps, bits)| {
        let gap = 2 * t + 1;
        let mut pos = Vec::new();
        let mut cur = gaps[0];
        for g in &gaps {
            pos.push(cur);
            cur += gap + g;
        }
        let n = *pos.last().unwrap() + (bits % 3) as u32;
        let (mut s0, mut s1) = (Vec::new(), Vec::new());
        for (i, p) in pos.iter().enumerate() {
            if i == 0 || (i > 1 && (bits >> i) & 1 == 1) {
                s0.push(*p);
            } else {
                s1.push(*p);
            }
        }
        SearchSpec::new(n, t, s0, s1)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solutions_satisfy_moments_and_correct(spec in staggered_specs()) {
        let r = solve_staggered(&spec).unwrap();
        if r.feasible {
            prop_assert!(r.x.values().chain(r.y.values()).all(|v| *v >= 0));
            let sx = r.x.values().fold(Rational::new(), |a, v| a + v);
            let sy = r.y.values().fold(Rational::new(), |a, v| a + v);
            prop_assert!(sx == 1 && sy == 1);
            prop_assert!(moment_residuals(&r.x, &r.y, spec.t).iter().all(|v| *v == 0));
            let set = build_ae_error_set(spec.n, spec.t).unwrap();
            prop_assert!(check_kl_correct(r.code.as_ref().unwrap(), &set).unwrap().pass);
        } else {
            prop_assert!(r.code.is_none());
        }
    }
}
