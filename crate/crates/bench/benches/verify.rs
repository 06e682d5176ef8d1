use std::hint::black_box;

use aecodes_core::angular::{clebsch_gordan, CgIndex};
use aecodes_core::codes::{construct_ae_gmde, fixture, GmdeParams};
use aecodes_core::covariance::{check_covariance, GroupSpec};
use aecodes_core::errorset::build_ae_error_set;
use aecodes_core::verify::{check_conditions, check_kl_correct};
use criterion::{criterion_group, criterion_main, Criterion};

fn clebsch_gordan_bench(c: &mut Criterion) {
    // <21/2 3/2; 2 -1 | 25/2 1/2>
    let idx = CgIndex::from_twice(21, 3, 4, -2, 25, 1);
    c.bench_function("clebsch_gordan 2J=21 x 2", |b| b.iter(|| clebsch_gordan(black_box(&idx))));
}

fn kl_bench(c: &mut Criterion) {
    let j21 = fixture("J21half").unwrap();
    let set = build_ae_error_set(21, 2).unwrap();
    c.bench_function("kl_correct J=21/2 t=2", |b| b.iter(|| check_kl_correct(black_box(&j21), &set).unwrap()));

    let big = construct_ae_gmde(&GmdeParams::new(4, 3, 4, -1).unwrap()).unwrap();
    let set = build_ae_error_set(big.two_j(), 2).unwrap();
    c.bench_function("kl_correct gmde(4,3,4,-1) t=2", |b| {
        b.iter(|| check_kl_correct(black_box(&big), &set).unwrap())
    });
    c.bench_function("build_ae_error_set 2J=53 t=2", |b| {
        b.iter(|| build_ae_error_set(black_box(53), 2).unwrap())
    });
}

fn conditions_bench(c: &mut Criterion) {
    let j27 = fixture("J27half").unwrap();
    c.bench_function("conditions J=27/2 t=1 t'=2", |b| {
        b.iter(|| check_conditions(black_box(&j27), 1, 2).unwrap())
    });
}

fn covariance_bench(c: &mut Criterion) {
    let j11 = fixture("J11half").unwrap();
    let g = GroupSpec::binary_dihedral(4).unwrap();
    c.bench_function("covariance J=11/2 BD b=4 200 bits", |b| {
        b.iter(|| check_covariance(black_box(&j11), &g, 1e-10, 200).unwrap())
    });
}

criterion_group!(benches, clebsch_gordan_bench, kl_bench, conditions_bench, covariance_bench);
criterion_main!(benches);
