use std::hint::black_box;

use causalrate::graph::names::state;
use causalrate::identify::frontdoor_adjust;
use causalrate::road::{build_scenario, phyd_effect};
use causalrate::{DiscreteScm, RoadRiskScenario, TemplateId};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn dsep(c: &mut Criterion) {
    let mut group = c.benchmark_group("d_separated");
    for depth in [2, 8, 32] {
        let g = TemplateId::Fig6Canonical(depth).build().unwrap();
        let last = state(depth);
        group.bench_with_input(BenchmarkId::from_parameter(depth), &g, |b, g| {
            b.iter(|| g.d_separated(&["Y_h"], &["Y_f"], &[last.as_str(), "D"]).unwrap())
        });
    }
    group.finish();
}

fn exact_joint(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_joint");
    for depth in [1, 3, 5] {
        let scm = DiscreteScm::random_binary(TemplateId::Fig6Canonical(depth).build().unwrap(), 1).unwrap();
        group
            .bench_with_input(BenchmarkId::from_parameter(depth), &scm, |b, scm| b.iter(|| scm.exact_joint().unwrap()));
    }
    group.finish();
}

fn frontdoor(c: &mut Criterion) {
    let mut group = c.benchmark_group("frontdoor_adjust");
    for depth in [1, 3, 5] {
        let scm = DiscreteScm::random_binary(TemplateId::Fig6Canonical(depth).build().unwrap(), 1).unwrap();
        let j = scm.exact_joint().unwrap().marginal(&scm.dag().observed()).unwrap();
        let m: Vec<String> = (0..=depth).map(state).collect();
        group.bench_with_input(BenchmarkId::from_parameter(depth), &j, |b, j| {
            b.iter(|| frontdoor_adjust(j, scm.dag(), "D", "Y_f", &m, &["Y_h".to_string()]).unwrap())
        });
    }
    group.finish();
}

fn road(c: &mut Criterion) {
    let s = RoadRiskScenario::default_scenario();
    c.bench_function("phyd_effect/default", |b| b.iter(|| phyd_effect(black_box(&s)).unwrap()));
    let scm = build_scenario(&s).unwrap();
    c.bench_function("sample/default/10000", |b| b.iter(|| scm.sample(10_000, black_box(7))));
}

criterion_group!(benches, dsep, exact_joint, frontdoor, road);
criterion_main!(benches);
