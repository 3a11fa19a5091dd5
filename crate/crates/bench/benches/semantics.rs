// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use eampcf::eam::run;
use eampcf::eam_typing::infer_machine;
use eampcf::harness::{difftest, GenConfig};
use eampcf::{eval_epcf, eval_pcf, Fuel, Subst};
use eampcf_bench::{add_program, compiled, mul_program};

fn evaluators(c: &mut Criterion) {
    let mut g = c.benchmark_group("add");
    for n in [10u64, 100, 400] {
        let p = add_program(n, n);
        g.bench_with_input(BenchmarkId::new("pcf", n), &p, |b, p| {
            b.iter(|| eval_pcf(black_box(p), &mut Fuel::new(u64::MAX)))
        });
        g.bench_with_input(BenchmarkId::new("epcf", n), &p, |b, p| {
            b.iter(|| eval_epcf(&Subst::empty(), black_box(p), &mut Fuel::new(u64::MAX)))
        });
        g.bench_with_input(BenchmarkId::new("eam", n), &p, |b, p| {
            b.iter(|| {
                let (mut t, a) = compiled(p);
                let m = t.lookup(a);
                run(&mut t, &m, u64::MAX)
            })
        });
    }
    g.finish();
    let p = mul_program(4, 4);
    c.bench_function("mul/eam/4", |b| {
        b.iter(|| {
            let (mut t, a) = compiled(&p);
            let m = t.lookup(a);
            run(&mut t, &m, u64::MAX)
        })
    });
}

fn typing(c: &mut Criterion) {
    let (t, a) = compiled(&mul_program(2, 2));
    c.bench_function("infer_machine/mul", |b| b.iter(|| infer_machine(&t, black_box(a))));
}

fn differential(c: &mut Criterion) {
    let mut g = c.benchmark_group("difftest");
    g.sample_size(10);
    g.bench_function("20 cases", |b| b.iter(|| difftest(&GenConfig::default(), 20, 10_000)));
    g.finish();
}

criterion_group!(benches, evaluators, typing, differential);
criterion_main!(benches);
