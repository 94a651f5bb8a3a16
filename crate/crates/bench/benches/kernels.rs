use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use perminv_core::attacks::{build_table, invert, sweep_permutation, OracleCounter};
use perminv_core::querysim::{grover_invert, random_program, run_bit_fixing};
use perminv_core::regrep::spectrum;
use perminv_core::young::identity_sweep;
use perminv_core::RegularRep;

fn young(c: &mut Criterion) {
    c.bench_function("identity_sweep/20", |b| b.iter(|| identity_sweep(black_box(20), 6)));
}

fn regular_rep(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectrum");
    g.sample_size(10);
    for n in [4, 5] {
        let rep = RegularRep::new(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &rep, |b, rep| b.iter(|| spectrum(rep).unwrap()));
    }
    g.finish();
}

fn game(c: &mut Criterion) {
    let mut g = c.benchmark_group("bit_fixing");
    g.sample_size(10);
    for n in [4, 5] {
        let prog = random_program(n, 1, 1, 2, 3);
        let layout = prog.layout().unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| run_bit_fixing(&prog, &layout, None).unwrap())
        });
    }
    g.finish();
    c.bench_function("grover/1024/10", |b| b.iter(|| grover_invert(black_box(1024), 10, 7).unwrap()));
}

fn hellman(c: &mut Criterion) {
    let n = 1 << 16;
    let pi = sweep_permutation(n, 1, 0);
    let mut g = c.benchmark_group("hellman");
    for t in [64usize, 256] {
        g.bench_with_input(BenchmarkId::new("build", t), &t, |b, &t| b.iter(|| build_table(&pi, t).unwrap()));
        let table = build_table(&pi, t).unwrap();
        g.bench_with_input(BenchmarkId::new("invert", t), &t, |b, _| {
            let mut oracle = OracleCounter::new(&pi);
            let mut y = 0;
            b.iter(|| {
                y = (y + 7919) % n;
                invert(&table, &mut oracle, y).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, young, regular_rep, game, hellman);
criterion_main!(benches);
