//! One worker thread versus the default rayon pool on the table-shaped
//! workloads. Build with `--no-default-features` for the plain sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mfw::corpus::{generate, FamilySpec};
use mfw::verify::{verify_theorem, Convention};
use mfw::{hom_table, par, Field};

fn pools() -> [(&'static str, Option<usize>); 2] {
    [("one-thread", Some(1)), ("default-pool", None)]
}

fn bench_hom_table(c: &mut Criterion) {
    let (_, objs) = generate(FamilySpec::new(5, 2, 3).unwrap(), Field::Rationals).unwrap();
    let (e, t) = (&objs[1], &objs[3]);
    let mut group = c.benchmark_group("hom_table A5");
    for (name, jobs) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_jobs(jobs, || hom_table(e, t, -8..=8, -3..=3).unwrap()))
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let (sec, objs) = generate(FamilySpec::new(3, 2, 2).unwrap(), Field::Rationals).unwrap();
    let (e, t) = (&objs[0], &objs[2]);
    let h = sec.h();
    let mut group = c.benchmark_group("verify_theorem A3");
    group.sample_size(10);
    for (name, jobs) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::with_jobs(jobs, || {
                    verify_theorem(e, t, &sec, -3..=3, -(h + 2)..=(h + 2), Convention::Auto)
                        .unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_hom_table, bench_verify);
criterion_main!(benches);
