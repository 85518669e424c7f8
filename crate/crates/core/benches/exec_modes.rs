//! Sequential against parallel execution on the data-parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use multiproj::arrangement::random_rank_table;
use multiproj::degrees::enumerate_m_with;
use multiproj::instance::random_arrangement;
use multiproj::monomial::initial_ideal_with;
use multiproj::oracle::{count_intersection_points, DEFAULT_POINT_BUDGET};
use multiproj::{Arrangement, Exec, FieldSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn degree_enumeration(c: &mut Criterion) {
    let t = random_rank_table(7, 12, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let h = (0..=t.r()).rev().find(|&h| !enumerate_m_with(&t, h, Exec::Parallel).is_empty()).unwrap();
    let mut group = c.benchmark_group("enumerate_m");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, h), &h, |b, &h| b.iter(|| enumerate_m_with(black_box(&t), h, exec)));
    }
    group.finish();
}

fn rank_tables(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = random_arrangement(FieldSpec::Rational, 8, &[4, 5, 3, 6, 2, 5, 4, 3, 5, 6], &mut rng, 50).unwrap();
    let mut group = c.benchmark_group("rank_table");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(&a).rank_table_with(exec).unwrap()));
    }
    group.finish();
}

fn initial_ideals(c: &mut Criterion) {
    let t = random_rank_table(6, 10, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let mut group = c.benchmark_group("initial_ideal");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| initial_ideal_with(black_box(&t), exec)));
    }
    group.finish();
}

fn point_counts(c: &mut Criterion) {
    let f = FieldSpec::prime(31).unwrap();
    let a = Arrangement::coordinate(f, 5, &[&[1, 2], &[1, 3], &[5]]);
    let mut group = c.benchmark_group("point_count");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(4);
                count_intersection_points(black_box(&a), &[1, 1, 2], &mut rng, DEFAULT_POINT_BUDGET, exec).unwrap().count
            })
        });
    }
    group.finish();
}

criterion_group!(benches, degree_enumeration, rank_tables, initial_ideals, point_counts);
criterion_main!(benches);
