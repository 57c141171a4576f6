// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use urysohn::builder::{build_rational_urysohn, Stage};
use urysohn::isometry::isometry_group_with;
use urysohn::{enumerate_admissible_with, universality_audit_with, AuditParams, Execution, FiniteMetricSpace, Rational};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn cube() -> FiniteMetricSpace {
    // Hamming cube {0,1}^3.
    let rows: Vec<Vec<i64>> = (0..8u32).map(|i| (0..8u32).map(|j| i64::from((i ^ j).count_ones())).collect()).collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    FiniteMetricSpace::from_int_rows(&refs).unwrap()
}

fn enumeration(c: &mut Criterion) {
    let space = cube().prefix(6).unwrap();
    let bound = Rational::from_integer(3);
    let mut g = c.benchmark_group("enumerate_admissible");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| enumerate_admissible_with(exec, black_box(&space), 2, &bound).unwrap())
        });
    }
    g.finish();
}

fn audit(c: &mut Criterion) {
    let stages = [Stage::new(2, 1, Rational::from_integer(2)), Stage::new(3, 1, Rational::from_integer(2))];
    let space = build_rational_urysohn(&stages).unwrap().space;
    let params = AuditParams { n: 3, den_bound: 1, value_bound: Rational::from_integer(2), depth: space.len() };
    let mut g = c.benchmark_group("universality_audit");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| universality_audit_with(exec, black_box(&space), &params).unwrap())
        });
    }
    g.finish();
}

fn isometries(c: &mut Criterion) {
    let space = cube();
    let mut g = c.benchmark_group("isometry_group");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| isometry_group_with(exec, black_box(&space)))
        });
    }
    g.finish();
}

criterion_group!(benches, enumeration, audit, isometries);
criterion_main!(benches);
