use std::hint::black_box;

use cpdeg_bench::{fixture, FIXTURES};
use cpdeg_core::analysis::Analysis;
use cpdeg_core::bounds::{compute_bounds, BoundOptions};
use cpdeg_core::dispersion::{cycle_covers, dispersion_polynomial};
use cpdeg_core::graph::build_quotient_graph;
use cpdeg_core::polytope::LatticePolytope;
use cpdeg_core::report::{build_report, ReportOptions};
use criterion::{criterion_group, criterion_main, Criterion};

fn dispersion(c: &mut Criterion) {
    let mut group = c.benchmark_group("dispersion");
    for name in FIXTURES {
        let q = build_quotient_graph(&fixture(name));
        group.bench_function(name, |b| {
            b.iter(|| {
                black_box(cycle_covers(&q).unwrap());
                black_box(dispersion_polynomial(&q).unwrap())
            })
        });
    }
    group.finish();
}

fn polytope(c: &mut Criterion) {
    let mut group = c.benchmark_group("face_lattice");
    for name in FIXTURES {
        let support = dispersion_polynomial(&build_quotient_graph(&fixture(name)))
            .unwrap()
            .support();
        group.bench_function(name, |b| {
            b.iter(|| {
                let p = LatticePolytope::new(&support).unwrap();
                black_box(p.face_lattice())
            })
        });
    }
    group.finish();
}

fn bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("bounds");
    group.sample_size(20);
    for (name, refine) in [
        ("singular_house", false),
        ("hex_plus", false),
        ("hex_plus", true),
    ] {
        let an = Analysis::new(fixture(name)).unwrap();
        let opts = BoundOptions {
            refine,
            ..Default::default()
        };
        let id = if refine {
            format!("{name}_refined")
        } else {
            name.to_string()
        };
        group.bench_function(id, |b| {
            b.iter(|| black_box(compute_bounds(&an, &opts).unwrap()))
        });
    }
    group.finish();
}

fn report(c: &mut Criterion) {
    let an = Analysis::new(fixture("hex_plus")).unwrap();
    let opts = ReportOptions {
        refine: true,
        ..Default::default()
    };
    c.bench_function("report/hex_plus", |b| {
        b.iter(|| black_box(build_report(&an, &opts).unwrap()))
    });
}

criterion_group!(benches, dispersion, polytope, bounds, report);
criterion_main!(benches);
