//! Grid-scan benchmarks: data-parallel (rayon) vs forced-sequential
//! evaluation of the crossing and winding kernels.
//!
//! Run with `cargo bench -p maslovkit`. Build `--no-default-features` to
//! measure the build without the rayon path compiled in at all.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;

use maslovkit::index::{
    crossings_mode, maslov_pair_mode, winding_det_sq_mode, ExpSegment, LagrangianPath,
};
use maslovkit::symcore::{j0_matrix, LagrangianFrame};
use maslovkit::ExecMode;

/// A rotation path that winds several times, forcing a dense scan grid.
fn spinning_path(n: usize, turns: f64) -> LagrangianPath {
    LagrangianPath::exponential(
        LagrangianFrame::standard_rn(n),
        0.0,
        vec![ExpSegment {
            generator: j0_matrix(n) * -1.0,
            duration: turns * std::f64::consts::TAU,
        }],
    )
    .unwrap()
}

fn partner_path(n: usize, turns: f64) -> LagrangianPath {
    // a slower counter-rotation twisted by a fixed shear, so the pair has
    // many transverse crossings spread over the interval
    let mut shear = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        shear[(n + i, i)] = 0.7 + 0.1 * i as f64;
    }
    LagrangianPath::exponential(
        LagrangianFrame::standard_irn(n),
        0.0,
        vec![
            ExpSegment {
                generator: shear,
                duration: 1.0,
            },
            ExpSegment {
                generator: j0_matrix(n) * 0.5,
                duration: turns * std::f64::consts::TAU - 1.0,
            },
        ],
    )
    .unwrap()
}

fn bench_scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid-scan");
    group.sample_size(20);
    for &(n, turns) in &[(2usize, 3.0f64), (4, 5.0)] {
        let l0 = spinning_path(n, turns);
        let l1 = partner_path(n, turns);
        for mode in [ExecMode::Auto, ExecMode::Sequential] {
            let tag = format!("n{n}-turns{turns}-{mode:?}");
            group.bench_with_input(BenchmarkId::new("crossings", &tag), &mode, |b, &m| {
                b.iter(|| crossings_mode(&l0, &l1, 1e-10, m).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("maslov_pair", &tag), &mode, |b, &m| {
                b.iter(|| maslov_pair_mode(&l0, &l1, m).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("winding", &tag), &mode, |b, &m| {
                b.iter(|| winding_det_sq_mode(&l0, m).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_scans);
criterion_main!(benches);
