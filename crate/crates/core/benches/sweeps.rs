use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bcinv::banach::{integral_representation, QuadratureConfig};
use bcinv::lab::{finite_ring, run_suite, LabConfig, Suite};
use bcinv::ring::{Mat, MatrixAlgebra};
use bcinv::Execution;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn lab_suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("lab");
    group.sample_size(10);
    for (ring_text, suite) in [("Zn:12", Suite::Equivalences), ("MFp:2:2", Suite::Sets), ("MFp:2:2", Suite::Rol)] {
        let ring = finite_ring(ring_text).unwrap();
        for (mode, exec) in MODES {
            let cfg = LabConfig { exec, ..LabConfig::default() };
            group.bench_with_input(BenchmarkId::new(format!("{ring_text}/{suite}"), mode), &cfg, |bench, cfg| {
                bench.iter(|| run_suite(&ring, suite, cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let n = 8;
    let alg = MatrixAlgebra::float(n).unwrap();
    // rank-5 v with a = v^T, so a v is positive semidefinite
    let left = Mat::from_fn(n, 5, |i, j| ((i * 7 + j * 3) as f64).sin());
    let right = Mat::from_fn(5, n, |i, j| ((i * 5 + j * 11) as f64).cos());
    let v = left.mul(&right);
    let a = v.transpose();
    let mut group = c.benchmark_group("integral");
    group.sample_size(10);
    for (mode, exec) in MODES {
        let cfg = QuadratureConfig { exec, panels: 64, ..QuadratureConfig::default() };
        group.bench_with_input(BenchmarkId::new("n8", mode), &cfg, |bench, cfg| {
            bench.iter(|| integral_representation(&alg, &a, &v, cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lab_suites, quadrature);
criterion_main!(benches);
