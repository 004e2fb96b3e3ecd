use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use esqpt_core::dos::{dos_curve, linear_grid, nu_monte_carlo, DEFAULT_DERIVATIVE_STEP};
use esqpt_core::landscape::surface_grid;
use esqpt_core::tc::assemble_spectrum;
use esqpt_core::{Exec, Model, ModelParams};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn monte_carlo(c: &mut Criterion) {
    let p = ModelParams::resonant(80, 2.0, Model::Dicke).unwrap();
    let edges = linear_grid(-2.0, 2.0, 41);
    let mut g = c.benchmark_group("monte_carlo");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| nu_monte_carlo(&edges, &p, 1 << 20, 7, exec).unwrap())
        });
    }
    g.finish();
}

fn dos_grid(c: &mut Criterion) {
    let p = ModelParams::resonant(80, 2.0, Model::Dicke).unwrap();
    let grid = linear_grid(-2.4, 1.5, 200);
    let mut g = c.benchmark_group("dicke_dos_grid");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| dos_curve(&p, &grid, DEFAULT_DERIVATIVE_STEP, exec).unwrap())
        });
    }
    g.finish();
}

fn tc_blocks(c: &mut Criterion) {
    let p = ModelParams::resonant(200, 2.0, Model::TavisCummings).unwrap();
    let mut g = c.benchmark_group("tc_blocks");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| assemble_spectrum(&p, 1000, 2.0, exec).unwrap())
        });
    }
    g.finish();
}

fn surface(c: &mut Criterion) {
    let p = ModelParams::resonant(80, 2.0, Model::Dicke).unwrap();
    let mut g = c.benchmark_group("energy_surface");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| surface_grid(&p, 400, 400, exec)));
    }
    g.finish();
}

criterion_group!(benches, monte_carlo, dos_grid, tc_blocks, surface);
criterion_main!(benches);
