use criterion::{black_box, criterion_group, criterion_main, Criterion};

use salem_core::grid::{measure_power, AtomicMeasure, TorusGrid};
use salem_core::sampler::{certify_fourier_decay, sample_points, SampleConfig};
use salem_core::transference::{box_kernel, lattice_comb};

fn bench_convolution_powers(c: &mut Criterion) {
    let grid = TorusGrid::new(1, 1009).unwrap();
    let config = SampleConfig::new(grid, 0.5, None, 1, 1, 1, 3).unwrap();
    let sigma = sample_points(&config, 0).unwrap().sigma;
    c.bench_function("conv_power_l3_n1009", |b| {
        b.iter(|| measure_power(black_box(&sigma), 3).unwrap())
    });
}

fn bench_max_cube_mass(c: &mut Criterion) {
    let grid = TorusGrid::new(2, 32).unwrap();
    let config = SampleConfig::new(grid, 1.0, None, 2, 1, 1, 2).unwrap();
    let sigma = sample_points(&config, 0).unwrap().sigma;
    let squared = measure_power(&sigma, 2).unwrap();
    c.bench_function("max_cube_mass_d2_n32_s5", |b| {
        b.iter(|| squared.max_cube_mass(black_box(5)).unwrap())
    });
}

fn bench_fourier_decay_certifier(c: &mut Criterion) {
    let grid = TorusGrid::new(1, 1009).unwrap();
    let config = SampleConfig::new(grid, 0.5, None, 3, 1, 1, 3).unwrap();
    let sigma = sample_points(&config, 0).unwrap().sigma;
    c.bench_function("certify_fourier_decay_n1009", |b| {
        b.iter(|| certify_fourier_decay(black_box(&sigma), 1, 0).unwrap())
    });
}

fn bench_box_comb_identity(c: &mut Criterion) {
    let boxk = box_kernel(8, 1024, 1).unwrap();
    let tau = lattice_comb(8, 1).unwrap();
    c.bench_function("box_power_comb_r1024", |b| {
        b.iter(|| {
            let powered = salem_core::grid::function_power(black_box(&boxk), 2).unwrap();
            salem_core::grid::convolve_function_measure(&powered, &tau).unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_convolution_powers,
    bench_max_cube_mass,
    bench_fourier_decay_certifier,
    bench_box_comb_identity
);
criterion_main!(benches);
