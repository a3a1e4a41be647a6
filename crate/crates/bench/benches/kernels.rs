use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use herglotz_core::herglotz::SphereFunction;
use herglotz_core::quad::{sphere_grid, TailPolicy};
use herglotz_core::radial_toeplitz::{gamma_sequence, RadialSymbol};
use herglotz_core::specfun::{bessel_j, bessel_j_orders};
use herglotz_core::sphere_op::{build_nodal, SymbolTransform};
use herglotz_core::symbol_lab::{form_quadrature, SpatialSymbol};
use herglotz_core::Dim;

fn bessel(c: &mut Criterion) {
    c.bench_function("bessel_j/order_0.5_x_7.3", |b| b.iter(|| bessel_j(black_box(0.5), black_box(7.3)).unwrap()));
    c.bench_function("bessel_j/order_40_x_30", |b| b.iter(|| bessel_j(black_box(40.0), black_box(30.0)).unwrap()));
    c.bench_function("bessel_j_orders/64_orders_x_12", |b| {
        b.iter(|| bessel_j_orders(black_box(0.0), 64, black_box(12.0)).unwrap())
    });
}

fn spectral_sequence(c: &mut Criterion) {
    let mut g = c.benchmark_group("gamma_sequence");
    g.sample_size(10);
    let policy = TailPolicy::default();
    let power = RadialSymbol::power(2.0).unwrap();
    g.bench_function("power_d3_n20", |b| b.iter(|| gamma_sequence(&power, Dim::Three, 20, &policy).unwrap()));
    let gauss = RadialSymbol::gaussian(1.0).unwrap();
    g.bench_function("gauss_d2_n32", |b| b.iter(|| gamma_sequence(&gauss, Dim::Two, 32, &policy).unwrap()));
    let chirp = RadialSymbol::chirp();
    g.bench_function("chirp_d3_n12", |b| b.iter(|| gamma_sequence(&chirp, Dim::Three, 12, &policy).unwrap()));
    g.finish();
}

fn nodal(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_nodal");
    g.sample_size(10);
    let a = RadialSymbol::exponential(1.0).unwrap();
    for (d, res) in [(Dim::Two, 256), (Dim::Three, 12)] {
        let t = SymbolTransform::from_symbol(&a, d).unwrap();
        let grid = sphere_grid(d, res).unwrap();
        g.bench_function(format!("exp_d{d}_res{res}"), |b| b.iter(|| build_nodal(&t, &grid).unwrap()));
    }
    g.finish();
}

fn form(c: &mut Criterion) {
    let mut g = c.benchmark_group("form_quadrature");
    g.sample_size(10);
    let a = SpatialSymbol::from_radial(&RadialSymbol::gaussian(1.0).unwrap());
    let u = SphereFunction::basis(Dim::Two, 1, 1).unwrap();
    let v = SphereFunction::basis(Dim::Two, 1, 2).unwrap();
    g.bench_function("gauss_d2_R20", |b| b.iter(|| form_quadrature(&a, &u, &v, 20.0, 12.0).unwrap()));
    g.finish();
}

criterion_group!(benches, bessel, spectral_sequence, nodal, form);
criterion_main!(benches);
