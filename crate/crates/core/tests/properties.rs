//! Property tests over randomly drawn inputs.

use approx::assert_relative_eq;
use herglotz_core::hconv::{mult_nodal_matrix, mult_toeplitz_matrix, SphereSymbol};
use herglotz_core::herglotz::{kernel_series, synth, synth_integral, HerglotzField, SphereFunction};
use herglotz_core::quad::{sphere_grid, TailPolicy};
use herglotz_core::radial_toeplitz::{gamma_sequence, RadialSymbol};
use herglotz_core::specfun::{gauss_legendre, harmonics_upto, multiplicity};
use herglotz_core::Dim;
use num_complex::Complex64;
use proptest::prelude::*;

fn dim() -> impl Strategy<Value = Dim> {
    prop_oneof![Just(Dim::Two), Just(Dim::Three)]
}

fn point(d: Dim, radius: f64) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-radius..radius, d.get())
}

fn harmonic(d: Dim, nmax: usize) -> impl Strategy<Value = (usize, usize)> {
    (0..=nmax).prop_flat_map(move |n| (Just(n), 1..=multiplicity(d, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn harmonics_are_orthonormal(d in dim(), a in 0usize..=8, b in 0usize..=8) {
        let grid = sphere_grid(d, 24).unwrap();
        let values: Vec<Vec<f64>> = grid.points.iter().map(|p| harmonics_upto(d, 8, p)).collect();
        let len = values[0].len();
        let (i, j) = (a * len / 9, b * len / 9);
        let s: f64 = values.iter().zip(&grid.weights).map(|(y, w)| w * y[i] * y[j]).sum();
        let expected = if i == j { 1.0 } else { 0.0 };
        prop_assert!((s - expected).abs() < 1e-10);
    }

    #[test]
    fn legendre_rules_integrate_polynomials(n in 1usize..40, k in 0u32..80) {
        let rule = gauss_legendre(n).unwrap();
        prop_assert!(rule.weights.iter().all(|w| *w > 0.0));
        if (k as usize) < 2 * n {
            let v = rule.integrate(-1.0, 1.0, |x| x.powi(k as i32));
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            prop_assert!((v - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn kernel_series_is_symmetric(d in dim(), seed in 0u64..1000) {
        let s = seed as f64;
        let x: Vec<f64> = (0..d.get()).map(|i| 3.0 * (s * 0.37 + i as f64).sin()).collect();
        let y: Vec<f64> = (0..d.get()).map(|i| 3.0 * (s * 0.91 + 2.0 * i as f64).cos()).collect();
        prop_assert_eq!(kernel_series(d, &x, &y, 30).unwrap(), kernel_series(d, &y, &x, 30).unwrap());
    }

    #[test]
    fn synthesis_paths_agree((d, x) in dim().prop_flat_map(|d| (Just(d), point(d, 11.0))), (n, j) in harmonic(Dim::Two, 8)) {
        let j = j.min(multiplicity(d, n));
        let phi = SphereFunction::basis(d, n, j).unwrap();
        let grid = sphere_grid(d, 64).unwrap();
        let direct = synth(&phi, &x).unwrap();
        let quad = synth_integral(|p: &[f64]| phi.eval(p), &x, &grid).unwrap();
        prop_assert!((direct - quad).norm() < 1e-8, "{} vs {}", direct, quad);
    }

    #[test]
    fn fields_solve_helmholtz((d, x) in dim().prop_flat_map(|d| (Just(d), point(d, 8.0))), (n, j) in harmonic(Dim::Two, 5)) {
        let j = j.min(multiplicity(d, n));
        let u = HerglotzField::new(SphereFunction::basis(d, n, j).unwrap());
        let value = u.eval(&x).unwrap();
        prop_assume!(value.norm() > 1e-3);
        prop_assert!(u.helmholtz_residual(&x, 1e-3).unwrap() <= 1e-4);
    }

    #[test]
    fn nodal_multiplications_commute(d in dim(), k in 1i32..5, shift in -2.0f64..2.0) {
        let grid = sphere_grid(d, 12).unwrap();
        let a = SphereSymbol::phase(d, k);
        let b = SphereSymbol::real(d, "shifted", 1.0 + shift.abs(), move |xi| shift + xi[0]).unwrap();
        let ta = mult_nodal_matrix(&a, &grid).unwrap();
        let tb = mult_nodal_matrix(&b, &grid).unwrap();
        let c = ta.matmul(&tb).unwrap().minus(&tb.matmul(&ta).unwrap()).unwrap();
        prop_assert_eq!(c.frobenius(), 0.0);
    }

    #[test]
    fn hermitian_exactly_for_real_symbols(k in -3i32..=3, c in -2.0f64..2.0) {
        let grid = sphere_grid(Dim::Two, 24).unwrap();
        let phase = SphereSymbol::phase(Dim::Two, k);
        let m = mult_toeplitz_matrix(&phase, Dim::Two, 5, &grid).unwrap();
        prop_assert_eq!(m.is_hermitian(1e-12), k == 0);
        let real = SphereSymbol::real(Dim::Two, "c+cos", c.abs() + 1.0, move |xi| c + xi[0]).unwrap();
        prop_assert!(mult_toeplitz_matrix(&real, Dim::Two, 5, &grid).unwrap().is_hermitian(1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spectral_values_are_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, s in 0.5f64..2.0, rho in 0.5f64..3.0) {
        let d = Dim::Three;
        let g = RadialSymbol::gaussian(s).unwrap();
        let ind = RadialSymbol::indicator(rho).unwrap();
        let combo = RadialSymbol::combination(vec![(alpha, g.clone()), (beta, ind.clone())]).unwrap();
        let policy = TailPolicy::default();
        let ga = gamma_sequence(&g, d, 10, &policy).unwrap();
        let gb = gamma_sequence(&ind, d, 10, &policy).unwrap();
        let gc = gamma_sequence(&combo, d, 10, &policy).unwrap();
        for n in 0..=10 {
            let expected = alpha * ga.gammas[n] + beta * gb.gammas[n];
            let bound = alpha.abs() * ga.error_bounds[n] + beta.abs() * gb.error_bounds[n] + gc.error_bounds[n] + 1e-14;
            prop_assert!((gc.gammas[n] - expected).abs() <= bound * 10.0 + 1e-13 * expected.abs(), "n={n}");
        }
    }

    #[test]
    fn nonnegative_symbols_have_nonnegative_values(s in 0.3f64..3.0, rho in 0.2f64..5.0, w in 0.0f64..4.0) {
        let a = RadialSymbol::combination(vec![
            (1.0, RadialSymbol::gaussian(s).unwrap()),
            (w, RadialSymbol::indicator(rho).unwrap()),
        ]).unwrap();
        for d in [Dim::Two, Dim::Three] {
            let seq = gamma_sequence(&a, d, 16, &TailPolicy::default()).unwrap();
            prop_assert!(seq.gammas.iter().all(|g| *g >= 0.0));
        }
    }
}

#[test]
fn unit_sphere_symbol_is_identity() {
    let grid = sphere_grid(Dim::Three, 16).unwrap();
    let m = mult_toeplitz_matrix(&SphereSymbol::constant(Dim::Three, Complex64::from(1.0)), Dim::Three, 3, &grid).unwrap();
    for i in 0..m.n {
        assert_relative_eq!(m.get(i, i).re, 1.0, epsilon = 1e-13);
    }
}
