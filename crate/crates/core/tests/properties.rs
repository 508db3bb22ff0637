use berezin::berezin::{ber_on, berezin_symbol, max_abs, numerical_radius, sample_symbols, Refinement, SampleSet};
use berezin::ensemble::{draw, generate_ensemble, random_unit_vector, rng_from_seed, EnsembleKind};
use berezin::matrix::{inner, op_norm, ComplexMatrix};
use berezin::rkhs::{bergman_model, diagonal_model, hardy_model, make_grid, Point, RkhsModel};
use berezin::toeplitz::{harmonic_extension, toeplitz_matrix, SymbolSeries};
use berezin::Complex64;
use proptest::prelude::*;

fn model_for(which: u8, dim: usize) -> RkhsModel {
    match which % 3 {
        0 => diagonal_model(dim).unwrap(),
        1 => hardy_model(dim, 0.95).unwrap(),
        _ => bergman_model(dim, 0.95).unwrap(),
    }
}

fn kind_for(which: u8) -> EnsembleKind {
    EnsembleKind::ALL[which as usize % EnsembleKind::ALL.len()]
}

fn sampled_ber(model: &RkhsModel, a: &ComplexMatrix) -> f64 {
    let grid = make_grid(model, 6, 24);
    let set = SampleSet::new(&grid);
    max_abs(&sample_symbols(model, a, &set).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ber_is_homogeneous(seed in any::<u64>(), which in 0u8..3, dim in 2usize..7, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let model = model_for(which, dim);
        let a = draw(EnsembleKind::Ginibre, dim, &mut rng_from_seed(seed));
        let alpha = Complex64::new(re, im);
        let lhs = sampled_ber(&model, &a.scale(alpha));
        let rhs = alpha.norm() * sampled_ber(&model, &a);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs), "{lhs} vs {rhs}");
    }

    #[test]
    fn ber_is_subadditive(seed in any::<u64>(), which in 0u8..3, dim in 2usize..7, kind in 0u8..5) {
        let model = model_for(which, dim);
        let mut rng = rng_from_seed(seed);
        let a = draw(kind_for(kind), dim, &mut rng);
        let b = draw(kind_for(kind), dim, &mut rng);
        let sum = sampled_ber(&model, &(&a + &b));
        let bound = sampled_ber(&model, &a) + sampled_ber(&model, &b);
        prop_assert!(sum <= bound + 1e-12 * (1.0 + bound));
    }

    #[test]
    fn refinement_never_decreases_ber(seed in any::<u64>(), which in 1u8..3, dim in 2usize..9) {
        let model = model_for(which, dim);
        let a = draw(EnsembleKind::Ginibre, dim, &mut rng_from_seed(seed));
        let grid = make_grid(&model, 6, 24);
        let mut last = 0.0;
        for k in 0..4 {
            let mut set = SampleSet::new(&grid);
            let (ber, _) = ber_on(&model, &a, &mut set, Refinement::Steps(k)).unwrap();
            prop_assert!(ber >= last);
            last = ber;
        }
    }

    #[test]
    fn symbol_stays_inside_numerical_radius(seed in any::<u64>(), which in 0u8..3, dim in 2usize..7, kind in 0u8..5) {
        let model = model_for(which, dim);
        let a = draw(kind_for(kind), dim, &mut rng_from_seed(seed));
        let w = numerical_radius(&a, 90, 30);
        prop_assert!(w.lower <= w.upper);
        prop_assert!(w.upper <= op_norm(&a) * (1.0 + 1e-9) + 1e-12);
        prop_assert!(sampled_ber(&model, &a) <= w.upper + 1e-9);
    }

    #[test]
    fn numerical_radius_brackets_brute_force(seed in any::<u64>(), dim in 2usize..5, kind in 0u8..4) {
        let mut rng = rng_from_seed(seed);
        let a = draw(kind_for(kind), dim, &mut rng);
        let w = numerical_radius(&a, 180, 40);
        let mut brute: f64 = 0.0;
        for _ in 0..2000 {
            let x = random_unit_vector(dim, &mut rng);
            brute = brute.max(inner(&a.mul_vec(&x), &x).norm());
        }
        prop_assert!(brute <= w.upper + 1e-9);
        prop_assert!(w.lower <= w.upper);
        prop_assert!(w.upper - w.lower <= op_norm(&a) * core::f64::consts::PI / 180.0 + 1e-12);
    }

    #[test]
    fn toeplitz_adjoint_is_conjugate_reflection(coeffs in prop::collection::vec((-5i64..=5, -2.0f64..2.0, -2.0f64..2.0), 0..8), n in 1usize..12) {
        let s = SymbolSeries::from_coeffs(coeffs.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im)))).unwrap();
        prop_assert_eq!(toeplitz_matrix(&s.conj_reflect(), n), toeplitz_matrix(&s, n).adjoint());
    }

    #[test]
    fn hardy_toeplitz_symbol_is_harmonic_extension(
        coeffs in prop::collection::vec((-4i64..=4, 0.0f64..1.0, 0.0f64..core::f64::consts::TAU), 1..9),
        r in 0.0f64..0.7,
        t in 0.0f64..core::f64::consts::TAU,
    ) {
        let s = SymbolSeries::from_coeffs(coeffs.into_iter().map(|(k, m, arg)| (k, Complex64::from_polar(m, arg)))).unwrap();
        let model = hardy_model(64, 0.995).unwrap();
        let z = Complex64::from_polar(r, t);
        let sym = berezin_symbol(&model, &toeplitz_matrix(&s, 64), Point::Disk(z)).unwrap();
        let ext = harmonic_extension(&s, z).unwrap();
        prop_assert!((sym - ext).norm() <= 1e-6, "{sym} vs {ext}");
    }

    #[test]
    fn ensembles_are_deterministic(seed in any::<u64>(), kind in 0u8..5, dim in 1usize..6, count in 0usize..4) {
        let kind = kind_for(kind);
        let first = generate_ensemble(kind, dim, count, seed).unwrap();
        prop_assert_eq!(first.len(), count);
        prop_assert_eq!(first, generate_ensemble(kind, dim, count, seed).unwrap());
    }
}
