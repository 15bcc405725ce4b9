use approx::{assert_abs_diff_eq, assert_relative_eq};
use num_complex::Complex64;
use num_rational::Ratio;
use pbop_core::calculus::{block_poly_apply, LinearOperator, ScalarPoly};
use pbop_core::car::{car_combination_norm, CarCombination};
use pbop_core::fejer::{
    bmo_norm_with, fejer_kernel, fejer_kernel_series, fejer_section_apply, fejer_weight, multiplier_mass_exact,
    ArcFamily, FourierSeries, TrigVector,
};
use pbop_core::hardy::{HardyOperator, PisierState};
use pbop_core::scalar::{inner, max_abs_diff, norm2};
use pbop_core::ScalarPolyF32;
use proptest::prelude::*;

fn complex_vec(len: impl Into<prop::collection::SizeRange>) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn car_combination_norm_is_l2_norm(alpha in complex_vec(1..=10)) {
        prop_assume!(norm2(&alpha) > 1e-6);
        let n = alpha.len();
        let est = car_combination_norm(&alpha, n, 1e-12).unwrap();
        assert_relative_eq!(est.value, norm2(&alpha), max_relative = 1e-9);
        prop_assert!(est.certified_lower <= norm2(&alpha) * (1.0 + 1e-12));
    }

    #[test]
    fn car_combination_squares_to_zero(alpha in complex_vec(1..=8), seed in any::<u64>()) {
        let op = CarCombination::new(alpha, 8).unwrap();
        let v = pbop_core::calculus::spectral::random_vector::<f64>(op.dim_in(), seed);
        prop_assert!(norm2(&op.apply(&op.apply(&v))) <= 1e-12);
    }

    #[test]
    fn block_calculus_is_multiplicative(
        p in complex_vec(1..=9),
        q in complex_vec(1..=9),
        eps in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let (p, q) = (ScalarPoly::new(p), ScalarPoly::new(q));
        let s = PisierState::<f64>::random(2, seed).unwrap();
        let direct = block_poly_apply(eps, &p.mul(&q), &s).unwrap();
        let composed = block_poly_apply(eps, &p, &block_poly_apply(eps, &q, &s).unwrap()).unwrap();
        prop_assert!(max_abs_diff(&direct.to_vec(), &composed.to_vec()) <= 1e-11);
    }

    #[test]
    fn block_operator_adjoint_pairing(eps in 0.0f64..2.0, a in any::<u64>(), b in any::<u64>()) {
        let op = HardyOperator::<f64>::pisier(3, eps).unwrap();
        let v = PisierState::<f64>::random(3, a).unwrap().to_vec();
        let w = PisierState::<f64>::random(3, b).unwrap().to_vec();
        let lhs = inner(&op.apply(&v), &w);
        let rhs = inner(&v, &op.apply_adjoint(&w));
        assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-11);
        assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-11);
    }

    #[test]
    fn fejer_section_is_l2_contraction(c in complex_vec(1..=80), offset in -60i64..20, k in 1usize..7) {
        let f = FourierSeries::from_coeffs(offset, c);
        let g = fejer_section_apply(k, &f);
        let nf: f64 = f.coeffs().iter().map(|z| z.norm_sqr()).sum();
        let ng: f64 = g.coeffs().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!(ng <= nf * (1.0 + 1e-15));
    }

    #[test]
    fn fejer_weights_in_unit_interval(k in 0usize..20, nu in -2_000_000i64..2_000_000) {
        let w: f64 = fejer_weight(k, nu);
        prop_assert!((0.0..=1.0).contains(&w));
    }

    #[test]
    fn fejer_kernel_forms_agree(k in 0usize..=8, theta in 0.0f64..std::f64::consts::TAU) {
        let closed: f64 = fejer_kernel(k, theta);
        let series: f64 = fejer_kernel_series(k, theta);
        assert_abs_diff_eq!(closed, series, epsilon = 1e-10);
        prop_assert!(closed >= -1e-12);
    }

    #[test]
    fn multiplier_mass_below_seven_thirds(n in 0u64..(1u64 << 40), kmax in 1u32..=44) {
        prop_assert!(multiplier_mass_exact(n, kmax) <= Ratio::new(7, 3));
    }

    #[test]
    fn bmo_monotone_in_arc_family(c in complex_vec(1..=16), d in complex_vec(1..=16)) {
        let v = TrigVector::new(vec![
            FourierSeries::from_coeffs(-15, c),
            FourierSeries::from_coeffs(-15, d),
        ]).unwrap();
        let n = 64;
        let small = bmo_norm_with(&v, &ArcFamily::with_lengths(n, vec![4, 16]).unwrap()).unwrap();
        let full = bmo_norm_with(&v, &ArcFamily::dyadic(n).unwrap()).unwrap();
        prop_assert!(small.value <= full.value * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn single_precision_tracks_double(c in complex_vec(1..=12), eps in 0.0f64..=1.0, seed in any::<u64>()) {
        let p64 = ScalarPoly::new(c.clone());
        let p32 = ScalarPolyF32::new(c.iter().map(|z| num_complex::Complex32::new(z.re as f32, z.im as f32)).collect());
        let s64 = PisierState::<f64>::random(2, seed).unwrap();
        let s32 = PisierState::<f32>::from_slice(
            2,
            &s64.to_vec().iter().map(|z| num_complex::Complex32::new(z.re as f32, z.im as f32)).collect::<Vec<_>>(),
        ).unwrap();
        let out64 = block_poly_apply(eps, &p64, &s64).unwrap().to_vec();
        let out32 = block_poly_apply(eps as f32, &p32, &s32).unwrap().to_vec();
        let scale = norm2(&out64).max(1.0);
        let diff = out64.iter().zip(&out32).map(|(a, b)| (a - Complex64::new(b.re as f64, b.im as f64)).norm()).fold(0.0, f64::max);
        prop_assert!(diff <= 2e-3 * scale);
    }
}

#[test]
fn full_circle_arc_is_global_variance() {
    let v = TrigVector::new(vec![FourierSeries::from_coeffs(
        -3,
        vec![Complex64::new(0.5, -1.0), Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0)],
    )])
    .unwrap();
    let report = bmo_norm_with(&v, &ArcFamily::with_lengths(64, vec![64]).unwrap()).unwrap();
    // Parseval: mean square of the non-constant part.
    assert_abs_diff_eq!(report.value, 0.25 + 1.0 + 4.0 + 1.0, epsilon = 1e-12);
}
