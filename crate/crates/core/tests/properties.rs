use proptest::prelude::*;

use schatten_resolvent::coeff::{clip_spectrum, hermitian_eigen};
use schatten_resolvent::harness::report::format_f64;
use schatten_resolvent::norms::{weighted_g_norm, WeightedNormSpec};
use schatten_resolvent::profile::{FnProfile, Profile, ResolventProfile};
use schatten_resolvent::schatten::{deift_residual, BoundCheck, SingularSpectrum};
use schatten_resolvent::{CMatrix, C64};

fn matrix(max: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), r * c)
            .prop_map(move |v| CMatrix::from_iterator(r, c, v.into_iter().map(|(a, b)| C64::new(a, b))))
    })
}

fn hermitian(max: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n).prop_map(move |v| {
            let g = CMatrix::from_iterator(n, n, v.into_iter().map(|(a, b)| C64::new(a, b)));
            (&g + g.adjoint()).scale(0.5)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deift_identity_holds(s in matrix(12)) {
        prop_assert!(deift_residual(&s).unwrap() < 1e-12);
    }

    #[test]
    fn schatten_norms_decrease_in_p(s in matrix(10), p in 1.0..6.0f64, dp in 0.0..6.0f64) {
        let spec = SingularSpectrum::of(&s);
        let lo = spec.schatten(p).unwrap();
        let hi = spec.schatten(p + dp).unwrap();
        prop_assert!(hi <= lo * (1.0 + 1e-12));
        prop_assert!(spec.largest() <= hi * (1.0 + 1e-12));
        let frob = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((spec.schatten(2.0).unwrap() - frob).abs() <= 1e-12 * frob.max(1.0));
    }

    #[test]
    fn clipping_confines_the_spectrum(a in hermitian(6), n in 1u32..1000) {
        let c = clip_spectrum(&a, n).unwrap();
        let (vals, _) = hermitian_eigen(&c);
        let (lo, hi) = (1.0 / f64::from(n), f64::from(n));
        for v in vals.iter() {
            prop_assert!(*v >= lo * (1.0 - 1e-12) - 1e-12 && *v <= hi * (1.0 + 1e-12));
        }
        let again = clip_spectrum(&c, n).unwrap();
        prop_assert!((&again - &c).norm() <= 1e-10 * c.norm().max(1.0));
    }

    #[test]
    fn bound_ratio_is_homogeneous(lhs in 1e-6..1e3f64, rhs in 1e-6..1e3f64, c in 1e-3..1e2f64, k in 1e-2..1e2f64) {
        let base = BoundCheck::new(lhs, rhs, c);
        let scaled = BoundCheck::new(k * lhs, rhs, c);
        prop_assert!((scaled.ratio - k * base.ratio).abs() <= 1e-12 * scaled.ratio);
        prop_assert_eq!(base.holds_within(1.0), lhs <= c * rhs);
    }

    #[test]
    fn float_text_round_trips(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        let text = format_f64(x);
        prop_assert_eq!(text.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn weighted_norm_is_homogeneous(scale in 0.1..10.0f64, p in 2.5..8.0f64) {
        let spec = WeightedNormSpec::new(p, 1, 1).unwrap();
        let base = weighted_g_norm(&ResolventProfile, &spec, 1e-12).unwrap().finite().unwrap();
        let scaled = FnProfile::new(move |t| scale * ResolventProfile.eval(t)).with_tail_exponent(0.5);
        let got = weighted_g_norm(&scaled, &spec, 1e-12).unwrap().finite().unwrap();
        prop_assert!((got - scale * base).abs() <= 1e-9 * scale * base);
    }
}
