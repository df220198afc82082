use proptest::prelude::*;

use singosc::amplitude::{make_poly_plateau, Amplitude, CutoffSpec};
use singosc::asymptotics::{
    build_expansion, coeff_a, coeff_a_hat, coeff_b, coeff_b_check, eval_expansion, is_log_index, power_phase,
    AlphaSpec, Branch, Kind,
};
use singosc::quadrature::Tolerance;
use singosc::specfun::C64;

fn amplitude() -> Amplitude {
    make_poly_plateau(&[1.0, -0.5, 0.25, 0.125, -1.0 / 3.0, 0.2], CutoffSpec::default(), 64).unwrap()
}

fn bits_eq(a: C64, b: C64) -> bool {
    a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn power_and_log_coefficients_are_exclusive(p in 1u64..12, q in 1u64..12, n in 1u64..=64) {
        let alpha = AlphaSpec::rational(p, q).unwrap();
        let AlphaSpec::Rational { p, .. } = alpha else { unreachable!() };
        let phi = amplitude();
        let zero = C64::new(0.0, 0.0);
        let (a, b) = (coeff_a(&alpha, &phi, n).unwrap(), coeff_b(&alpha, &phi, n).unwrap());
        prop_assert_eq!(is_log_index(&alpha, n), n % p == 0);
        if n % p == 0 {
            prop_assert_eq!(a, zero);
        } else {
            prop_assert_eq!(b, zero);
        }
    }

    #[test]
    fn reindexed_log_coefficient_matches(idx in 0usize..4, m in 1u64..=10) {
        let (p, q) = [(1, 2), (2, 3), (3, 2), (3, 1)][idx];
        let alpha = AlphaSpec::rational(p, q).unwrap();
        let phi = amplitude();
        let check = coeff_b_check(&alpha, &phi, m).unwrap();
        let direct = coeff_b(&alpha, &phi, p * m).unwrap();
        prop_assert!(bits_eq(check, direct));
    }

    #[test]
    fn laplace_coefficient_is_the_unphased_power_coefficient(p in 1u64..8, q in 1u64..8, n in 1u64..=6) {
        let alpha = AlphaSpec::rational(p, q).unwrap();
        let phi = amplitude();
        let a = coeff_a(&alpha, &phi, n).unwrap();
        let hat = coeff_a_hat(&alpha, &phi, n).unwrap();
        prop_assert!(bits_eq(a, power_phase(&alpha, n) * hat));
        if hat != 0.0 {
            let back = a / power_phase(&alpha, n);
            prop_assert!((back.re - hat).abs() <= 4.0 * f64::EPSILON * hat.abs());
            prop_assert!(back.im.abs() <= 4.0 * f64::EPSILON * hat.abs());
        }
    }

    #[test]
    fn negative_axis_is_the_conjugate_for_real_amplitudes(
        alpha in prop_oneof![
            (1u64..6, 1u64..6).prop_map(|(p, q)| AlphaSpec::rational(p, q).unwrap()),
            (0.3f64..3.0).prop_map(|x| AlphaSpec::irrational(x).unwrap()),
        ],
        order in 1u64..5,
        t in 1e-4f64..0.5,
    ) {
        let phi = amplitude();
        let taylor = alpha.max_convergent_taylor().min(alpha.remainder_order(order)).max(0) as u64;
        let e = build_expansion(&alpha, &phi, order, Kind::Oscillatory, taylor, &Tolerance::default()).unwrap();
        let pos = eval_expansion(&e, t, Branch::PositiveAxis).unwrap();
        let neg = eval_expansion(&e, -t, Branch::NegativeAxis).unwrap();
        let scale = e.terms.iter().map(|term| term.eval(t).norm()).fold(pos.norm(), f64::max);
        prop_assert!((neg - pos.conj()).norm() <= 1e-13 * scale, "{} vs {}", neg, pos.conj());
    }
}
