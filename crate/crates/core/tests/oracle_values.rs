//! Oracle and coefficient values frozen against independent high-precision evaluations.

use std::f64::consts::PI;

use singosc::amplitude::default_amplitude;
use singosc::asymptotics::{coeff_c_empirical, AlphaSpec, Kind, DEFAULT_FIT_WINDOW};
use singosc::quadrature::{oracle_i_deviation, oracle_l_deviation, Tolerance};
use singosc::specfun::C64;

fn close(z: C64, re: f64, im: f64, rel: f64) {
    let target = C64::new(re, im);
    assert!((z - target).norm() <= rel * target.norm(), "{z} vs {target}");
}

#[test]
fn oscillatory_deviation_values() {
    let phi = default_amplitude();
    let tol = Tolerance::default();
    let cases = [
        (2.0, 1e-2, -0.12532609644442320539, 0.1185828530575607854),
        (0.5, 1.0, -1.1502876924775475594, 1.1453462492456055963),
        (1.5, 1e-4, -0.0028857979030188129484, 0.0048343043894273325297),
        (1.0, 1e-4, -0.00015707625839651139853, 0.0010032528572568634498),
    ];
    for (alpha, t, re, im) in cases {
        let d = oracle_i_deviation(alpha, &phi, t, &tol).unwrap();
        close(d.value, re, im, 1e-10);
    }
}

#[test]
fn laplace_deviation_values() {
    let phi = default_amplitude();
    let tol = Tolerance::default();
    for (alpha, t, v) in [
        (2.0, 1e-4, -0.017657053381204951184),
        (1.0, 1e-3, -0.007730280869065957931),
        (0.5, 0.1, -0.21005829422794453938),
    ] {
        let d = oracle_l_deviation(alpha, &phi, t, &tol).unwrap();
        assert_eq!(d.value.im, 0.0);
        assert!((d.value.re - v).abs() <= 1e-10 * v.abs(), "alpha {alpha}: {} vs {v}", d.value.re);
    }
}

#[test]
fn fitted_linear_coefficient_at_alpha_one() {
    // For φ ≡ 1 near 0 the real part of C_1 is ∫₀^∞ (cos u − 1)/u² du = −π/2.
    let phi = default_amplitude();
    let alpha = AlphaSpec::rational(1, 1).unwrap();
    let fit = coeff_c_empirical(&alpha, &phi, 1, Kind::Oscillatory, DEFAULT_FIT_WINDOW, &Tolerance::default()).unwrap();
    let c1 = fit.requested_coeff();
    assert!((c1.re + PI / 2.0).abs() < 1e-9, "{c1}");
    assert!(fit.condition_number < 10.0);
}
