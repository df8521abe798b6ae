use fundsol::{Error, Polynomial, TestFunction};
use num_complex::Complex64;

mod common;
use common::{c, poly_test};

#[test]
fn gaussians_equal_one_at_the_origin() {
    for n in 1..=6 {
        for s in [0.5, 1.0, 2.0, 3.7] {
            let g = TestFunction::gaussian(n, s).unwrap();
            assert!((g.value_at_origin() - 1.0).norm() < 1e-13, "n = {n}, s = {s}");
        }
    }
}

#[test]
fn moments_of_a_polynomial_prefactor() {
    // f̂ = ξ₁² e^{−|ξ|²/2}·2π gives f(0) = (2π)^{−2}·2π·∫ξ₁²e^{−|ξ|²/2} = 1
    let q = Polynomial::from_terms(2, [(vec![2, 0], c(1.0, 0.0))]);
    let f = TestFunction::poly_gaussian(q, 1.0).unwrap();
    assert!((f.value_at_origin() - 1.0).norm() < 1e-14);
    // s = 2: ∫ξ₁² e^{−|ξ|²/4} = 2·(4π) so f(0) = (2π)^{−2}·π·8π = 2
    let q = Polynomial::from_terms(2, [(vec![2, 0], c(1.0, 0.0))]);
    let f = TestFunction::poly_gaussian(q, 2.0).unwrap();
    assert!((f.value_at_origin() - 2.0).norm() < 1e-14);
    // odd imaginary terms do not contribute at the origin
    let p = poly_test(3);
    assert!((p.value_at_origin() - 1.5).norm() < 1e-14);
}

#[test]
fn translation_moves_the_bump() {
    let g = TestFunction::gaussian(2, 1.0).unwrap();
    let shifted = g.translate(&[1.0, 0.0]);
    // g(x + x0) at x = 0 is e^{−1/2}
    assert!((shifted.value_at_origin() - (-0.5f64).exp()).norm() < 1e-14);
    // translating twice by the same point is the identity: f(x0 − (x0 − y)) = f(y)
    let back = shifted.translate(&[1.0, 0.0]);
    assert!((back.value_at_origin() - 1.0).norm() < 1e-14);
    let p = poly_test(2).translate(&[0.3, -0.2]);
    let q = poly_test(2).translate(&[-0.3, 0.2]);
    assert!((p.value_at_origin() - q.value_at_origin()).norm() > 1e-3);
}

#[test]
fn ray_derivatives_match_closed_forms() {
    let g = TestFunction::gaussian(2, 1.0).unwrap();
    let th = [0.6, 0.8];
    let two_pi = 2.0 * std::f64::consts::PI;
    for (m, t, expect) in [
        (0, 1.0, two_pi * (-0.5f64).exp()),
        (1, 1.0, -two_pi * (-0.5f64).exp()),
        (2, 0.0, -two_pi),
        (4, 0.0, 3.0 * two_pi),
    ] {
        let v = g.ray_derivative(&th, m, t).unwrap();
        assert!((v.re - expect).abs() < 1e-12, "m = {m}");
    }
    assert!(matches!(
        g.ray_derivative(&th, 65, 0.0),
        Err(Error::DepthExceeded { .. })
    ));
}

#[test]
fn json_round_trip_is_lossless() {
    let f = poly_test(3).translate(&[0.1, 0.2, -0.3]);
    let text = f.to_json();
    let back = TestFunction::from_json(&text).unwrap();
    assert_eq!(back, f);
    for xi in [[0.0, 0.0, 0.0], [0.4, -1.0, 2.0]] {
        assert_eq!(back.eval_fourier(&xi), f.eval_fourier(&xi));
    }
    assert!(TestFunction::from_json("{\"dimension\":2,\"terms\":[{\"poly\":{\"1\":[1,0]},\"width\":1,\"modulation\":[0,0]}]}").is_err());
    assert!(TestFunction::from_json("{\"dimension\":2,\"terms\":[{\"poly\":{},\"width\":-1,\"modulation\":[0,0]}]}").is_err());
}

#[test]
fn linear_combinations_evaluate_pointwise() {
    let a = TestFunction::gaussian(2, 1.0).unwrap();
    let b = poly_test(2);
    let sum = a.scaled(c(2.0, 0.5)).add(&b).unwrap();
    let xi = [0.7, -0.2];
    let expect = a.eval_fourier(&xi) * c(2.0, 0.5) + b.eval_fourier(&xi);
    assert!((sum.eval_fourier(&xi) - expect).norm() < 1e-14);
    let expect0: Complex64 = a.value_at_origin() * c(2.0, 0.5) + b.value_at_origin();
    assert!((sum.value_at_origin() - expect0).norm() < 1e-14);
}
