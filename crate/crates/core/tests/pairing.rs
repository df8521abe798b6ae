use fundsol::quadrature::{gauss_legendre, sphere_rule};
use fundsol::special::{gamma, sphere_area, EULER_GAMMA};
use fundsol::{
    constant_c, constant_d, pair, pair_value, parse_symbol, potential_at, spherical_average,
    Branch, Execution, HomogeneousSymbol, TestFunction,
};
use std::f64::consts::PI;

mod common;
use common::{c, config, level_for, poly_test, test_functions, SUITE};

#[test]
fn newtonian_riesz_and_log_values() {
    let cfg = config(3);
    let lap3 = HomogeneousSymbol::laplacian(3).unwrap();
    let r = pair(&lap3, &TestFunction::gaussian(3, 1.0).unwrap(), &cfg).unwrap();
    assert_eq!(r.branch, Branch::Subcritical);
    assert!((r.value - 1.0).norm() < 1e-12);
    assert!(r.error_estimate < 1e-12);

    let riesz = parse_symbol("norm^1", 2).unwrap();
    let v = pair_value(&riesz, &TestFunction::gaussian(2, 1.0).unwrap(), &cfg).unwrap();
    assert!((v.re - (PI / 2.0).sqrt()).abs() < 1e-12);

    let lap2 = HomogeneousSymbol::laplacian(2).unwrap();
    let r = pair(&lap2, &TestFunction::gaussian(2, 1.0).unwrap(), &cfg).unwrap();
    assert_eq!(r.branch, Branch::Supercritical);
    assert!((r.value.re - (2f64.ln() - EULER_GAMMA) / 2.0).abs() < 1e-12);
    assert_eq!(r.value, r.local_term.unwrap() + r.nonlocal_term.unwrap());
}

#[test]
fn riesz_kernels_match_the_radial_gamma_integral() {
    // (2π)^{−n}|S^{n−1}|(2π)^{n/2} ∫ r^{n−1−α} e^{−r²/2} dr
    for (n, alpha) in [(2, 0.5), (2, 1.5), (3, 1.0), (3, 2.5), (4, 3.5), (5, 4.5), (3, 2.9)] {
        let s = HomogeneousSymbol::radial_power(n, 1.0, alpha).unwrap();
        let v = pair_value(&s, &TestFunction::gaussian(n, 1.0).unwrap(), &config(2)).unwrap();
        let beta = n as f64 - alpha;
        let exact = sphere_area(n) * (2.0 * PI).powf(-(n as f64) / 2.0)
            * 2f64.powf(beta / 2.0 - 1.0)
            * gamma(beta / 2.0);
        assert!((v.re - exact).abs() < 1e-10 * exact, "n={n} α={alpha}: {} vs {exact}", v.re);
    }
}

#[test]
fn scaled_radial_power_scales_inversely() {
    let g = TestFunction::gaussian(3, 1.0).unwrap();
    let a = pair_value(&parse_symbol("norm^1.5", 3).unwrap(), &g, &config(2)).unwrap();
    let b = pair_value(&parse_symbol("4*norm^1.5", 3).unwrap(), &g, &config(2)).unwrap();
    assert!((a - b * 4.0).norm() < 1e-13);
}

#[test]
fn delta_property_on_the_suite() {
    for (expr, n) in SUITE {
        let s = parse_symbol(expr, n).unwrap();
        let cfg = config(level_for(n).min(3));
        for (name, f) in test_functions(n) {
            let pf = s.apply_operator(&f).unwrap();
            let v = pair_value(&s, &pf, &cfg).unwrap();
            let f0 = f.value_at_origin();
            let err = (v - f0).norm();
            assert!(err <= 1e-6 * (1.0 + f0.norm()), "{expr} / {name}: {err:e}");
        }
    }
}

#[test]
fn quartic_average_on_the_circle() {
    let q = parse_symbol("x1^4 + x2^4", 2).unwrap();
    let g = TestFunction::gaussian(2, 1.0).unwrap();
    let rule = sphere_rule(2, 3).unwrap();
    let a = spherical_average(&q, &g, 1.0, &rule, Execution::default()).unwrap();
    let expect = 2.0 * PI * (-0.5f64).exp() * 2.0 * PI * 2f64.sqrt();
    assert!((a.re - expect).abs() < 1e-12 * expect);
}

#[test]
fn universal_constants() {
    assert!((constant_c(4.0, 3).unwrap() + 0.001_231_829_440_156_92).abs() < 1e-17);
    assert!((constant_d(4.0, 3).unwrap() + 0.000_671_906_967_358_323).abs() < 1e-17);
    for k in 1..=10u32 {
        let kf = f64::from(k);
        let c1 = constant_c(kf, 1).unwrap();
        for n in 1..=10usize {
            let ratio = constant_c(kf, n).unwrap() * (2.0 * PI).powi(n as i32 - 1);
            assert!((ratio - c1).abs() <= 1e-15 * c1.abs());
        }
    }
    assert!(constant_c(1.5, 2).is_err() && constant_d(3.5, 2).is_err());
}

#[test]
fn linearity_in_the_test_function() {
    let s = parse_symbol("x1^4+x2^4", 2).unwrap();
    let f = TestFunction::gaussian(2, 1.0).unwrap();
    let g = poly_test(2).translate(&[0.2, -0.4]);
    let (a, b) = (c(1.5, -0.5), c(-0.25, 2.0));
    let combo = f.scaled(a).add(&g.scaled(b)).unwrap();
    let cfg = config(3);
    let lhs = pair_value(&s, &combo, &cfg).unwrap();
    let rhs = pair_value(&s, &f, &cfg).unwrap() * a + pair_value(&s, &g, &cfg).unwrap() * b;
    assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
}

/// Newtonian potential of e^{−|y|²/2}: (1/r)∫₀^r s²e^{−s²/2}ds + ∫_r^∞ s e^{−s²/2}ds.
fn shell_potential(r: f64) -> f64 {
    let (x, w) = gauss_legendre(64);
    let inner: f64 = x
        .iter()
        .zip(&w)
        .map(|(t, w)| {
            let s = 0.5 * r * (t + 1.0);
            0.5 * r * w * s * s * (-0.5 * s * s).exp()
        })
        .sum();
    inner / r + (-0.5 * r * r).exp()
}

#[test]
fn newtonian_potential_of_a_gaussian() {
    let lap3 = HomogeneousSymbol::laplacian(3).unwrap();
    let g = TestFunction::gaussian(3, 1.0).unwrap();
    let cfg = config(3);
    for x0 in [[0.5, 0.0, 0.0], [0.0, -1.2, 0.9], [3.0, 4.0, 0.0]] {
        let r = x0.iter().map(|x| x * x).sum::<f64>().sqrt();
        let closed = (PI / 2.0).sqrt() * libm::erf(r / 2f64.sqrt()) / r;
        assert!((closed - shell_potential(r)).abs() < 1e-13, "oracle at r = {r}");
        let u = potential_at(&lap3, &g, &x0, &cfg).unwrap();
        assert!((u.re - closed).abs() < 1e-9, "r = {r}: {} vs {closed}", u.re);
        assert!(u.im.abs() < 1e-12);
    }
    let far = potential_at(&lap3, &g, &[0.0, 0.0, 5.0], &cfg).unwrap();
    assert!((far.re - 0.250_662_683_757_313).abs() < 1e-9);
}

#[test]
fn potential_solves_the_equation_in_two_dimensions() {
    // u = 𝔖∗f with f = −Δg reproduces g itself up to the null space, which
    // for a Gaussian pairing is fixed by the delta test: u(x0) = g(x0).
    let lap2 = HomogeneousSymbol::laplacian(2).unwrap();
    let g = TestFunction::gaussian(2, 1.0).unwrap();
    let f = lap2.apply_operator(&g).unwrap();
    let x0 = [0.7, -0.3];
    let u = potential_at(&lap2, &f, &x0, &config(4)).unwrap();
    let expect = (-0.5 * (0.49 + 0.09f64)).exp();
    assert!((u.re - expect).abs() < 1e-10);
}

#[test]
fn dimension_mismatch_is_rejected() {
    let s = HomogeneousSymbol::laplacian(3).unwrap();
    let g = TestFunction::gaussian(2, 1.0).unwrap();
    assert!(pair(&s, &g, &config(2)).is_err());
    let g3 = TestFunction::gaussian(3, 1.0).unwrap();
    assert!(potential_at(&s, &g3, &[0.0, 0.0], &config(2)).is_err());
}

#[test]
fn odd_degree_radial_powers_match_the_laurent_constant() {
    // For isotropic symbols the closed form and the constant term of the
    // continued family coincide, which pins the sign used for odd k.
    let f = TestFunction::gaussian(2, 1.5).unwrap().translate(&[0.3, 0.2]);
    for text in ["norm^3", "norm^5", "2*norm^3"] {
        let s = parse_symbol(text, 2).unwrap();
        let cfg = config(3);
        let closed = pair_value(&s, &f, &cfg).unwrap();
        let mu0 = fundsol::laurent_default(&s, &f, -2, 0, &cfg)
            .unwrap()
            .mu(0)
            .unwrap();
        assert!((closed - mu0).norm() < 1e-11, "{text}: {closed} vs {mu0}");
    }
}
