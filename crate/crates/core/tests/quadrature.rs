use fundsol::quadrature::{
    gauss_legendre, log_weighted_integral, radial_rule, sphere_rule, MAX_DIMENSION,
};
use fundsol::special::{gamma, EULER_GAMMA};
use fundsol::{Error, Execution};

/// ∫_{S^{n−1}} ∏ θ_i^{2a_i} dθ = 2 ∏Γ(a_i + 1/2) / Γ(Σa_i + n/2).
fn even_moment(a: &[u32]) -> f64 {
    let n = a.len() as f64;
    let total: u32 = a.iter().sum();
    2.0 * a.iter().map(|&ai| gamma(f64::from(ai) + 0.5)).product::<f64>()
        / gamma(f64::from(total) + n / 2.0)
}

#[test]
fn sphere_rules_integrate_even_monomials_exactly() {
    let exponents: [&[u32]; 7] = [
        &[0, 0],
        &[3, 2],
        &[2, 1, 0],
        &[4, 0, 2],
        &[1, 1, 1, 1],
        &[2, 0, 1, 0, 1],
        &[1, 0, 0, 1, 0, 1],
    ];
    for a in exponents {
        let n = a.len();
        let rule = sphere_rule(n, 2).unwrap();
        let q: f64 = rule.integrate(Execution::default(), |th| {
            th.iter().zip(a).map(|(x, &p)| x.powi(2 * p as i32)).product()
        });
        let exact = even_moment(a);
        assert!((q - exact).abs() < 1e-13 * exact, "{a:?}: {q} vs {exact}");
    }
}

#[test]
fn sphere_rules_cancel_odd_monomials() {
    for n in 2..=5 {
        let rule = sphere_rule(n, 1).unwrap();
        let q: f64 = rule.integrate(Execution::default(), |th| th[0].powi(3) * th[n - 1]);
        assert!(q.abs() < 1e-14, "n = {n}");
    }
}

#[test]
fn sphere_rule_limits() {
    assert_eq!(sphere_rule(1, 2).unwrap_err(), Error::UnsupportedDimension(1));
    assert_eq!(
        sphere_rule(MAX_DIMENSION + 1, 1).unwrap_err(),
        Error::UnsupportedDimension(MAX_DIMENSION + 1)
    );
    assert!(sphere_rule(2, 0).is_err());
}

#[test]
fn gauss_legendre_integrates_degree_2n_minus_1() {
    let (x, w) = gauss_legendre(12);
    let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
    assert!((q - 2.0 / 23.0).abs() < 1e-15);
}

#[test]
fn log_weighted_gaussian_integrals() {
    // ∫₀^∞ log(u) u e^{−u²/2} du = (log 2 − γ)/2
    let rule = radial_rule(1.0, 1e-16, 24).unwrap();
    let est = log_weighted_integral(|u| u * (-0.5 * u * u).exp(), &rule).unwrap();
    let expect = (2f64.ln() - EULER_GAMMA) / 2.0;
    assert!((est.value - expect).abs() < 1e-13);
    assert!(est.error < 1e-10);
    // ∫₀^∞ log(u) e^{−u²/2} du = −(γ + log 2)·√(π/2)/2
    let est = log_weighted_integral(|u| (-0.5 * u * u).exp(), &rule).unwrap();
    let expect = -(EULER_GAMMA + 2f64.ln()) * (std::f64::consts::PI / 2.0).sqrt() / 2.0;
    assert!((est.value - expect).abs() < 1e-13);
}

#[test]
fn radial_rule_rejects_bad_tolerances() {
    assert_eq!(radial_rule(1.0, 0.0, 24).unwrap_err(), Error::BadTolerance(0.0));
    assert_eq!(radial_rule(1.0, 1.5, 24).unwrap_err(), Error::BadTolerance(1.5));
    assert!(radial_rule(-1.0, 1e-16, 24).is_err());
}

#[test]
fn integrable_endpoint_singularities() {
    let base = radial_rule(1.0, 1e-16, 24).unwrap();
    for a in [-0.9, -0.75, -0.5, -0.25, 0.5] {
        let rule = base.with_singularity(a).unwrap();
        let q: f64 = rule.integrate(|r| r.powf(a) * (-0.5 * r * r).exp());
        let exact = 2f64.powf((a - 1.0) / 2.0) * gamma((a + 1.0) / 2.0);
        assert!((q - exact).abs() < 1e-11 * exact, "a = {a}: {}", q - exact);
    }
    assert!(base.with_singularity(-1.0).is_err());
}
