//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use fundsol::quadrature::SphereRule;
use fundsol::{constant_d, HomogeneousSymbol, Polynomial, RunConfig, TestFunction};
use num_complex::Complex64;

/// Symbols whose fundamental solutions are checked against the delta test.
pub const SUITE: [(&str, usize); 10] = [
    ("x1^2+x2^2", 2),
    ("x1^2+x2^2+x3^2", 3),
    ("x1^2+x2^2+x3^2+x4^2", 4),
    ("(x1^2+x2^2)^2", 2),
    ("(x1^2+x2^2+x3^2)^2", 3),
    ("(x1^2+x2^2+x3^2+x4^2)^2", 4),
    ("(x1^2+x2^2+x3^2+x4^2+x5^2)^2", 5),
    ("x1^4+x2^4", 2),
    ("x1^4+x2^4+x3^4", 3),
    ("x1^6+x2^6", 2),
];

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn config(level: u32) -> RunConfig {
    RunConfig {
        sphere_level: level,
        ..RunConfig::default()
    }
}

/// Level used for the expensive loops: fine on the circle, coarse above.
pub fn level_for(n: usize) -> u32 {
    if n == 2 {
        4
    } else {
        2
    }
}

/// f̂(ξ) = (1 + ξ₁²/2 − ξ₁ξ₂/4 + 3iξ_n/10)·2π e^{−|ξ|²/2} in dimension n.
pub fn poly_test(n: usize) -> TestFunction {
    let mut e1 = vec![0; n];
    e1[0] = 2;
    let mut e12 = vec![0; n];
    e12[0] = 1;
    e12[1] = 1;
    let mut en = vec![0; n];
    en[n - 1] += 1;
    let mut q = Polynomial::from_terms(n, [(vec![0; n], c(1.0, 0.0)), (e1, c(0.5, 0.0))]);
    q.add_term(e12, c(-0.25, 0.0));
    q.add_term(en, c(0.0, 0.3));
    TestFunction::poly_gaussian(q, 1.0).unwrap()
}

/// The three test functions attached to each suite symbol.
pub fn test_functions(n: usize) -> Vec<(String, TestFunction)> {
    vec![
        ("gaussian:s=1".into(), TestFunction::gaussian(n, 1.0).unwrap()),
        ("gaussian:s=2".into(), TestFunction::gaussian(n, 2.0).unwrap()),
        ("polygauss".into(), poly_test(n)),
    ]
}

/// Predicted μ₀ − ⟨𝔖, f⟩ for integer k ≥ n:
/// −(D_{k,n}/k) ∫ p_k(θ)^{−1} log p_k(θ) ∂_r^{k−1}[r^{n−1} f̂(rθ)](0) dθ.
/// It vanishes for isotropic symbols, where log p_k is constant and the
/// two local terms coincide.
pub fn anisotropic_correction(
    s: &HomogeneousSymbol,
    f: &TestFunction,
    sphere: &SphereRule,
) -> Complex64 {
    let n = s.dimension();
    let k = s.integer_degree().unwrap() as usize;
    let d = constant_d(k as f64, n).unwrap();
    // ∂^{k−1}[r^{n−1} g](0) = (k−1)!/(k−n)! · g^{(k−n)}(0)
    let leibniz: f64 = ((k - n + 1)..k).map(|j| j as f64).product();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, th) in sphere.nodes().enumerate() {
        let p = s.eval(th);
        let g = f.ray_derivative(th, k - n, 0.0).unwrap();
        acc += g * (sphere.weight(i) * p.ln() / p);
    }
    acc * (-d / k as f64 * leibniz)
}
