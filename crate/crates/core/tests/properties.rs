use fundsol::{
    pair_value, parse_symbol, ContinuationKernel, HomogeneousSymbol, RunConfig, TestFunction,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

mod common;
use common::{c, poly_test, SUITE};

fn suite_symbols() -> &'static Vec<HomogeneousSymbol> {
    static CELL: OnceLock<Vec<HomogeneousSymbol>> = OnceLock::new();
    CELL.get_or_init(|| SUITE.iter().map(|(e, n)| parse_symbol(e, *n).unwrap()).collect())
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, n)
}

fn symbol_and_point() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (0..SUITE.len()).prop_flat_map(|i| (Just(i), point(SUITE[i].1)))
}

fn mean_abs(xs: &[f64]) -> f64 {
    xs.iter().map(|x| x.abs()).sum::<f64>() / xs.len() as f64
}

proptest! {
    #[test]
    fn symbols_are_positively_homogeneous((i, xi) in symbol_and_point(), lambda in 0.05..4.0f64) {
        prop_assume!(mean_abs(&xi) > 1e-3);
        let s = &suite_symbols()[i];
        let scaled: Vec<f64> = xi.iter().map(|x| lambda * x).collect();
        let lhs = s.eval(&scaled);
        let rhs = lambda.powf(s.degree()) * s.eval(&xi);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
    }

    #[test]
    fn symbols_are_even_and_positive((i, xi) in symbol_and_point()) {
        prop_assume!(mean_abs(&xi) > 1e-3);
        let s = &suite_symbols()[i];
        let neg: Vec<f64> = xi.iter().map(|x| -x).collect();
        prop_assert_eq!(s.eval(&neg), s.eval(&xi));
        prop_assert!(s.eval(&xi) > 0.0);
    }

    #[test]
    fn operator_is_pointwise_multiplication((i, xi) in symbol_and_point()) {
        let s = &suite_symbols()[i];
        let f = poly_test(s.dimension());
        let pf = s.apply_operator(&f).unwrap();
        let lhs = pf.eval_fourier(&xi);
        let rhs = f.eval_fourier(&xi) * s.eval(&xi);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn ray_derivatives_match_central_differences(
        theta in prop::collection::vec(-1.0..1.0f64, 3),
        t in 0.0..3.0f64,
        m in 0usize..4,
        shift in prop::collection::vec(-1.0..1.0f64, 3),
    ) {
        let norm = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(norm > 0.1);
        let th: Vec<f64> = theta.iter().map(|x| x / norm).collect();
        let f = poly_test(3).translate(&shift);
        let h = 1e-4;
        let exact = f.ray_derivative(&th, m + 1, t).unwrap();
        let fd = (f.ray_derivative(&th, m, t + h).unwrap() - f.ray_derivative(&th, m, t - h).unwrap())
            / (2.0 * h);
        prop_assert!((exact - fd).norm() <= 1e-6 * (1.0 + exact.norm()));
    }

    #[test]
    fn value_at_origin_is_the_mean_of_the_transform(s in 0.5..3.0f64, shift in point(2)) {
        // translate(x0) evaluates f at x0: for a Gaussian that is e^{−s|x0|²/2}
        let g = TestFunction::gaussian(2, s).unwrap().translate(&shift);
        let r2: f64 = shift.iter().map(|x| x * x).sum();
        prop_assert!((g.value_at_origin() - (-0.5 * s * r2).exp()).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pairing_is_linear(
        a in (-2.0..2.0f64, -2.0..2.0f64),
        b in (-2.0..2.0f64, -2.0..2.0f64),
        shift in point(2),
        which in 0usize..3,
    ) {
        let exprs = ["x1^2+x2^2", "x1^4+x2^4", "norm^1.5"];
        let s = parse_symbol(exprs[which], 2).unwrap();
        let (a, b) = (c(a.0, a.1), c(b.0, b.1));
        let f = TestFunction::gaussian(2, 1.0).unwrap();
        let g = poly_test(2).translate(&shift);
        let combo = f.scaled(a).add(&g.scaled(b)).unwrap();
        let cfg = RunConfig { sphere_level: 3, ..RunConfig::default() };
        let lhs = pair_value(&s, &combo, &cfg).unwrap();
        let rhs = pair_value(&s, &f, &cfg).unwrap() * a + pair_value(&s, &g, &cfg).unwrap() * b;
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn real_even_data_give_real_pairings(s in 0.5..3.0f64, which in 0usize..3) {
        let exprs = ["x1^2+x2^2", "x1^4+x2^4", "(x1^2+x2^2)^2"];
        let sym = parse_symbol(exprs[which], 2).unwrap();
        let f = TestFunction::gaussian(2, s).unwrap();
        let cfg = RunConfig { sphere_level: 3, ..RunConfig::default() };
        let v = pair_value(&sym, &f, &cfg).unwrap();
        prop_assert!(v.im.abs() <= 1e-14 * (1.0 + v.re.abs()));
    }
}

fn quartic_kernel() -> &'static ContinuationKernel {
    static CELL: OnceLock<ContinuationKernel> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = parse_symbol("x1^4+x2^4", 2).unwrap();
        let f = TestFunction::gaussian(2, 1.0).unwrap().translate(&[0.4, 0.0]);
        let cfg = RunConfig { sphere_level: 3, ..RunConfig::default() };
        ContinuationKernel::new(&s, &f, 1, &cfg).unwrap()
    })
}

proptest! {
    #[test]
    fn continued_pairing_is_conjugate_symmetric(re in -0.4..2.0f64, im in -1.5..1.5f64) {
        // f is real, so f̂(−ξ) = conj f̂(ξ); with p_k even this gives
        // ⟨𝔭(z̄−1), f⟩ = conj⟨𝔭(z−1), f⟩
        let kernel = quartic_kernel();
        let z = Complex64::new(re, im);
        let near_pole = (0..=kernel.steps()).any(|i| {
            (z * kernel.degree() - kernel.degree() + i as f64).norm() < 1e-6
        });
        prop_assume!(!near_pole);
        let a = kernel.pairing(z).unwrap();
        let b = kernel.pairing(z.conj()).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-11 * (1.0 + a.norm()));
    }
}
