//! Gamma, digamma and the small combinatorial helpers used by the
//! universal constants and the closed-form oracles.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) by the Lanczos approximation (g = 7), with reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_P[0];
        for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
            acc += p / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Γ(z) for complex arguments, same Lanczos coefficients.
pub fn gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        Complex64::new(PI, 0.0) / (s * gamma_complex(Complex64::new(1.0, 0.0) - z))
    } else {
        let z = z - 1.0;
        let mut acc = Complex64::new(LANCZOS_P[0], 0.0);
        for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
            acc += p / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
    }
}

/// ψ(x) = Γ'(x)/Γ(x). Upward recurrence to x ≥ 12, then the asymptotic series.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.0 {
        // reflection: ψ(1−x) − ψ(x) = π cot(πx)
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 12.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    shift + x.ln() - 0.5 / x - series
}

/// H_m = Σ_{j=1}^{m} 1/j, with H_0 = 0.
pub fn harmonic(m: u32) -> f64 {
    (1..=m).rev().map(|j| 1.0 / j as f64).sum()
}

pub fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// C(m, i) as a float.
pub fn binomial(m: usize, i: usize) -> f64 {
    if i > m {
        return 0.0;
    }
    let i = i.min(m - i);
    (0..i).fold(1.0, |acc, j| acc * (m - j) as f64 / (j + 1) as f64)
}

/// Falling factorial a·(a−1)···(a−i+1).
pub fn falling(a: usize, i: usize) -> f64 {
    if i > a {
        return 0.0;
    }
    (0..i).map(|j| (a - j) as f64).product()
}

/// Surface measure of the unit sphere S^{n−1} ⊂ ℝⁿ.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_integers_and_halves() {
        for m in 1..15u32 {
            let g = gamma(f64::from(m));
            assert!((g / factorial(m - 1) - 1.0).abs() < 1e-13, "m = {m}");
        }
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(0.25) - 3.625_609_908_221_908).abs() < 1e-13);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn complex_gamma_matches_real_axis_and_recurrence() {
        for &x in &[0.3, 1.7, 4.2] {
            let g = gamma_complex(Complex64::new(x, 0.0));
            assert!((g.re - gamma(x)).abs() < 1e-13 * gamma(x).abs());
            assert!(g.im.abs() < 1e-13);
        }
        let z = Complex64::new(0.4, 1.3);
        let lhs = gamma_complex(z + 1.0);
        let rhs = z * gamma_complex(z);
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
    }

    #[test]
    fn digamma_integer_values_are_shifted_harmonic_numbers() {
        for k in 1..20u32 {
            let lhs = EULER_GAMMA + digamma(f64::from(k));
            assert!((lhs - harmonic(k - 1)).abs() < 1e-13, "k = {k}");
        }
        assert!((digamma(0.5) + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(6, 2), 15.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(falling(4, 2), 12.0);
        assert_eq!(falling(2, 3), 0.0);
        assert_eq!(harmonic(0), 0.0);
        assert!((harmonic(3) - 11.0 / 6.0).abs() < 1e-15);
    }
}
