//! Fourier-side test functions: finite sums of polynomial × Gaussian ×
//! plane-wave terms, with exact evaluation, exact ray derivatives, and a
//! closed-form value at the origin.

use crate::error::{Error, Result};
use crate::poly::{monomial_value, Polynomial};
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Largest derivative order accepted by the ray recurrences.
pub const MAX_DERIVATIVE: usize = 64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// One term `poly(ξ)·e^{−w|ξ|²/2}·e^{i⟨b,ξ⟩}` of f̂.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussTerm {
    pub poly: Polynomial<Complex64>,
    pub width: f64,
    pub modulation: Vec<f64>,
}

/// A Schwartz test function stored through its Fourier transform
/// f̂(ξ) = ∫ e^{−i⟨y,ξ⟩} f(y) dy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TestFunctionRepr", into = "TestFunctionRepr")]
pub struct TestFunction {
    dimension: usize,
    terms: Vec<GaussTerm>,
}

impl GaussTerm {
    fn eval(&self, xi: &[f64]) -> Complex64 {
        let mut q = Complex64::zero();
        for (e, c) in self.poly.terms() {
            q += c * monomial_value(e, xi);
        }
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let phase: f64 = xi.iter().zip(&self.modulation).map(|(x, b)| x * b).sum();
        q * Complex64::from_polar((-0.5 * self.width * r2).exp(), phase)
    }
}

impl TestFunction {
    pub fn new(dimension: usize, terms: Vec<GaussTerm>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        for t in &terms {
            if !(t.width > 0.0 && t.width.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "Gaussian width must be positive, got {}",
                    t.width
                )));
            }
            if t.poly.nvars() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: t.poly.nvars(),
                });
            }
            if t.modulation.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: t.modulation.len(),
                });
            }
        }
        Ok(Self { dimension, terms })
    }

    /// f(x) = e^{−s|x|²/2}; stored as f̂(ξ) = (2π/s)^{n/2} e^{−|ξ|²/(2s)}.
    pub fn gaussian(n: usize, s: f64) -> Result<Self> {
        Self::poly_gaussian(Polynomial::constant(n, Complex64::new(1.0, 0.0)), s)
    }

    /// f̂(ξ) = q(ξ)·(2π/s)^{n/2} e^{−|ξ|²/(2s)}: the Gaussian of
    /// [`TestFunction::gaussian`] with a polynomial prefactor on the Fourier side.
    pub fn poly_gaussian(q: Polynomial<Complex64>, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Gaussian parameter must be positive, got {s}"
            )));
        }
        let n = q.nvars();
        let amplitude = (2.0 * PI / s).powf(n as f64 / 2.0);
        Self::new(
            n,
            vec![GaussTerm {
                poly: q.scale(&Complex64::new(amplitude, 0.0)),
                width: 1.0 / s,
                modulation: vec![0.0; n],
            }],
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn terms(&self) -> &[GaussTerm] {
        &self.terms
    }

    /// Smallest Gaussian width among the terms (slowest decay).
    pub fn min_width(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.width)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.poly.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| GaussTerm {
                poly: t.poly.scale(&c),
                ..t.clone()
            })
            .collect();
        Self {
            dimension: self.dimension,
            terms,
        }
    }

    /// Sum of two test functions (term lists concatenated).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            dimension: self.dimension,
            terms,
        })
    }

    /// Multiplies every term's polynomial by `q` (a Fourier multiplier).
    pub fn multiplied(&self, q: &Polynomial<Complex64>) -> Result<Self> {
        if q.nvars() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: q.nvars(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|t| GaussTerm {
                poly: &t.poly * q,
                ..t.clone()
            })
            .collect();
        Ok(Self {
            dimension: self.dimension,
            terms,
        })
    }

    /// f̂(ξ).
    pub fn eval_fourier(&self, xi: &[f64]) -> Complex64 {
        assert_eq!(xi.len(), self.dimension, "point dimension");
        self.terms.iter().map(|t| t.eval(xi)).sum()
    }

    /// ∂_r^m [f̂(rθ)] at r.
    pub fn ray_derivative(&self, theta: &[f64], m: usize, r: f64) -> Result<Complex64> {
        Ok(self.ray_profile(theta, m)?.eval(m, r))
    }

    /// Precomputes the one-dimensional restriction t ↦ f̂(tθ) together with
    /// its derivatives up to `max_order`.
    pub fn ray_profile(&self, theta: &[f64], max_order: usize) -> Result<RayProfile> {
        if max_order > MAX_DERIVATIVE {
            return Err(Error::DepthExceeded {
                requested: max_order,
                max: MAX_DERIVATIVE,
            });
        }
        assert_eq!(theta.len(), self.dimension, "direction dimension");
        let norm2: f64 = theta.iter().map(|x| x * x).sum();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let deg = t.poly.total_degree() as usize;
                let mut q0 = vec![Complex64::zero(); deg + 1];
                for (e, c) in t.poly.terms() {
                    let j: u32 = e.iter().sum();
                    q0[j as usize] += c * monomial_value(e, theta);
                }
                let a = 0.5 * t.width * norm2;
                let beta: f64 = theta.iter().zip(&t.modulation).map(|(x, b)| x * b).sum();
                let mut derivs = Vec::with_capacity(max_order + 1);
                derivs.push(q0);
                for _ in 0..max_order {
                    let q = derivs.last().unwrap();
                    derivs.push(ray_step(q, a, beta));
                }
                RayTerm { derivs, a, beta }
            })
            .collect();
        Ok(RayProfile { terms, max_order })
    }

    /// f(0) = (2π)^{−n} ∫ f̂(ξ) dξ, in closed form from Gaussian moments.
    pub fn value_at_origin(&self) -> Complex64 {
        let n = self.dimension;
        let mut total = Complex64::zero();
        for t in &self.terms {
            let max_exp = t
                .poly
                .terms()
                .flat_map(|(e, _)| e.iter().copied())
                .max()
                .unwrap_or(0) as usize;
            let moments: Vec<Vec<Complex64>> = t
                .modulation
                .iter()
                .map(|&b| gaussian_moments(t.width, b, max_exp))
                .collect();
            for (e, c) in t.poly.terms() {
                let mut v = *c;
                for (axis, &p) in e.iter().enumerate() {
                    v *= moments[axis][p as usize];
                }
                total += v;
            }
        }
        total / (2.0 * PI).powi(n as i32)
    }

    /// The test function y ↦ f(x₀ − y), whose pairing with a distribution S
    /// is (S ∗ f)(x₀). Fourier side: f̂(−ξ)·e^{−i⟨x₀,ξ⟩}.
    pub fn translate(&self, x0: &[f64]) -> Self {
        assert_eq!(x0.len(), self.dimension, "shift dimension");
        let terms = self
            .terms
            .iter()
            .map(|t| GaussTerm {
                poly: t.poly.map_terms(|e, c| {
                    if e.iter().sum::<u32>() % 2 == 1 {
                        -c
                    } else {
                        *c
                    }
                }),
                width: t.width,
                modulation: t.modulation.iter().zip(x0).map(|(b, x)| -b - x).collect(),
            })
            .collect();
        Self {
            dimension: self.dimension,
            terms,
        }
    }

    /// Upper bound of |f̂(ξ)| over |ξ| ≥ radius, from the term-wise bound
    /// Σ|c_e|·ρ^{|e|}·e^{−wρ²/2} evaluated past each term's peak.
    pub fn tail_bound(&self, radius: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let deg = f64::from(t.poly.total_degree());
                let peak = (deg / t.width).sqrt();
                let rho = radius.max(peak);
                let coeff: f64 = t
                    .poly
                    .terms()
                    .map(|(e, c)| c.norm() * rho.powi(e.iter().sum::<u32>() as i32))
                    .sum();
                coeff * (-0.5 * t.width * rho * rho).exp()
            })
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("test function serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

/// Q ↦ Q' + Q·(−2a t + iβ), the derivative of Q(t)e^{−at²+iβt} divided by the exponential.
fn ray_step(q: &[Complex64], a: f64, beta: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); q.len() + 1];
    for (j, &c) in q.iter().enumerate() {
        if j > 0 {
            out[j - 1] += c * j as f64;
        }
        out[j] += c * Complex64::new(0.0, beta);
        out[j + 1] += c * (-2.0 * a);
    }
    out
}

/// M_j = ∫ ξ^j e^{−wξ²/2 + ibξ} dξ for j ≤ max.
fn gaussian_moments(w: f64, b: f64, max: usize) -> Vec<Complex64> {
    let mut m = Vec::with_capacity(max + 1);
    m.push(Complex64::new(
        (2.0 * PI / w).sqrt() * (-b * b / (2.0 * w)).exp(),
        0.0,
    ));
    for j in 0..max {
        let prev = if j == 0 { Complex64::zero() } else { m[j - 1] };
        let next = (I * b * m[j] + prev * j as f64) / w;
        m.push(next);
    }
    m
}

#[derive(Debug, Clone)]
struct RayTerm {
    derivs: Vec<Vec<Complex64>>,
    a: f64,
    beta: f64,
}

/// t ↦ f̂(tθ) and its first `max_order` derivatives, as polynomial ×
/// exponential pieces.
#[derive(Debug, Clone)]
pub struct RayProfile {
    terms: Vec<RayTerm>,
    max_order: usize,
}

fn horner(q: &[Complex64], t: f64) -> Complex64 {
    q.iter().rev().fold(Complex64::zero(), |acc, &c| acc * t + c)
}

impl RayProfile {
    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// ∂_t^m f̂(tθ) at t.
    pub fn eval(&self, m: usize, t: f64) -> Complex64 {
        assert!(m <= self.max_order);
        self.terms
            .iter()
            .map(|term| horner(&term.derivs[m], t) * term.exponential(t))
            .sum()
    }

    /// Writes derivatives of orders `0..out.len()` at t into `out`.
    pub fn eval_orders(&self, t: f64, out: &mut [Complex64]) {
        assert!(out.len() <= self.max_order + 1);
        out.iter_mut().for_each(|v| *v = Complex64::zero());
        for term in &self.terms {
            let e = term.exponential(t);
            for (m, v) in out.iter_mut().enumerate() {
                *v += horner(&term.derivs[m], t) * e;
            }
        }
    }

    /// Value only, with a precomputed real Gaussian factor per term.
    /// `gauss[i]` must equal e^{−a_i t²} for term i.
    pub(crate) fn eval_with_gauss(&self, t: f64, gauss: &[f64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for (term, &g) in self.terms.iter().zip(gauss) {
            let p = horner(&term.derivs[0], t);
            if term.beta == 0.0 {
                acc += p * g;
            } else {
                acc += p * Complex64::from_polar(g, term.beta * t);
            }
        }
        acc
    }

    pub(crate) fn term_exponents(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.a)
    }
}

impl RayTerm {
    fn exponential(&self, t: f64) -> Complex64 {
        let g = (-self.a * t * t).exp();
        if self.beta == 0.0 {
            Complex64::new(g, 0.0)
        } else {
            Complex64::from_polar(g, self.beta * t)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    poly: BTreeMap<String, [f64; 2]>,
    width: f64,
    modulation: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TestFunctionRepr {
    dimension: usize,
    terms: Vec<TermRepr>,
}

impl From<TestFunction> for TestFunctionRepr {
    fn from(f: TestFunction) -> Self {
        let terms = f
            .terms
            .iter()
            .map(|t| TermRepr {
                poly: t
                    .poly
                    .terms()
                    .map(|(e, c)| {
                        let key = e.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                        (key, [c.re, c.im])
                    })
                    .collect(),
                width: t.width,
                modulation: t.modulation.clone(),
            })
            .collect();
        Self {
            dimension: f.dimension,
            terms,
        }
    }
}

impl TryFrom<TestFunctionRepr> for TestFunction {
    type Error = Error;

    fn try_from(repr: TestFunctionRepr) -> Result<Self> {
        let n = repr.dimension;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let mut monomials = Vec::with_capacity(t.poly.len());
            for (key, [re, im]) in t.poly {
                let e = key
                    .split(',')
                    .map(|s| s.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidArgument(format!("bad exponent tuple {key:?}")))?;
                if e.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: e.len(),
                    });
                }
                monomials.push((e, Complex64::new(re, im)));
            }
            terms.push(GaussTerm {
                poly: Polynomial::from_terms(n, monomials),
                width: t.width,
                modulation: t.modulation,
            });
        }
        TestFunction::new(n, terms)
    }
}
