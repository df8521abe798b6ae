//! Sparse multivariate polynomials keyed by exponent vectors.

use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg};

/// Exponent vector `e ∈ ℕⁿ` of a monomial `ξ^e`.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C> Polynomial<C>
where
    C: Clone + Zero + One + Add<Output = C> + Mul<Output = C>,
{
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate `ξ_i` (zero-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, C::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "monomial arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Option<&C> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(e, sum);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Set of total degrees `|e|` present.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|e| e.iter().sum()).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, C::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coefficients<D, F>(&self, f: F) -> Polynomial<D>
    where
        D: Clone + Zero + One + Add<Output = D> + Mul<Output = D>,
        F: Fn(&C) -> D,
    {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Maps each monomial through `g` (e.g. a sign flip for `ξ ↦ −ξ`).
    pub fn map_terms<F>(&self, g: F) -> Self
    where
        F: Fn(&Monomial, &C) -> C,
    {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), g(e, c))),
        )
    }
}

impl<C> Add for &Polynomial<C>
where
    C: Clone + Zero + One + Add<Output = C> + Mul<Output = C>,
{
    type Output = Polynomial<C>;

    fn add(self, rhs: Self) -> Polynomial<C> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C> Mul for &Polynomial<C>
where
    C: Clone + Zero + One + Add<Output = C> + Mul<Output = C>,
{
    type Output = Polynomial<C>;

    fn mul(self, rhs: Self) -> Polynomial<C> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in rhs.terms.iter() {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C> Neg for &Polynomial<C>
where
    C: Clone + Zero + One + Add<Output = C> + Mul<Output = C> + Neg<Output = C>,
{
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        self.map_terms(|_, c| -c.clone())
    }
}

/// `ξ^e` evaluated with integer powers.
pub(crate) fn monomial_value(e: &[u32], xi: &[f64]) -> f64 {
    e.iter()
        .zip(xi)
        .map(|(&p, &x)| if p == 0 { 1.0 } else { x.powi(p as i32) })
        .product()
}
