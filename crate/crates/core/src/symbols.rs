//! Homogeneous elliptic symbols p_k: parsing, validation, evaluation, and
//! the action of P(D) on test functions as a Fourier multiplier.

use crate::error::{Error, Result};
use crate::poly::{monomial_value, Polynomial};
use crate::schwartz::TestFunction;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::PI;

/// Symbols whose estimated minimum over the sphere is at or below this are
/// rejected as non-elliptic.
pub const ELLIPTICITY_THRESHOLD: f64 = 1e-9;
/// Tolerance on |θ| − 1 for sphere restrictions.
pub const UNIT_TOLERANCE: f64 = 1e-12;
/// Largest exponent accepted after `^` in an expression.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolForm {
    /// Σ c_e ξ^e with exact rational coefficients.
    Polynomial(Polynomial<BigRational>),
    /// c·|ξ|^α.
    RadialPower { scale: f64, exponent: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousSymbol {
    dimension: usize,
    degree: f64,
    form: SymbolForm,
    float_terms: Vec<(Vec<u32>, f64)>,
    ellipticity_margin: f64,
    sphere_max: f64,
}

impl HomogeneousSymbol {
    /// Validates a polynomial symbol: homogeneous, of even positive degree,
    /// and positive on the sphere.
    pub fn from_polynomial(poly: Polynomial<BigRational>) -> Result<Self> {
        let n = poly.nvars();
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if poly.is_zero() {
            return Err(Error::InvalidSymbol("zero polynomial".into()));
        }
        let degrees: Vec<u32> = poly.degrees().into_iter().collect();
        if degrees.len() > 1 {
            return Err(Error::NotHomogeneous { degrees });
        }
        let k = degrees[0];
        if k == 0 {
            return Err(Error::InvalidSymbol("constant symbol has degree 0".into()));
        }
        if k % 2 == 1 {
            return Err(Error::OddDegree(k));
        }
        let float_terms: Vec<(Vec<u32>, f64)> = poly
            .terms()
            .map(|(e, c)| (e.clone(), c.to_f64().unwrap_or(f64::NAN)))
            .collect();
        let mut symbol = Self {
            dimension: n,
            degree: f64::from(k),
            form: SymbolForm::Polynomial(poly),
            float_terms,
            ellipticity_margin: 0.0,
            sphere_max: 0.0,
        };
        let (lo, hi) = symbol.sphere_extrema();
        if !(lo > ELLIPTICITY_THRESHOLD) {
            return Err(Error::NotElliptic { margin: lo });
        }
        symbol.ellipticity_margin = lo;
        symbol.sphere_max = hi;
        Ok(symbol)
    }

    /// c·|ξ|^α on ℝⁿ.
    pub fn radial_power(n: usize, scale: f64, exponent: f64) -> Result<Self> {
        if !(2..=crate::quadrature::MAX_DIMENSION).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidSymbol(format!("radial scale must be positive, got {scale}")));
        }
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidSymbol(format!(
                "radial exponent must be positive, got {exponent}"
            )));
        }
        Ok(Self {
            dimension: n,
            degree: exponent,
            form: SymbolForm::RadialPower { scale, exponent },
            float_terms: Vec::new(),
            ellipticity_margin: scale,
            sphere_max: scale,
        })
    }

    /// |ξ|² = Σ ξ_i², the symbol of −Δ.
    pub fn laplacian(n: usize) -> Result<Self> {
        Self::from_polynomial(sum_of_squares(n))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// k (or α for radial powers).
    pub fn degree(&self) -> f64 {
        self.degree
    }

    /// The degree as an integer when it is one.
    pub fn integer_degree(&self) -> Option<u32> {
        (self.degree.fract() == 0.0 && self.degree <= f64::from(u32::MAX)).then_some(self.degree as u32)
    }

    pub fn form(&self) -> &SymbolForm {
        &self.form
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.form, SymbolForm::Polynomial(_))
    }

    /// Estimated min of p_k over S^{n−1}.
    pub fn ellipticity_margin(&self) -> f64 {
        self.ellipticity_margin
    }

    /// Estimated max of p_k over S^{n−1}.
    pub fn sphere_max(&self) -> f64 {
        self.sphere_max
    }

    /// p_k(ξ).
    pub fn eval(&self, xi: &[f64]) -> f64 {
        assert_eq!(xi.len(), self.dimension, "point dimension");
        match self.form {
            SymbolForm::Polynomial(_) => self
                .float_terms
                .iter()
                .map(|(e, c)| c * monomial_value(e, xi))
                .sum(),
            SymbolForm::RadialPower { scale, exponent } => {
                let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
                scale * r.powf(exponent)
            }
        }
    }

    /// p_k(θ) for a unit vector θ.
    pub fn restrict_to_sphere(&self, theta: &[f64]) -> Result<f64> {
        let norm = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit(norm));
        }
        Ok(self.eval(theta))
    }

    fn gradient(&self, xi: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dimension];
        for (e, c) in &self.float_terms {
            for i in 0..self.dimension {
                if e[i] == 0 {
                    continue;
                }
                let mut d = e.clone();
                d[i] -= 1;
                g[i] += c * f64::from(e[i]) * monomial_value(&d, xi);
            }
        }
        g
    }

    /// The symbol as a complex-coefficient polynomial, when it is one.
    /// Radial powers with even integer exponent expand to c·(Σξ²)^{α/2}.
    pub fn multiplier(&self) -> Result<Polynomial<Complex64>> {
        match &self.form {
            SymbolForm::Polynomial(p) => {
                Ok(p.map_coefficients(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)))
            }
            SymbolForm::RadialPower { scale, exponent } => {
                if exponent.fract() == 0.0 && (*exponent as u64).is_multiple_of(2) {
                    let base = sum_of_squares(self.dimension)
                        .map_coefficients(|c| Complex64::new(c.to_f64().unwrap_or(0.0), 0.0));
                    Ok(base
                        .pow((*exponent as u32) / 2)
                        .scale(&Complex64::new(*scale, 0.0)))
                } else {
                    Err(Error::UnsupportedSymbolForm(format!(
                        "|ξ|^{exponent} does not act within polynomial × Gaussian test functions"
                    )))
                }
            }
        }
    }

    /// P(D)f, i.e. the test function with transform p_k(ξ)·f̂(ξ).
    pub fn apply_operator(&self, f: &TestFunction) -> Result<TestFunction> {
        if f.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: f.dimension(),
            });
        }
        f.multiplied(&self.multiplier()?)
    }

    /// Dense scan of the sphere followed by projected-gradient refinement of
    /// the best candidates. Returns (min, max).
    fn sphere_extrema(&self) -> (f64, f64) {
        let points = scan_points(self.dimension);
        let mut scored: Vec<(f64, usize)> = points
            .chunks_exact(self.dimension)
            .enumerate()
            .map(|(i, th)| (self.eval(th), i))
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        let pick = |idx: usize| points[idx * self.dimension..(idx + 1) * self.dimension].to_vec();
        let candidates = 8.min(scored.len());
        let mut lo = scored[0].0;
        for &(_, idx) in scored.iter().take(candidates) {
            lo = lo.min(self.refine(pick(idx), 1.0));
        }
        let mut hi = scored[scored.len() - 1].0;
        for &(_, idx) in scored.iter().rev().take(candidates) {
            hi = hi.max(-self.refine(pick(idx), -1.0));
        }
        (lo, hi)
    }

    /// Minimizes sign·p over the sphere from `theta`; returns the final sign·p.
    fn refine(&self, mut theta: Vec<f64>, sign: f64) -> f64 {
        let mut value = sign * self.eval(&theta);
        let mut step = 0.1;
        for _ in 0..400 {
            let g = self.gradient(&theta);
            let radial: f64 = g.iter().zip(&theta).map(|(a, b)| a * b).sum();
            let tangent: Vec<f64> = g
                .iter()
                .zip(&theta)
                .map(|(gi, ti)| sign * (gi - radial * ti))
                .collect();
            let tnorm = tangent.iter().map(|x| x * x).sum::<f64>().sqrt();
            if tnorm < 1e-15 {
                break;
            }
            loop {
                let trial = normalized(
                    theta
                        .iter()
                        .zip(&tangent)
                        .map(|(t, d)| t - step * d / tnorm)
                        .collect(),
                );
                let v = sign * self.eval(&trial);
                if v < value {
                    theta = trial;
                    value = v;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
                if step < 1e-15 {
                    return value;
                }
            }
        }
        value
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Σ ξ_i² with exact coefficients.
pub fn sum_of_squares(n: usize) -> Polynomial<BigRational> {
    Polynomial::from_terms(
        n,
        (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            (e, BigRational::one())
        }),
    )
}

/// Hyperspherical grid used by the ellipticity scan: ≥10⁴ points for n ≤ 3,
/// about 2·10⁵ product-grid points for n ≥ 4.
fn scan_points(n: usize) -> Vec<f64> {
    let (polar, azimuth) = match n {
        2 => (0, 16_384),
        3 => (128, 256),
        _ => {
            let per = ((1e5f64).powf(1.0 / (n - 1) as f64).floor() as usize).max(4);
            (per, 2 * per)
        }
    };
    let mut pts: Vec<f64> = Vec::new();
    let mut dim = 2;
    for i in 0..azimuth {
        let phi = 2.0 * PI * (i as f64 + 0.5) / azimuth as f64;
        pts.push(phi.cos());
        pts.push(phi.sin());
    }
    while dim < n {
        let mut next = Vec::with_capacity(pts.len() / dim * (dim + 1) * polar);
        for j in 0..polar {
            let phi = PI * (j as f64 + 0.5) / polar as f64;
            let (s, c) = phi.sin_cos();
            for v in pts.chunks_exact(dim) {
                next.push(c);
                next.extend(v.iter().map(|x| s * x));
            }
        }
        pts = next;
        dim += 1;
    }
    pts
}

/// Parses and validates a symbol expression in `dimension` variables.
///
/// Grammar: sums and products of `x1..xn`, rational literals (`3`, `0.5`,
/// `3/4`), parentheses and natural powers `^k`; or the radial form
/// `[c*]norm[^a]`, which must make up the whole expression.
pub fn parse_symbol(text: &str, dimension: usize) -> Result<HomogeneousSymbol> {
    let tokens = lex(text)?;
    if tokens.iter().any(|t| t.kind == Tok::Norm) {
        let (scale, exponent) = parse_radial(&tokens, text.len())?;
        return HomogeneousSymbol::radial_power(dimension, scale, exponent);
    }
    if dimension < 2 {
        return Err(Error::UnsupportedDimension(dimension));
    }
    let poly = Parser::new(&tokens, dimension, text.len()).parse_all()?;
    HomogeneousSymbol::from_polynomial(poly)
}

/// Parses a (not necessarily homogeneous) polynomial in `x1..xn`.
pub fn parse_polynomial(text: &str, dimension: usize) -> Result<Polynomial<BigRational>> {
    let tokens = lex(text)?;
    if let Some(t) = tokens.iter().find(|t| t.kind == Tok::Norm) {
        return Err(Error::Parse {
            pos: t.pos,
            msg: "`norm` is not a polynomial".into(),
        });
    }
    Parser::new(&tokens, dimension, text.len()).parse_all()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number { value: BigRational, natural: Option<u32>, text: String },
    Var(usize),
    Norm,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    kind: Tok,
    pos: usize,
}

fn parse_error(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        let simple = match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(kind) = simple {
            out.push(Token { kind, pos: start });
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() || ch == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let mut literal = text[start..i].to_string();
            if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                let den_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                literal = format!("{}/{}", literal, &text[den_start..i]);
            }
            let (value, natural) = parse_literal(&literal).ok_or_else(|| {
                parse_error(start, format!("malformed number {literal:?}"))
            })?;
            out.push(Token {
                kind: Tok::Number {
                    value,
                    natural,
                    text: literal,
                },
                pos: start,
            });
            continue;
        }
        if ch == b'x' {
            i += 1;
            let num_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let idx: usize = text[num_start..i]
                .parse()
                .map_err(|_| parse_error(start, "expected variable index after `x`"))?;
            if idx == 0 {
                return Err(parse_error(start, "variables are 1-indexed"));
            }
            out.push(Token {
                kind: Tok::Var(idx),
                pos: start,
            });
            continue;
        }
        if text[i..].starts_with("norm") {
            i += 4;
            out.push(Token {
                kind: Tok::Norm,
                pos: start,
            });
            continue;
        }
        let bad = text[i..].chars().next().unwrap_or('?');
        return Err(parse_error(start, format!("unexpected character {bad:?}")));
    }
    Ok(out)
}

/// Exact value of `123`, `1.25`, or `3/4`; `natural` is set for plain integers.
fn parse_literal(s: &str) -> Option<(BigRational, Option<u32>)> {
    if let Some((num, den)) = s.split_once('/') {
        if num.contains('.') {
            return None;
        }
        let n: BigInt = num.parse().ok()?;
        let d: BigInt = den.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some((BigRational::new(n, d), None));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
            return None;
        }
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().ok()?;
        let d = BigInt::from(10u32).pow(frac.len() as u32);
        return Some((BigRational::new(n, d), None));
    }
    let n: BigInt = s.parse().ok()?;
    let natural = n.to_u32();
    Some((BigRational::from_integer(n), natural))
}

/// `[c '*'] norm ['^' a]` as the entire expression.
fn parse_radial(tokens: &[Token], end: usize) -> Result<(f64, f64)> {
    let mut i = 0;
    let mut scale = 1.0;
    if let Some(Token {
        kind: Tok::Number { value, .. },
        ..
    }) = tokens.first()
    {
        scale = value.to_f64().unwrap_or(f64::NAN);
        match tokens.get(1) {
            Some(Token { kind: Tok::Star, .. }) => i = 2,
            Some(t) => return Err(parse_error(t.pos, "expected `*` between scale and `norm`")),
            None => return Err(parse_error(end, "expected `*norm`")),
        }
    }
    match tokens.get(i) {
        Some(Token { kind: Tok::Norm, .. }) => i += 1,
        Some(t) => {
            return Err(parse_error(
                t.pos,
                "`norm^a` must be the entire expression, optionally scaled as `c*norm^a`",
            ))
        }
        None => return Err(parse_error(end, "expected `norm`")),
    }
    let mut exponent = 1.0;
    if let Some(Token { kind: Tok::Caret, pos }) = tokens.get(i) {
        match tokens.get(i + 1) {
            Some(Token {
                kind: Tok::Number { text, .. },
                ..
            }) => {
                exponent = text
                    .parse::<f64>()
                    .map_err(|_| parse_error(*pos + 1, "exponent of `norm` must be a decimal"))?;
                i += 2;
            }
            _ => return Err(parse_error(*pos, "expected a positive decimal after `norm^`")),
        }
    }
    if let Some(t) = tokens.get(i) {
        return Err(parse_error(
            t.pos,
            "`norm^a` must be the entire expression, optionally scaled as `c*norm^a`",
        ));
    }
    if !(scale > 0.0) {
        return Err(Error::InvalidSymbol(format!("radial scale must be positive, got {scale}")));
    }
    Ok((scale, exponent))
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    nvars: usize,
    end: usize,
}

type RPoly = Polynomial<BigRational>;

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token], nvars: usize, end: usize) -> Self {
        Self {
            tokens,
            pos: 0,
            nvars,
            end,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.pos)
    }

    fn parse_all(mut self) -> Result<RPoly> {
        if self.tokens.is_empty() {
            return Err(parse_error(0, "empty expression"));
        }
        let p = self.expr()?;
        if self.pos != self.tokens.len() {
            return Err(parse_error(self.here(), "unexpected trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<RPoly> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &(-&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RPoly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RPoly> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            let caret = self.here();
            self.pos += 1;
            let k = match self.peek() {
                Some(Tok::Number {
                    natural: Some(k), ..
                }) => *k,
                _ => return Err(parse_error(caret, "exponent must be a natural number")),
            };
            if k > MAX_EXPONENT {
                return Err(parse_error(caret, format!("exponent {k} exceeds {MAX_EXPONENT}")));
            }
            self.pos += 1;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RPoly> {
        let pos = self.here();
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| parse_error(pos, "unexpected end of expression"))?;
        self.pos += 1;
        match tok {
            Tok::Var(i) => {
                if i > self.nvars {
                    return Err(parse_error(
                        pos,
                        format!("variable x{i} out of range for dimension {}", self.nvars),
                    ));
                }
                Ok(RPoly::variable(self.nvars, i - 1))
            }
            Tok::Number { value, .. } => Ok(RPoly::constant(self.nvars, value)),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(parse_error(self.here(), "expected `)`")),
                }
            }
            _ => Err(parse_error(pos, "expected a variable, number or `(`")),
        }
    }
}
