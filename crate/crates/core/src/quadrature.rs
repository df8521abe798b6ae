//! Deterministic quadrature: product rules on S^{n−1}, composite
//! Gauss–Legendre on ℝ₊ with geometric grading toward the origin, and the
//! log-weighted variant for ∫₀^∞ log(u) h(u) du.

use crate::error::{Error, Result};
use crate::parallel::Execution;
use crate::special::gamma;
use num_traits::Zero;
use std::f64::consts::PI;
use std::ops::{AddAssign, Mul};

/// Largest supported ambient dimension.
pub const MAX_DIMENSION: usize = 8;
/// Cap on the number of sphere nodes a single rule may allocate.
pub const MAX_SPHERE_NODES: usize = 1 << 23;

/// Points per panel in the composite radial rules.
pub const PANEL_POINTS: usize = 16;
/// Geometric panels between 0 and the decay length.
pub const GRADED_PANELS: usize = 40;
/// Upper limit on graded panels for strong endpoint singularities.
pub const MAX_GRADED_PANELS: usize = 400;
/// Ratio between consecutive graded panel endpoints.
pub const GRADING_RATIO: f64 = 0.25;
/// Default polynomial-growth allowance in the tail bound.
pub const DEFAULT_GROWTH: u32 = 16;

/// Gauss rule for the weight (1 − x²)^λ on [−1, 1], λ ≥ 0.
///
/// Nodes are the eigenvalues of the Jacobi matrix, isolated by Sturm-sequence
/// bisection and polished by Newton on the orthonormal recurrence; weights
/// come from the Christoffel function.
pub fn gauss_gegenbauer(npts: usize, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(npts >= 1 && lambda >= 0.0);
    let mu = lambda + 0.5;
    // off-diagonal entries sqrt(β_j), j = 1..npts−1
    let beta: Vec<f64> = (1..=npts)
        .map(|j| {
            let j = j as f64;
            j * (j + 2.0 * mu - 1.0) / (4.0 * (j + mu) * (j + mu - 1.0))
        })
        .collect();
    let mass = PI.sqrt() * gamma(lambda + 1.0) / gamma(lambda + 1.5);

    let below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = -x;
        if q < 0.0 {
            count += 1;
        }
        for b in beta.iter().take(npts - 1) {
            let denom = if q == 0.0 { 1e-300 } else { q };
            q = -x - b / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };

    // orthonormal values p̃_0..p̃_npts at x, plus derivative of p̃_npts
    let orthonormal = |x: f64| -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut p = 1.0 / mass.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        let mut christoffel = 0.0;
        for j in 0..npts {
            christoffel += p * p;
            let sb_next = beta[j].sqrt();
            let sb = if j == 0 { 0.0 } else { beta[j - 1].sqrt() };
            let p_next = (x * p - sb * p_prev) / sb_next;
            let d_next = (p + x * d - sb * d_prev) / sb_next;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
        }
        (p, d, christoffel)
    };

    let half = npts / 2;
    let mut nodes = vec![0.0; npts];
    let mut weights = vec![0.0; npts];
    for i in half..npts {
        let x = if npts % 2 == 1 && i == half {
            0.0
        } else {
            // the i-th smallest eigenvalue is where `below` steps past i
            let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if below(mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let mut x = 0.5 * (lo + hi);
            for _ in 0..2 {
                let (p, d, _) = orthonormal(x);
                let dx = p / d;
                if dx.is_finite() && dx.abs() < 1e-10 {
                    x -= dx;
                }
            }
            x
        };
        let (_, _, christoffel) = orthonormal(x);
        nodes[i] = x;
        weights[i] = 1.0 / christoffel;
        let mirror = npts - 1 - i;
        nodes[mirror] = -x;
        weights[mirror] = weights[i];
    }
    (nodes, weights)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(npts: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_gegenbauer(npts, 0.0)
}

/// Product quadrature on the unit sphere S^{n−1}.
#[derive(Debug, Clone)]
pub struct SphereRule {
    dimension: usize,
    level: u32,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Number of nodes per polar angle (n ≥ 3) or on the circle (n = 2).
pub fn sphere_points_per_angle(n: usize, level: u32) -> usize {
    match n {
        2 | 3 => 16usize << level,
        _ => (1usize << level) + 4,
    }
}

/// Builds the product rule on S^{n−1} at the given refinement level.
///
/// n = 2: `16·2^level` equispaced angles. n = 3: Gauss–Legendre in cos φ
/// times a trapezoid in azimuth. n ≥ 4: Gauss–Gegenbauer in each polar
/// angle with weight sin^{n−1−j}, trapezoid in the last angle.
pub fn sphere_rule(n: usize, level: u32) -> Result<SphereRule> {
    if !(2..=MAX_DIMENSION).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if level == 0 {
        return Err(Error::InvalidArgument("sphere level must be ≥ 1".into()));
    }
    if level > 12 {
        return Err(Error::InvalidArgument(format!("sphere level {level} too large")));
    }
    let per_angle = sphere_points_per_angle(n, level);
    let azimuth = if n == 2 { per_angle } else { 2 * per_angle };
    let total = azimuth.saturating_mul(per_angle.saturating_pow((n - 2) as u32));
    if total > MAX_SPHERE_NODES {
        return Err(Error::InvalidArgument(format!(
            "sphere rule with {total} nodes exceeds the cap of {MAX_SPHERE_NODES}"
        )));
    }

    // circle
    let mut dim = 2;
    let mut nodes = Vec::with_capacity(azimuth * 2);
    let mut weights = Vec::with_capacity(azimuth);
    for i in 0..azimuth {
        let phi = 2.0 * PI * i as f64 / azimuth as f64;
        nodes.push(phi.cos());
        nodes.push(phi.sin());
        weights.push(2.0 * PI / azimuth as f64);
    }
    // lift S^{d−2} to S^{d−1}: θ = (t, √(1−t²)·v), weight (1−t²)^{(d−3)/2}
    while dim < n {
        let d = dim + 1;
        let (ts, ws) = gauss_gegenbauer(per_angle, (d as f64 - 3.0) / 2.0);
        let mut next_nodes = Vec::with_capacity(nodes.len() / dim * d * per_angle);
        let mut next_weights = Vec::with_capacity(weights.len() * per_angle);
        for (&t, &wt) in ts.iter().zip(&ws) {
            let s = (1.0 - t * t).sqrt();
            for (v, &wv) in nodes.chunks_exact(dim).zip(&weights) {
                next_nodes.push(t);
                next_nodes.extend(v.iter().map(|x| s * x));
                next_weights.push(wt * wv);
            }
        }
        nodes = next_nodes;
        weights = next_weights;
        dim = d;
    }
    let order = if n == 2 { per_angle - 1 } else { 2 * per_angle - 1 };
    Ok(SphereRule {
        dimension: n,
        level,
        order,
        nodes,
        weights,
    })
}

impl SphereRule {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Polynomial exactness degree.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.dimension)
    }

    /// ∫_{S^{n−1}} f(θ) dθ.
    pub fn integrate<T, F>(&self, exec: Execution, f: F) -> T
    where
        T: Copy + Zero + AddAssign + Mul<f64, Output = T> + Send,
        F: Fn(&[f64]) -> T + Sync,
    {
        exec.sum(self.len(), |i| f(self.node(i)) * self.weights[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialVariant {
    Plain,
    /// Weights carry a factor log(r): the rule computes ∫₀^∞ log(u) h(u) du.
    LogWeighted,
}

/// Composite Gauss–Legendre rule on [0, R] ⊂ ℝ₊.
#[derive(Debug, Clone)]
pub struct RadialRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    truncation: f64,
    variant: RadialVariant,
    decay_width: f64,
    eps_tail: f64,
    panels: usize,
    graded: usize,
    growth: u32,
}

/// A quadrature value together with a two-resolution error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

/// Smallest R ≥ 2/√s with e^{−sR²/2}(1+R)^D ≤ eps.
fn truncation_radius(decay_width: f64, eps_tail: f64, growth: u32) -> f64 {
    let target = -eps_tail.ln();
    let excess = |r: f64| 0.5 * decay_width * r * r - f64::from(growth) * (1.0 + r).ln() - target;
    let mut hi = 2.0 / decay_width.sqrt();
    if excess(hi) >= 0.0 {
        return hi;
    }
    let mut lo = hi;
    while excess(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Builds the radial rule for integrands decaying like e^{−s r²/2}.
pub fn radial_rule(decay_width: f64, eps_tail: f64, panels: usize) -> Result<RadialRule> {
    RadialRule::build(decay_width, eps_tail, panels, GRADED_PANELS, DEFAULT_GROWTH)
}

impl RadialRule {
    fn build(
        decay_width: f64,
        eps_tail: f64,
        panels: usize,
        graded: usize,
        growth: u32,
    ) -> Result<Self> {
        if !(eps_tail > 0.0 && eps_tail < 1.0) {
            return Err(Error::BadTolerance(eps_tail));
        }
        if !(decay_width > 0.0 && decay_width.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "decay width must be positive, got {decay_width}"
            )));
        }
        if panels == 0 {
            return Err(Error::InvalidArgument("radial panels must be ≥ 1".into()));
        }
        let scale = 1.0 / decay_width.sqrt();
        let truncation = truncation_radius(decay_width, eps_tail, growth);

        let mut breaks = vec![0.0];
        for i in (0..=graded).rev() {
            breaks.push(scale * GRADING_RATIO.powi(i as i32));
        }
        let h = (truncation - scale) / panels as f64;
        for i in 1..=panels {
            breaks.push(scale + h * i as f64);
        }

        let (gx, gw) = gauss_legendre(PANEL_POINTS);
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * PANEL_POINTS);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Ok(Self {
            nodes,
            weights,
            truncation,
            variant: RadialVariant::Plain,
            decay_width,
            eps_tail,
            panels,
            graded,
            growth,
        })
    }

    /// Same rule with a tail bound that tolerates polynomial growth of the
    /// integrand up to the given degree.
    pub fn with_growth(&self, growth: u32) -> Result<Self> {
        let rule = Self::build(
            self.decay_width,
            self.eps_tail,
            self.panels,
            self.graded,
            growth,
        )?;
        Ok(match self.variant {
            RadialVariant::Plain => rule,
            RadialVariant::LogWeighted => rule.log_weighted(),
        })
    }

    /// Same rule with grading deep enough for an endpoint factor r^β,
    /// β > −1: the unresolved innermost panel [0, a] then contributes
    /// O(a^{1+β}) ≤ 1e-16 relative to the decay length.
    pub fn with_singularity(&self, beta: f64) -> Result<Self> {
        if !(beta > -1.0) {
            return Err(Error::InvalidArgument(format!(
                "endpoint power r^{beta} is not integrable"
            )));
        }
        if beta >= 0.0 {
            return Ok(self.clone());
        }
        let needed = (16.0 * 10f64.ln() / ((1.0 + beta) * GRADING_RATIO.recip().ln())).ceil();
        let graded = (needed as usize).clamp(self.graded, MAX_GRADED_PANELS);
        let rule = Self::build(
            self.decay_width,
            self.eps_tail,
            self.panels,
            graded,
            self.growth,
        )?;
        Ok(match self.variant {
            RadialVariant::Plain => rule,
            RadialVariant::LogWeighted => rule.log_weighted(),
        })
    }

    /// Variant whose weights include log(r).
    pub fn log_weighted(mut self) -> Self {
        if self.variant == RadialVariant::Plain {
            for (w, r) in self.weights.iter_mut().zip(&self.nodes) {
                *w *= r.ln();
            }
            self.variant = RadialVariant::LogWeighted;
        }
        self
    }

    /// Coarser companion rule (half the panels, half the grading) used for
    /// the two-level error estimate.
    pub fn coarsened(&self) -> Result<Self> {
        let rule = Self::build(
            self.decay_width,
            self.eps_tail,
            (self.panels / 2).max(1),
            self.graded / 2,
            self.growth,
        )?;
        Ok(match self.variant {
            RadialVariant::Plain => rule,
            RadialVariant::LogWeighted => rule.log_weighted(),
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn variant(&self) -> RadialVariant {
        self.variant
    }

    pub fn decay_width(&self) -> f64 {
        self.decay_width
    }

    pub fn eps_tail(&self) -> f64 {
        self.eps_tail
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Σ w_i h(r_i); includes log(r) when the rule is log-weighted.
    pub fn integrate<T, F>(&self, h: F) -> T
    where
        T: Copy + Zero + AddAssign + Mul<f64, Output = T>,
        F: Fn(f64) -> T,
    {
        let mut acc = T::zero();
        for (&r, &w) in self.nodes.iter().zip(&self.weights) {
            acc += h(r) * w;
        }
        acc
    }
}

/// ∫₀^∞ log(u) h(u) du with a two-level error estimate.
pub fn log_weighted_integral<F>(h: F, rule: &RadialRule) -> Result<Estimate<f64>>
where
    F: Fn(f64) -> f64,
{
    let apply = |rule: &RadialRule| match rule.variant {
        RadialVariant::Plain => rule.integrate(|u| u.ln() * h(u)),
        RadialVariant::LogWeighted => rule.integrate(&h),
    };
    let value = apply(rule);
    let coarse = apply(&rule.coarsened()?);
    Ok(Estimate {
        value,
        error: (value - coarse).abs(),
    })
}
