//! The meromorphic family z ↦ ⟨𝔭(z−1), f⟩ = (2π)^{−n} ∫ p_k(ξ)^{z−1} f̂(ξ) dξ.
//!
//! In the coordinates y = r·p_k(θ)^{1/k} the pairing becomes the Mellin
//! transform (2π)^{−n} ∫₀^∞ y^{kz−k} G(y) dy of the amplitude
//!
//!   G(y) = y^{n−1} ∫ f̂(y p_k(θ)^{−1/k} θ) p_k(θ)^{−n/k} dθ.
//!
//! Integrating by parts m times gives
//!
//!   (2π)^{−n} (−1)^m ∏_{i=1}^{m} (kz−k+i)^{−1} ∫₀^∞ y^{kz−k+m} ∂^m G(y) dy,
//!
//! which is holomorphic for Re z > 1 − (max(m, n−1)+1)/k away from the
//! zeros of the product. Laurent coefficients come from a trapezoid rule on
//! a circle, which is spectrally accurate for this integrand.

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::parallel::Execution;
use crate::quadrature::{radial_rule, sphere_rule, RadialRule, SphereRule};
use crate::schwartz::{TestFunction, MAX_DERIVATIVE};
use crate::special::{binomial, falling};
use crate::symbols::HomogeneousSymbol;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Distance below which kz − k + i is treated as a collision with a pole.
pub const POLE_GUARD: f64 = 1e-10;
/// Tolerance of the delta-limit check.
pub const DELTA_TOLERANCE: f64 = 1e-6;
/// Relative tolerance of the null-relation check.
pub const NULL_TOLERANCE: f64 = 1e-8;
/// Half-width of the band around a removable zero of the product in
/// which the difference-quotient form is used.
pub const REMOVABLE_BAND: f64 = 1e-3;
/// Relative noise floor used to decide whether a coefficient is nonzero.
pub const NOISE_FLOOR: f64 = 1e-9;
/// Highest pole order probed when detecting d.
pub const MAX_POLE_ORDER: usize = 6;

fn check_dimensions(s: &HomogeneousSymbol, f: &TestFunction) -> Result<()> {
    if s.dimension() != f.dimension() {
        return Err(Error::DimensionMismatch {
            expected: s.dimension(),
            found: f.dimension(),
        });
    }
    Ok(())
}

/// (e^x − 1)/x, accurate near 0.
fn exprel(x: Complex64) -> Complex64 {
    if x.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for p in 1..=20 {
            term *= x / (p + 1) as f64;
            sum += term;
        }
        sum
    } else {
        (x.exp() - 1.0) / x
    }
}

/// Number of integrations by parts for a given extra depth.
fn steps_for(s: &HomogeneousSymbol, depth: usize) -> usize {
    s.degree().ceil() as usize + depth
}

/// ∂_y^m G(y) restricted to one direction: the Leibniz expansion of
/// y^{n−1} f̂(y c θ) c^n with c = p_k(θ)^{−1/k}, from ray derivatives `d`
/// of f̂ evaluated at y·c.
fn directional_g_derivative(n: usize, m: usize, y: f64, c: f64, d: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::zero();
    for l in 0..=m.min(n - 1) {
        let power = (n - 1 - l) as i32;
        let yp = if power == 0 { 1.0 } else { y.powi(power) };
        if yp == 0.0 {
            continue;
        }
        acc += d[m - l] * (binomial(m, l) * falling(n - 1, l) * yp * c.powi((m - l) as i32));
    }
    acc * c.powi(n as i32)
}

/// G(y₁) = y₁^{n−1} ∫ f̂(y₁ p_k(θ)^{−1/k} θ) p_k(θ)^{−n/k} dθ.
pub fn g_amplitude(
    s: &HomogeneousSymbol,
    f: &TestFunction,
    y1: f64,
    sphere: &SphereRule,
    exec: Execution,
) -> Result<Complex64> {
    g_derivative(s, f, 0, y1, sphere, exec)
}

/// ∂^m G(y₁), by Leibniz over y₁^{n−1} and exact ray derivatives along the
/// rescaled rays y₁ ↦ y₁ p_k(θ)^{−1/k} θ.
pub fn g_derivative(
    s: &HomogeneousSymbol,
    f: &TestFunction,
    m: usize,
    y1: f64,
    sphere: &SphereRule,
    exec: Execution,
) -> Result<Complex64> {
    check_dimensions(s, f)?;
    if m > MAX_DERIVATIVE {
        return Err(Error::DepthExceeded {
            requested: m,
            max: MAX_DERIVATIVE,
        });
    }
    let n = s.dimension();
    let k = s.degree();
    Ok(sphere.integrate(exec, |th| {
        let c = s.eval(th).powf(-1.0 / k);
        let profile = f.ray_profile(th, m).expect("order checked");
        let mut d = vec![Complex64::zero(); m + 1];
        profile.eval_orders(y1 * c, &mut d);
        directional_g_derivative(n, m, y1, c, &d)
    }))
}

/// Precomputed ∂^m G on a radial rule. Every evaluation of the continued
/// pairing then reduces to one weighted sum of complex powers.
#[derive(Debug, Clone)]
pub struct ContinuationKernel {
    degree: f64,
    dimension: usize,
    steps: usize,
    log_nodes: Vec<f64>,
    weighted: Vec<Complex64>,
    prefactor: f64,
}

impl ContinuationKernel {
    /// Kernel with ⌈k⌉ + depth integrations by parts.
    pub fn new(
        s: &HomogeneousSymbol,
        f: &TestFunction,
        depth: usize,
        config: &RunConfig,
    ) -> Result<Self> {
        Self::with_steps(s, f, steps_for(s, depth), config)
    }

    /// Kernel with exactly `steps` integrations by parts; zero steps gives
    /// the plain Mellin transform of G.
    pub fn with_steps(
        s: &HomogeneousSymbol,
        f: &TestFunction,
        steps: usize,
        config: &RunConfig,
    ) -> Result<Self> {
        check_dimensions(s, f)?;
        config.validate()?;
        if steps > MAX_DERIVATIVE {
            return Err(Error::DepthExceeded {
                requested: steps,
                max: MAX_DERIVATIVE,
            });
        }
        let n = s.dimension();
        let k = s.degree();
        let m = steps;
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        let prefactor = sign / (2.0 * PI).powi(n as i32);
        if f.terms().is_empty() {
            return Ok(Self {
                degree: k,
                dimension: n,
                steps: m,
                log_nodes: Vec::new(),
                weighted: Vec::new(),
                prefactor,
            });
        }
        let sphere = sphere_rule(n, config.sphere_level)?;
        let radial = Self::radial_rule(s, f, m, config)?;
        let ys = radial.nodes();
        let table = config.execution.sum_vec(sphere.len(), ys.len(), |i, acc| {
            let th = sphere.node(i);
            let c = s.eval(th).powf(-1.0 / k);
            let profile = f.ray_profile(th, m).expect("order checked");
            let w = sphere.weight(i);
            let mut d = vec![Complex64::zero(); m + 1];
            for (slot, &y) in acc.iter_mut().zip(ys) {
                profile.eval_orders(y * c, &mut d);
                *slot += directional_g_derivative(n, m, y, c, &d) * w;
            }
        });
        let weighted = table
            .iter()
            .zip(radial.weights())
            .map(|(t, &w)| t * w)
            .collect();
        Ok(Self {
            degree: k,
            dimension: n,
            steps: m,
            log_nodes: ys.iter().map(|y| y.ln()).collect(),
            weighted,
            prefactor,
        })
    }

    /// Radial rule for y: the slowest decay of f̂(y c θ) is set by the
    /// largest value of p_k on the sphere.
    fn radial_rule(
        s: &HomogeneousSymbol,
        f: &TestFunction,
        m: usize,
        config: &RunConfig,
    ) -> Result<RadialRule> {
        let k = s.degree();
        let decay = f.min_width() * s.sphere_max().powf(-2.0 / k);
        let growth = f.max_degree() as usize + m + s.dimension() + 3 * k.ceil() as usize + 4;
        radial_rule(decay, config.eps_tail, config.radial_panels)?.with_growth(growth as u32)
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of integrations by parts m.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// The representation is valid for Re z strictly above this bound.
    pub fn strip_bound(&self) -> f64 {
        let reach = self.steps.max(self.dimension - 1) + 1;
        1.0 - reach as f64 / self.degree
    }

    /// Points 1 − i/k, i = 1..=m, where the product factor vanishes.
    pub fn candidate_poles(&self) -> Vec<f64> {
        (1..=self.steps)
            .map(|i| 1.0 - i as f64 / self.degree)
            .collect()
    }

    /// ⟨𝔭(z−1), f⟩.
    ///
    /// The factors kz − k + i with i ≤ n − 1 vanish at removable points:
    /// there N(w) = ∫ y^{w+m} ∂^m G also vanishes because G = O(y^{n−1}).
    /// Near such a point N(w)/(w+i) is evaluated as (N(w) − N(−i))/(w+i),
    /// which is exact and free of cancellation.
    pub fn pairing(&self, z: Complex64) -> Result<Complex64> {
        let bound = self.strip_bound();
        if z.re <= bound {
            return Err(Error::StripViolation { re: z.re, bound });
        }
        let w = z * self.degree - self.degree;
        let removable = (1..=self.steps.min(self.dimension - 1))
            .find(|&i| (w + i as f64).norm() < REMOVABLE_BAND);
        let mut product = Complex64::new(1.0, 0.0);
        for i in 1..=self.steps {
            if Some(i) == removable {
                continue;
            }
            let factor = w + i as f64;
            if factor.norm() < POLE_GUARD {
                return Err(Error::OnPole { re: z.re, im: z.im });
            }
            product *= factor;
        }
        let exponent = w + self.steps as f64;
        let mut acc = Complex64::zero();
        match removable {
            None => {
                for (&ly, &t) in self.log_nodes.iter().zip(&self.weighted) {
                    acc += t * (exponent * ly).exp();
                }
            }
            Some(i) => {
                let delta = w + i as f64;
                for (&ly, &t) in self.log_nodes.iter().zip(&self.weighted) {
                    acc += t * (exponent * ly).exp() * ly * exprel(-delta * ly);
                }
            }
        }
        Ok(acc * self.prefactor / product)
    }

    /// Laurent coefficients about `center` from a trapezoid rule with
    /// `nodes` points on the circle of the given radius. A node landing on
    /// a pole triggers one retry with the nodes shifted by half a step.
    pub fn laurent_about(
        &self,
        center: Complex64,
        radius: f64,
        nodes: usize,
        j_min: i32,
        j_max: i32,
    ) -> Result<LaurentExpansion> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "contour radius must be positive, got {radius}"
            )));
        }
        if nodes < 64 || !nodes.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "contour nodes must be a power of two ≥ 64, got {nodes}"
            )));
        }
        if j_min > j_max {
            return Err(Error::InvalidArgument(format!(
                "empty coefficient range {j_min}..={j_max}"
            )));
        }
        let sample = |offset: f64| -> Result<Vec<(Complex64, Complex64)>> {
            (0..nodes)
                .map(|l| {
                    let phase = 2.0 * PI * (l as f64 + offset) / nodes as f64;
                    let u = Complex64::from_polar(1.0, phase);
                    Ok((u, self.pairing(center + u * radius)?))
                })
                .collect()
        };
        let values = match sample(0.0) {
            Err(Error::OnPole { .. }) => sample(0.5)?,
            other => other?,
        };
        let max_abs = values.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        let coefficient = |j: i32| -> Complex64 {
            let sum: Complex64 = values.iter().map(|(u, v)| v * u.powi(-j)).sum();
            sum / nodes as f64 * radius.powi(-j)
        };
        let noise_floor = NOISE_FLOOR * max_abs;
        let pole_order = (1..=MAX_POLE_ORDER)
            .rev()
            .find(|&d| coefficient(-(d as i32)).norm() > noise_floor * radius.powi(d as i32))
            .unwrap_or(0);
        let coefficients = (j_min..=j_max).map(|j| (j, coefficient(j))).collect();
        Ok(LaurentExpansion {
            center,
            pole_order,
            coefficients,
            contour_radius: radius,
            node_count: nodes,
            noise_floor,
        })
    }
}

/// Laurent coefficients μ_j of ⟨𝔭(z−1), f⟩ about `center`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaurentExpansion {
    pub center: Complex64,
    /// Largest d with |μ_{−d}| above the noise floor scaled by radius^d.
    pub pole_order: usize,
    pub coefficients: BTreeMap<i32, Complex64>,
    pub contour_radius: f64,
    pub node_count: usize,
    /// NOISE_FLOOR times the largest sampled magnitude on the contour.
    pub noise_floor: f64,
}

impl LaurentExpansion {
    pub fn mu(&self, j: i32) -> Option<Complex64> {
        self.coefficients.get(&j).copied()
    }

    /// Σ μ_j (z − center)^j over the stored coefficients.
    pub fn resum(&self, z: Complex64) -> Complex64 {
        let h = z - self.center;
        self.coefficients
            .iter()
            .map(|(&j, &mu)| mu * h.powi(j))
            .sum()
    }

    /// Whether |μ_j| exceeds the noise floor at its natural scale.
    pub fn is_significant(&self, j: i32) -> bool {
        self.mu(j).is_some_and(|mu| {
            mu.norm() > self.noise_floor * self.contour_radius.powi(-j)
        })
    }
}

/// ⟨𝔭(z−1), f⟩ with ⌈k⌉ + depth integrations by parts.
pub fn pz_pairing(
    s: &HomogeneousSymbol,
    f: &TestFunction,
    z: Complex64,
    depth: usize,
    config: &RunConfig,
) -> Result<Complex64> {
    ContinuationKernel::new(s, f, depth, config)?.pairing(z)
}

/// Largest admissible Laurent radius about 0: below 1/(2k) and below the
/// nearest nonzero point 1 − i/k where the product may vanish.
pub fn max_contour_radius(s: &HomogeneousSymbol) -> f64 {
    let k = s.degree();
    let nearest = (1..=steps_for(s, 0))
        .map(|i| (1.0 - i as f64 / k).abs())
        .filter(|d| *d > POLE_GUARD)
        .fold(f64::INFINITY, f64::min);
    (0.5 / k).min(nearest)
}

/// Default Laurent radius about 0: 1/(4k), reduced to half the distance to
/// a nearby candidate pole for fractional degrees.
pub fn default_contour_radius(s: &HomogeneousSymbol) -> f64 {
    (0.25 / s.degree()).min(0.5 * max_contour_radius(s))
}

/// μ_j(f) for j_min ≤ j ≤ j_max about z = 0.
#[allow(clippy::too_many_arguments)]
pub fn laurent(
    s: &HomogeneousSymbol,
    f: &TestFunction,
    radius: f64,
    nodes: usize,
    j_min: i32,
    j_max: i32,
    config: &RunConfig,
) -> Result<LaurentExpansion> {
    let limit = max_contour_radius(s);
    if !(radius > 0.0 && radius < limit) {
        return Err(Error::InvalidArgument(format!(
            "contour radius must lie in (0, {limit}), got {radius}"
        )));
    }
    ContinuationKernel::new(s, f, 0, config)?.laurent_about(
        Complex64::zero(),
        radius,
        nodes,
        j_min,
        j_max,
    )
}

/// Laurent expansion about 0 with the configured (or default) contour.
pub fn laurent_default(
    s: &HomogeneousSymbol,
    f: &TestFunction,
    j_min: i32,
    j_max: i32,
    config: &RunConfig,
) -> Result<LaurentExpansion> {
    let radius = config
        .contour_radius
        .unwrap_or_else(|| default_contour_radius(s));
    laurent(s, f, radius, config.contour_nodes, j_min, j_max, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaReport {
    /// μ₀(P(D)f).
    pub lhs: Complex64,
    /// f(0).
    pub rhs: Complex64,
    pub abs_err: f64,
    /// Detected pole order of ⟨𝔭(z−1), P(D)f⟩ at 0; the limit exists iff 0.
    pub pole_order: usize,
    /// Largest |μ_j(P(D)f)| over j < 0.
    pub singular_part: f64,
    pub pass: bool,
}

/// lim_{z→0} ⟨𝔭(z−1), P(D)f⟩ against f(0).
pub fn verify_delta_limit(
    s: &HomogeneousSymbol,
    f: &TestFunction,
    config: &RunConfig,
) -> Result<DeltaReport> {
    let pf = s.apply_operator(f)?;
    let exp = laurent_default(s, &pf, -(MAX_POLE_ORDER as i32), 0, config)?;
    let lhs = exp.mu(0).expect("j = 0 requested");
    let rhs = f.value_at_origin();
    let abs_err = (lhs - rhs).norm();
    let singular_part = exp
        .coefficients
        .range(..0)
        .map(|(_, mu)| mu.norm())
        .fold(0.0, f64::max);
    Ok(DeltaReport {
        lhs,
        rhs,
        abs_err,
        pole_order: exp.pole_order,
        singular_part,
        pass: abs_err <= DELTA_TOLERANCE && exp.pole_order == 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NullReport {
    pub j: i32,
    /// μ_j(P(D)f).
    pub mu_applied: Complex64,
    /// μ_j(f).
    pub mu_plain: Complex64,
    /// |μ_j(f)| + 1.
    pub scale: f64,
    pub pass: bool,
    /// μ_j(f) itself vanishes, so the relation holds trivially.
    pub vacuous: bool,
}

/// Pairing form of P(D)μ_j = 0 for j < 0: μ_j(P(D)f) vanishes.
pub fn verify_null_relations(
    s: &HomogeneousSymbol,
    f: &TestFunction,
    j: i32,
    config: &RunConfig,
) -> Result<NullReport> {
    if j >= 0 {
        return Err(Error::InvalidArgument(format!(
            "null relations concern negative indices, got {j}"
        )));
    }
    let pf = s.apply_operator(f)?;
    let applied = laurent_default(s, &pf, j, j, config)?;
    let plain = laurent_default(s, f, j, j, config)?;
    let mu_applied = applied.mu(j).expect("index requested");
    let mu_plain = plain.mu(j).expect("index requested");
    let scale = mu_plain.norm() + 1.0;
    Ok(NullReport {
        j,
        mu_applied,
        mu_plain,
        scale,
        pass: mu_applied.norm() <= NULL_TOLERANCE * scale,
        vacuous: mu_plain.norm() <= NULL_TOLERANCE * scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleReport {
    pub j: u32,
    /// Candidate pole −j/k.
    pub location: f64,
    pub residue: Complex64,
    pub magnitude: f64,
    /// Residue below the noise floor: a candidate location that is not a pole.
    pub vanishing: bool,
    /// Extra integrations by parts used to reach the candidate.
    pub depth: usize,
}

/// Residues of ⟨𝔭(z−1), f⟩ at the candidate poles z = −j/k.
pub fn pole_scan(
    s: &HomogeneousSymbol,
    f: &TestFunction,
    j_list: &[u32],
    config: &RunConfig,
) -> Result<Vec<PoleReport>> {
    let k = s.degree();
    let radius = config.contour_radius.unwrap_or(0.25 / k);
    if !(radius > 0.0 && radius < 0.5 / k) {
        return Err(Error::InvalidArgument(format!(
            "contour radius must lie in (0, {}), got {radius}",
            0.5 / k
        )));
    }
    let max_depth = 4 * k.ceil() as usize;
    let mut reports = Vec::with_capacity(j_list.len());
    for &j in j_list {
        if j == 0 {
            return Err(Error::InvalidArgument(
                "pole indices start at 1; use laurent for z = 0".into(),
            ));
        }
        let location = -f64::from(j) / k;
        let reach = location - radius;
        let mut depth = 0;
        while 1.0 - (steps_for(s, depth) + 1) as f64 / k >= reach {
            depth += 1;
            if depth > max_depth {
                return Err(Error::StripViolation {
                    re: reach,
                    bound: 1.0 - (steps_for(s, max_depth) + 1) as f64 / k,
                });
            }
        }
        let kernel = ContinuationKernel::new(s, f, depth, config)?;
        let exp = kernel.laurent_about(
            Complex64::new(location, 0.0),
            radius,
            config.contour_nodes,
            -1,
            -1,
        )?;
        let residue = exp.mu(-1).expect("index requested");
        reports.push(PoleReport {
            j,
            location,
            residue,
            magnitude: residue.norm(),
            vanishing: !exp.is_significant(-1),
            depth,
        });
    }
    Ok(reports)
}
