use crate::error::{Error, Result};
use crate::parallel::Execution;

/// Resolution and execution settings shared by the pairing and
/// continuation routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub sphere_level: u32,
    pub radial_panels: usize,
    pub eps_tail: f64,
    /// Contour radius for Laurent extraction; `None` means 1/(4k).
    pub contour_radius: Option<f64>,
    pub contour_nodes: usize,
    /// Seed for random spot-check points only; all quadrature is deterministic.
    pub seed: u64,
    pub execution: Execution,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sphere_level: 4,
            radial_panels: 24,
            eps_tail: 1e-16,
            contour_radius: None,
            contour_nodes: 256,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sphere_level == 0 {
            return Err(Error::InvalidArgument("sphere level must be ≥ 1".into()));
        }
        if self.radial_panels == 0 {
            return Err(Error::InvalidArgument("radial panels must be ≥ 1".into()));
        }
        if !(self.eps_tail > 0.0 && self.eps_tail < 1.0) {
            return Err(Error::BadTolerance(self.eps_tail));
        }
        if let Some(r) = self.contour_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "contour radius must be positive, got {r}"
                )));
            }
        }
        if self.contour_nodes < 64 || !self.contour_nodes.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "contour nodes must be a power of two ≥ 64, got {}",
                self.contour_nodes
            )));
        }
        Ok(())
    }

    /// Contour radius for a symbol of degree k.
    pub fn contour_radius_for(&self, degree: f64) -> f64 {
        self.contour_radius.unwrap_or(0.25 / degree)
    }

    pub fn with_sphere_level(mut self, level: u32) -> Self {
        self.sphere_level = level;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.execution = Execution::SEQUENTIAL;
        self
    }
}
