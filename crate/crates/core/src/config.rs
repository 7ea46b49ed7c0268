//! Solver and continuation settings.
//!
//! Both structs read from flat `key = value` text (TOML syntax); unknown
//! keys are ignored so one file can also carry command-line settings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discretisation and Newton settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Even number of `x` nodes per wavelength.
    pub n_x: usize,
    /// Number of `p` levels including bottom and surface.
    pub n_p: usize,
    pub tol_interior: f64,
    pub tol_surface: f64,
    pub max_newton: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_x: 64,
            n_p: 161,
            tol_interior: 1e-10,
            tol_surface: 1e-8,
            max_newton: 20,
        }
    }
}

impl SolverConfig {
    pub fn with_grid(n_x: usize, n_p: usize) -> Self {
        Self {
            n_x,
            n_p,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::wave::check_grid_public(self.n_x, self.n_p)?;
        if !(self.tol_interior > 0.0 && self.tol_surface > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn from_kv(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Amplitude continuation settings (absolute units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchSpec {
    /// Half height `(h(0,m) - h(L/2,m))/2` to reach.
    pub target_amplitude: f64,
    pub step: f64,
    pub min_step: f64,
    pub max_steps: usize,
    /// Stop once `min psi_y < stagnation_fraction * m / d0`.
    pub stagnation_fraction: f64,
}

impl BranchSpec {
    /// Reach `target` in `steps` equal steps, halving at most six times.
    pub fn to(target: f64, steps: usize) -> Self {
        let step = target / steps.max(1) as f64;
        Self {
            target_amplitude: target,
            step,
            min_step: step / 64.0,
            max_steps: 4 * steps.max(1) + 64,
            stagnation_fraction: 0.02,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_amplitude >= 0.0 && self.step > 0.0 && self.min_step > 0.0) {
            return Err(Error::Config(format!("invalid branch settings {self:?}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_key_values() {
        let c = SolverConfig::from_kv("n_x = 128\ntol_surface = 1e-9\nomega = 3.0\n").unwrap();
        assert_eq!(c.n_x, 128);
        assert_eq!(c.n_p, 161);
        assert_eq!(c.tol_surface, 1e-9);
        assert!(SolverConfig::from_kv("n_x = \"many\"").is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(SolverConfig::with_grid(63, 41).validate().is_err());
        assert!(SolverConfig::with_grid(64, 3).validate().is_err());
        SolverConfig::default().validate().unwrap();
    }
}
