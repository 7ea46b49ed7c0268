//! Computed waves and their JSON layout.
//!
//! ```text
//! {
//!   "format": "wavebound.wave.v1",
//!   "metadata": {
//!     "g", "omega", "m", "wavelength", "bernoulli",
//!     "n_x", "n_p", "grid_parameter",
//!     "residual_interior", "residual_surface"
//!   },
//!   "eta":    [n_x surface heights],
//!   "height": [n_p * n_x heights, row-major, bottom row first]
//! }
//! ```
//!
//! Row `j` of `height` is the level `p = P(j / (n_p - 1))` of the stretched
//! coordinate defined by `grid_parameter`; column `i` is `x = i L / n_x`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream_flows::FluidParams;

use super::grid::HeightField;
use super::residual::{height_residual, ResidualNorms};

pub const WAVE_FORMAT: &str = "wavebound.wave.v1";

/// A computed wave: heights, surface profile and the residuals it was accepted with.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub field: HeightField,
    /// Surface profile `eta(x_i)`; equals the top row of `field` for solver output.
    pub eta: Vec<f64>,
    pub residual: ResidualNorms,
}

#[derive(Serialize, Deserialize)]
struct Metadata {
    g: f64,
    omega: f64,
    m: f64,
    wavelength: f64,
    bernoulli: f64,
    n_x: usize,
    n_p: usize,
    grid_parameter: f64,
    residual_interior: f64,
    residual_surface: f64,
}

#[derive(Serialize, Deserialize)]
struct WaveFile {
    format: String,
    metadata: Metadata,
    eta: Vec<f64>,
    height: Vec<f64>,
}

impl WaveField {
    /// Wraps a height field, evaluating its residual.
    pub fn from_field(field: HeightField) -> Result<Self> {
        let norms = height_residual(&field)?.norms;
        let eta = field.surface().to_vec();
        Ok(Self {
            field,
            eta,
            residual: norms,
        })
    }

    pub fn params(&self) -> &FluidParams<f64> {
        &self.field.params
    }

    pub fn bernoulli(&self) -> f64 {
        self.field.bernoulli
    }

    pub fn wavelength(&self) -> f64 {
        self.field.wavelength
    }

    /// `max eta - min eta` over the grid nodes.
    pub fn nodal_amplitude(&self) -> f64 {
        let (lo, hi) = self
            .eta
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            });
        hi - lo
    }

    pub fn to_json(&self) -> Result<String> {
        let f = &self.field;
        let file = WaveFile {
            format: WAVE_FORMAT.to_string(),
            metadata: Metadata {
                g: f.params.g,
                omega: f.params.omega,
                m: f.params.m,
                wavelength: f.wavelength,
                bernoulli: f.bernoulli,
                n_x: f.n_x,
                n_p: f.n_p,
                grid_parameter: f.grid_parameter,
                residual_interior: self.residual.interior,
                residual_surface: self.residual.surface,
            },
            eta: self.eta.clone(),
            height: f.values.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: WaveFile = serde_json::from_str(text)?;
        if file.format != WAVE_FORMAT {
            return Err(Error::Config(format!(
                "unknown wave format {:?}, expected {WAVE_FORMAT:?}",
                file.format
            )));
        }
        let md = file.metadata;
        let field = HeightField {
            params: FluidParams::new(md.g, md.omega, md.m)?,
            wavelength: md.wavelength,
            bernoulli: md.bernoulli,
            n_x: md.n_x,
            n_p: md.n_p,
            grid_parameter: md.grid_parameter,
            values: file.height,
        };
        field.check_shape()?;
        if file.eta.len() != field.n_x {
            return Err(Error::InvalidParams(format!(
                "eta has {} samples, expected {}",
                file.eta.len(),
                field.n_x
            )));
        }
        Ok(Self {
            field,
            eta: file.eta,
            residual: ResidualNorms {
                interior: md.residual_interior,
                surface: md.residual_surface,
            },
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::grid::stream_height;

    #[test]
    fn malformed_json_is_rejected() {
        assert!(WaveField::from_json("{").is_err());
        let p = FluidParams::new(1.0, 1.0, 1.0).unwrap();
        let w = WaveField::from_field(stream_height(&p, 1.5, 3.0, 8, 6).unwrap()).unwrap();
        let text = w.to_json().unwrap().replace("\"n_x\": 8", "\"n_x\": 10");
        assert!(WaveField::from_json(&text).is_err());
    }
}
