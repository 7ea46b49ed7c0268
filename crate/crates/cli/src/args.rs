//! Command-line flags and the key-value file that overrides them.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use wavebound::{FluidParams, SolverConfig, SweepSpec};

use crate::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "wavebound",
    version,
    about = "Amplitude bounds and certified steady waves with constant vorticity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laminar constants and amplitude bounds.
    Bounds(Flags),
    /// Solve for one periodic wave and write it as JSON.
    Solve(Flags),
    /// Certify a wave file against the bound and the depth inequalities.
    Certify {
        /// Wave JSON written by `solve`.
        wavefile: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Continue one branch per vorticity and tabulate the largest certified waves.
    Sweep(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Every setting any command reads. Flags fill it first, then the
/// `--config` file overwrites whatever keys it sets.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// Gravitational acceleration.
    #[arg(long = "g")]
    pub g: Option<f64>,
    /// Vorticity.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Relative mass flux.
    #[arg(long = "m")]
    pub m: Option<f64>,
    /// Wavelength; defaults to the wave bifurcating mid-window.
    #[arg(long = "wavelength", visible_alias = "L")]
    #[serde(alias = "L")]
    pub wavelength: Option<f64>,
    /// Half crest-to-trough height of the wave to solve for.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Comma-separated vorticities for `sweep`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub omegas: Option<Vec<f64>>,
    #[arg(long)]
    pub n_x: Option<usize>,
    #[arg(long)]
    pub n_p: Option<usize>,
    #[arg(long)]
    pub tol_interior: Option<f64>,
    #[arg(long)]
    pub tol_surface: Option<f64>,
    #[arg(long)]
    pub max_newton: Option<usize>,
    /// Continuation steps (to the amplitude for `solve`, to the cap for `sweep`).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Sweep cap on the crest-to-trough height, as a fraction of `d0`.
    #[arg(long)]
    pub max_fraction: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Where `sweep` writes the decay report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Key-value file (`key = value` per line) overriding the flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $(if $src.$f.is_some() { $dst.$f = $src.$f; })*
    };
}

impl Flags {
    /// Applies the `--config` file, if any.
    pub fn resolve(mut self) -> Result<Self, Failure> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config(&path)?;
        overlay!(self, file; g, omega, m, wavelength, amplitude, omegas, n_x, n_p, tol_interior,
            tol_surface, max_newton, steps, max_fraction, output, format, report);
        Ok(self)
    }

    fn require(&self, name: &str, v: Option<f64>) -> Result<f64, Failure> {
        let v = v.ok_or_else(|| Failure::usage(format!("missing --{name}")))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Failure::usage(format!(
                "--{name} must be positive, got {v}"
            )));
        }
        Ok(v)
    }

    pub fn params(&self) -> Result<FluidParams, Failure> {
        let g = self.require("g", self.g)?;
        let omega = self.require("omega", self.omega)?;
        let m = self.require("m", self.m)?;
        FluidParams::new(g, omega, m).map_err(Failure::usage)
    }

    /// `g` and `m` only; the vorticities come from `--omegas`.
    pub fn sweep_base(&self) -> Result<(FluidParams, Vec<f64>), Failure> {
        let g = self.require("g", self.g)?;
        let m = self.require("m", self.m)?;
        let omegas = self.omegas.clone().unwrap_or_default();
        if omegas.len() < 2 {
            return Err(Failure::usage("--omegas needs at least two vorticities"));
        }
        for &w in &omegas {
            self.require("omegas", Some(w))?;
        }
        Ok((FluidParams::new(g, 1.0, m).map_err(Failure::usage)?, omegas))
    }

    pub fn wavelength(&self) -> Result<Option<f64>, Failure> {
        self.wavelength
            .map(|l| self.require("wavelength", Some(l)))
            .transpose()
    }

    pub fn amplitude(&self) -> Result<f64, Failure> {
        match self.amplitude {
            None => Err(Failure::usage("missing --amplitude")),
            Some(a) if a.is_finite() && a >= 0.0 => Ok(a),
            Some(a) => Err(Failure::usage(format!(
                "--amplitude must be non-negative, got {a}"
            ))),
        }
    }

    pub fn steps(&self, default: usize) -> Result<usize, Failure> {
        match self.steps {
            Some(0) => Err(Failure::usage("--steps must be positive")),
            Some(n) => Ok(n),
            None => Ok(default),
        }
    }

    pub fn solver(&self) -> Result<SolverConfig, Failure> {
        let d = SolverConfig::default();
        let c = SolverConfig {
            n_x: self.n_x.unwrap_or(d.n_x),
            n_p: self.n_p.unwrap_or(d.n_p),
            tol_interior: self.tol_interior.unwrap_or(d.tol_interior),
            tol_surface: self.tol_surface.unwrap_or(d.tol_surface),
            max_newton: self.max_newton.unwrap_or(d.max_newton),
        };
        c.validate().map_err(Failure::usage)?;
        Ok(c)
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, Failure> {
        let d = SweepSpec::default();
        let max_fraction = self.max_fraction.unwrap_or(d.max_fraction);
        if !(max_fraction > 0.0 && max_fraction < 2.0) {
            return Err(Failure::usage("--max-fraction must lie in (0, 2)"));
        }
        Ok(SweepSpec {
            max_fraction,
            steps: self.steps(d.steps)?,
            solver: self.solver()?,
        })
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

fn read_config(path: &Path) -> Result<Flags, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}
