//! Fixed-step amplitude continuation from the laminar flow.

use crate::config::{BranchSpec, SolverConfig};
use crate::error::{Error, Result};
use crate::stream_flows::FluidParams;

use super::dispersion::bifurcation_point;
use super::field::WaveField;
use super::grid::{stream_height, HeightField};
use super::newton::{cosine_guess, newton_solve};
use super::velocity::min_vertical_speed;

/// Waves computed along one branch, laminar base first.
#[derive(Debug, Clone)]
pub struct Branch {
    pub wavelength: f64,
    pub bifurcation_parameter: f64,
    pub waves: Vec<WaveField>,
    /// Half heights `(h(0,m) - h(L/2,m))/2` of `waves`.
    pub amplitudes: Vec<f64>,
    /// Newton iterations used for each wave after the base.
    pub iterations: Vec<usize>,
    /// Why the branch stopped short of the target, if it did.
    pub termination: Option<String>,
}

impl Branch {
    pub fn last(&self) -> &WaveField {
        self.waves.last().expect("branch holds its base wave")
    }

    pub fn reached_target(&self) -> bool {
        self.termination.is_none()
    }

    /// The branch as a `Result`: an error when it terminated early.
    pub fn into_result(self, target: f64) -> Result<Self> {
        match &self.termination {
            None => Ok(self),
            Some(reason) => Err(Error::BranchTerminated {
                reached: *self.amplitudes.last().unwrap_or(&0.0),
                target,
                reason: reason.clone(),
            }),
        }
    }
}

fn extrapolate(a: &HeightField, b: &HeightField, weight: f64) -> HeightField {
    let mut out = b.clone();
    for (o, (x, y)) in out.values.iter_mut().zip(a.values.iter().zip(&b.values)) {
        *o = y + weight * (y - x);
    }
    out.bernoulli = b.bernoulli + weight * (b.bernoulli - a.bernoulli);
    out
}

/// Continues the symmetric branch bifurcating at wavelength `L` up to
/// `spec.target_amplitude`.
///
/// Steps are halved on Newton failure and doubled again, up to
/// `spec.step`, after easy solves. The branch stops when the step falls
/// below `spec.min_step`, after `spec.max_steps` accepted steps, or when the
/// smallest `psi_y` drops below `spec.stagnation_fraction * m / d0`.
pub fn continue_branch(
    params: &FluidParams<f64>,
    wavelength: f64,
    spec: &BranchSpec,
    cfg: &SolverConfig,
) -> Result<Branch> {
    params.validate()?;
    cfg.validate()?;
    spec.validate()?;
    let s = bifurcation_point(params, wavelength)?;
    let base = WaveField::from_field(stream_height(params, s, wavelength, cfg.n_x, cfg.n_p)?)?;
    let stagnation = spec.stagnation_fraction * params.m / params.d0();
    let mut branch = Branch {
        wavelength,
        bifurcation_parameter: s,
        waves: vec![base],
        amplitudes: vec![0.0],
        iterations: Vec::new(),
        termination: None,
    };
    let mut step = spec.step;
    let mut accepted = 0;
    while *branch.amplitudes.last().unwrap() < spec.target_amplitude {
        if accepted >= spec.max_steps {
            branch.termination = Some(format!("step limit {} reached", spec.max_steps));
            break;
        }
        let a = *branch.amplitudes.last().unwrap();
        let next = (a + step).min(spec.target_amplitude);
        let n = branch.waves.len();
        let guess = if n >= 2 {
            let da = branch.amplitudes[n - 1] - branch.amplitudes[n - 2];
            extrapolate(
                &branch.waves[n - 2].field,
                &branch.waves[n - 1].field,
                (next - a) / da,
            )
        } else {
            cosine_guess(params, s, wavelength, next, cfg)?
        };
        match newton_solve(&guess, next, cfg) {
            Ok(out) => {
                let speed = min_vertical_speed(&out.wave.field)?;
                branch.waves.push(out.wave);
                branch.amplitudes.push(next);
                branch.iterations.push(out.iterations);
                accepted += 1;
                if out.iterations <= 4 {
                    step = (2.0 * step).min(spec.step);
                }
                if speed < stagnation {
                    if next < spec.target_amplitude {
                        branch.termination = Some(format!(
                            "approaching stagnation: min psi_y = {speed:e} below {stagnation:e}"
                        ));
                    }
                    break;
                }
            }
            Err(e) => {
                step *= 0.5;
                if step < spec.min_step {
                    branch.termination = Some(format!("step below minimum after: {e}"));
                    break;
                }
            }
        }
    }
    Ok(branch)
}
