//! Steady periodic waves in height-function variables.

mod continuation;
mod dispersion;
mod field;
mod grid;
mod newton;
mod residual;
mod velocity;

pub use continuation::{continue_branch, Branch};
pub use dispersion::{
    bifurcation_point, dispersion_function, linear_mode, mid_window_wavelength,
    wavelength_for_parameter,
};
pub use field::{WaveField, WAVE_FORMAT};
pub use grid::{fourier_d1, stream_height, HeightField, StreamCoordinate};
pub use newton::{cosine_guess, solve_periodic};
pub use residual::{height_residual, HeightResidual, ResidualNorms};
pub use velocity::{
    min_vertical_speed, surface_kinematic_residual, velocity_from_stream, vorticity_residual,
    VelocityField,
};

pub(crate) use grid::check_grid as check_grid_public;
