//! Amplitude bounds for steady periodic water waves with constant positive
//! vorticity, and a height-function solver that produces waves to test
//! them on.
//!
//! The closed-form modules ([`stream_flows`], [`scaling`],
//! [`amplitude_bounds`]) are generic over [`Scalar`]; the solver and the
//! certificates work in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod amplitude_bounds;
pub mod certify;
pub mod config;
pub mod error;
pub mod roots;
pub mod scalar;
pub mod scaling;
pub mod stream_flows;
pub mod wave;

pub use amplitude_bounds::BoundBranch;
pub use certify::{
    certify_wave, compare_decay_rates, sweep_vorticity, BoundCertificate, Check, Checks,
    DecayReport, SweepRow, SweepSpec, SweepTable, Verdict,
};
pub use config::{BranchSpec, SolverConfig};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use wave::{HeightField, WaveField};

pub type FluidParams = stream_flows::FluidParams<f64>;
pub type StreamWindow = stream_flows::StreamWindow<f64>;
pub type DepthPair = stream_flows::DepthPair<f64>;
pub type NondimParams = scaling::NondimParams<f64>;
pub type AmplitudeBound = amplitude_bounds::AmplitudeBound<f64>;
pub type ProofCheckReport = amplitude_bounds::ProofCheckReport<f64>;

pub type FluidParams32 = stream_flows::FluidParams<f32>;
pub type StreamWindow32 = stream_flows::StreamWindow<f32>;
pub type AmplitudeBound32 = amplitude_bounds::AmplitudeBound<f32>;
