//! Dynamics and trajectory analysis for a single-actuator, momentum-driven
//! paddling boat.
//!
//! A motor spins a heavy driving mass relative to the flipper-bearing body.
//! The reaction torque rotates the body back and forth, two passive flippers
//! alternately open against the water and the boat paddles forward. Unequal
//! stroke periods steer it.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`model`]: physical parameters, derived drag coefficients and the
//!   planar equations of motion.
//! * [`waveform`]: the piecewise-sinusoid motor trajectory and its derivatives.
//! * [`integrator`]: fixed-step RK4 aligned to waveform pieces and output
//!   samples.
//! * [`analysis`]: Taubin circle fits, orientation-signed radius, window
//!   selection, truncation and motion metrics.
//! * [`experiments`]: parameter sweeps built on the above.
//!
//! File formats, CLI and plotting live in the `modboat` companion crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod experiments;
pub mod integrator;
pub mod model;
pub mod trajectory;
pub mod waveform;

pub use analysis::{
    curvature_report, cycle_averaged_points, fit_circle, fit_oriented, motion_metrics,
    select_window, signed_radius, AnalysisError, CircleFit, CurvatureReport, MotionMetrics,
    OrientedFit, ReportOptions, WindowMode, WindowSpec,
};
pub use experiments::{
    analyze, reference_input, reproduce_reference_run, sweep_asymmetry, sweep_phi0, sweep_steering,
    AnalysisSettings, ExperimentError, ReferenceRun, SweepJob, SweepKind, SweepRow, SweepTable,
};
pub use integrator::{
    angular_momentum, rk4_step, simulate, Divergence, Dynamics, SimConfig, SimError,
};
pub use model::{
    accel, active_flipper, default_params, derive_coeffs, opening_torque, top_orientation, Accel,
    Asymmetry, BoatParams, DerivedCoeffs, Flipper, FlipperLoad, ModelError, SimState,
};
pub use trajectory::{Trajectory, TrajectoryMeta, TrajectoryRow};
pub use waveform::{InputTuple, Segment, WaveformError};
