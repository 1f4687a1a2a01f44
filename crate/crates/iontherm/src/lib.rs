//! Thermometry of a single trapped ion's vibrational mode from blue-sideband
//! excitation probabilities.
//!
//! The crate has four layers:
//!
//! - [`physics`]: the exact forward model — Lamb-Dicke parameter, scaled
//!   sideband coupling coefficients, truncated thermal phonon distributions,
//!   and the resulting excitation probabilities `P_up(q)`.
//! - [`dataset`]: deterministic, seeded generation of training/test records
//!   over a parameter box, binomial projection noise, target scaling, and the
//!   binary/CSV dataset formats.
//! - [`nn`]: a from-scratch feed-forward regressor (forward, L1 loss,
//!   backprop, Adam training loop, inference, model serialization) mapping a
//!   spectrum to the mean phonon number and pulse area.
//! - [`eval`]: test-set evaluation with binned relative errors, noise sweeps,
//!   Monte-Carlo error bars, Gaussian peak fitting for scan traces, and
//!   heating-rate line fits.
//!
//! All randomized operations are counter-seeded; outputs never depend on
//! worker count. See the module docs for the file formats.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod nn;
pub mod physics;
mod rng;

pub use dataset::{
    apply_projection_noise, generate_dataset, sample_params, scale_targets, unscale_targets,
    Dataset, DatasetHeader, GenMode, ParamBox, Sample,
};
pub use error::{Error, Result};
pub use eval::{
    evaluate_model, fit_heating_rate, gaussian_peak_fit, monte_carlo_errorbar, noise_sweep,
    verify_against_heating_line, EvalReport, HeatingLine, LineCheckRow, McErrorBar, PeakFit,
    ScanTrace, SweepCurve,
};
pub use nn::{
    backward, forward, init_model, load_model, loss, predict, save_model, train, Activation,
    MlpModel, Prediction, TrainConfig,
};
pub use physics::{
    coupling_ratio, coupling_table, lamb_dicke, laguerre, sideband_population, spectrum,
    thermal_pmf, CouplingTable, ExperimentGeometry, SidebandSpectrum, ThermalDistribution,
};
