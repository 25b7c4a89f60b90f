//! Simulation of coherent cavity and qubit control with resonant trains of
//! single-flux-quantum (SFQ) pulses.
//!
//! * [`params`]: physical constants and circuit parameters.
//! * [`pulses`]: nominal and jittered pulse schedules.
//! * [`oscillator`]: cavity response, coherent amplitudes, pointer states.
//! * [`dynamics`]: two- and three-level propagators and fidelity metrics.
//! * [`errors`]: closed-form error models, Monte Carlo jitter harness, sweeps.
//! * [`reproduce`]: the canonical checks with their pass/fail tolerances.

pub mod dynamics;
pub mod error;
pub mod errors;
pub mod linalg;
pub mod oscillator;
pub mod params;
pub mod pulses;
pub mod reproduce;

pub use error::{Error, Result};
