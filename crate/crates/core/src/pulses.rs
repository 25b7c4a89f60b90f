//! SFQ pulse schedules: nominal resonant trains, clock-jitter perturbations and
//! pulse-shape descriptors.
//!
//! # Timing convention
//!
//! A train of `n` pulses is a sequence of `n + 1` clock events. Pulses fire on
//! the first `n`; the last event closes the gate window, so a nominal train
//! spans exactly `n·T`. The first pulse is the timing reference and sits at
//! `t = 0`; jitter displaces the remaining `n` events.
//!
//! # Random numbers
//!
//! Jitter draws come from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)` on stream `stream`, mapped to normals by the
//! `rand_distr` ziggurat sampler. Both are platform independent, so a given
//! `(seed, stream)` reproduces the same train everywhere.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{positive, Error, Result};

/// Default Gaussian truncation, in units of τ.
pub const DEFAULT_GAUSSIAN_CUTOFF: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    /// Ideal δ-function pulse.
    Delta,
    /// Rectangular pulse of width `2·half_width`.
    Rectangular { half_width: f64 },
    /// Gaussian pulse of standard deviation `tau`, truncated to ±`cutoff`·τ.
    Gaussian { tau: f64, cutoff: f64 },
}

impl PulseShape {
    pub fn rectangular(half_width: f64) -> Result<Self> {
        positive(half_width, "rectangular half width")?;
        Ok(PulseShape::Rectangular { half_width })
    }

    pub fn gaussian(tau: f64) -> Result<Self> {
        Self::gaussian_with_cutoff(tau, DEFAULT_GAUSSIAN_CUTOFF)
    }

    pub fn gaussian_with_cutoff(tau: f64, cutoff: f64) -> Result<Self> {
        positive(tau, "gaussian tau")?;
        if !(cutoff.is_finite() && cutoff >= 3.0) {
            return Err(Error::domain(format!("gaussian cutoff must be >= 3, got {cutoff}")));
        }
        Ok(PulseShape::Gaussian { tau, cutoff })
    }

    /// Half of the time support (−t_c, t_c); zero for a delta pulse.
    pub fn half_support(&self) -> f64 {
        match *self {
            PulseShape::Delta => 0.0,
            PulseShape::Rectangular { half_width } => half_width,
            PulseShape::Gaussian { tau, cutoff } => cutoff * tau,
        }
    }
}

/// Pulse arrival times plus the clock event that closes the gate window.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseTrain {
    times: Vec<f64>,
    period: f64,
    end: f64,
}

impl PulseTrain {
    /// `n` pulses at `t_k = k·period`, window closing at `n·period`.
    pub fn nominal(period: f64, n: usize) -> Result<Self> {
        positive(period, "pulse period")?;
        if n == 0 {
            return Err(Error::EmptyTrain);
        }
        let times = (0..n).map(|k| k as f64 * period).collect();
        Ok(Self {
            times,
            period,
            end: n as f64 * period,
        })
    }

    /// Arbitrary schedule. `end` closes the gate window after the last pulse.
    pub fn from_times(times: Vec<f64>, period: f64, end: f64) -> Result<Self> {
        positive(period, "pulse period")?;
        if times.is_empty() {
            return Err(Error::EmptyTrain);
        }
        if times.iter().chain(std::iter::once(&end)).any(|t| !t.is_finite()) {
            return Err(Error::domain("pulse times must be finite"));
        }
        Ok(Self { times, period, end })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// Nominal drive duration n·T.
    pub fn duration(&self) -> f64 {
        self.len() as f64 * self.period
    }

    /// Free-precession intervals following each pulse; the last one runs to the
    /// window end. Intervals can be negative for strongly jittered trains.
    pub fn intervals(&self) -> impl Iterator<Item = f64> + '_ {
        let next = self.times[1..].iter().chain(std::iter::once(&self.end));
        self.times.iter().zip(next).map(|(a, b)| b - a)
    }

    /// False if jitter reordered any pair of clock events.
    pub fn is_monotonic(&self) -> bool {
        self.intervals().all(|dt| dt > 0.0)
    }

    /// Applies a global time shift to all events.
    pub fn shifted(&self, dt: f64) -> Self {
        Self {
            times: self.times.iter().map(|t| t + dt).collect(),
            period: self.period,
            end: self.end + dt,
        }
    }
}

/// Resonant train: spacing of `cycles_per_pulse` oscillator periods at `omega`.
pub fn resonant_train(omega: f64, n: usize, cycles_per_pulse: u32) -> Result<PulseTrain> {
    positive(omega, "drive frequency")?;
    if cycles_per_pulse == 0 {
        return Err(Error::domain("cycles_per_pulse must be at least 1"));
    }
    PulseTrain::nominal(cycles_per_pulse as f64 * 2.0 * PI / omega, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClockMode {
    /// Each event jitters independently about the external clock grid.
    External,
    /// Spacing errors accumulate as a random walk.
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterModel {
    pub mode: ClockMode,
    /// Per-event timing standard deviation σ (s).
    pub sigma: f64,
    pub seed: u64,
    /// ChaCha stream selector; Monte Carlo trials use the trial index.
    pub stream: u64,
    /// Multiplier on σ, e.g. √N for a Josephson transmission line of N junctions.
    pub jtl_factor: f64,
}

impl JitterModel {
    pub fn new(mode: ClockMode, sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::domain(format!("jitter sigma must be non-negative, got {sigma}")));
        }
        Ok(Self {
            mode,
            sigma,
            seed,
            stream: 0,
            jtl_factor: 1.0,
        })
    }

    /// Scales σ by √`junctions`, the jitter growth along a transmission line.
    pub fn with_transmission_line(mut self, junctions: u32) -> Self {
        self.jtl_factor = (junctions.max(1) as f64).sqrt();
        self
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    /// Effective standard deviation σ·jtl_factor.
    pub fn effective_sigma(&self) -> f64 {
        self.sigma * self.jtl_factor
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Perturbs a nominal train according to `jm`.
///
/// External: `t_k = k·T + δt_k`. Internal: `t_k = k·T + Σ_{j≤k} δt_j`. The first
/// pulse stays at `t = 0`; the closing event is jittered like the pulses. The
/// input's period defines the grid. With σ = 0 the input is returned unchanged.
pub fn apply_jitter(train: &PulseTrain, jm: &JitterModel) -> PulseTrain {
    let sigma = jm.effective_sigma();
    if sigma == 0.0 {
        return train.clone();
    }
    let n = train.len();
    let period = train.period;
    let mut rng = jm.rng();
    let mut draws = (0..n).map(|_| {
        let z: f64 = StandardNormal.sample(&mut rng);
        sigma * z
    });

    let mut events = Vec::with_capacity(n + 1);
    events.push(0.0);
    let mut walk = 0.0;
    for k in 1..=n {
        let dt = draws.next().unwrap_or(0.0);
        let offset = match jm.mode {
            ClockMode::External => dt,
            ClockMode::Internal => {
                walk += dt;
                walk
            }
        };
        events.push(k as f64 * period + offset);
    }
    let end = events.pop().unwrap_or(n as f64 * period);
    PulseTrain {
        times: events,
        period,
        end,
    }
}

/// Pulse spacing and count for the bright/dark pointer-state protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerProtocol {
    pub period: f64,
    pub n: usize,
    /// Exact (ω₀+χ)/2χ minus the rounded pulse count.
    pub residue: f64,
}

impl PointerProtocol {
    pub fn train(&self) -> Result<PulseTrain> {
        PulseTrain::nominal(self.period, self.n)
    }
}

/// T = 2π/(ω₀+χ) and n = round((ω₀+χ)/2χ), rounding half away from zero.
pub fn pointer_protocol(omega0: f64, chi: f64) -> Result<PointerProtocol> {
    positive(omega0, "cavity omega0")?;
    positive(chi, "dispersive shift chi")?;
    if chi >= omega0 {
        return Err(Error::domain(format!(
            "dispersive shift chi ({chi}) must be smaller than omega0 ({omega0})"
        )));
    }
    let exact = (omega0 + chi) / (2.0 * chi);
    // snap ties lost to rounding error so that x.5 rounds away from zero
    let doubled = 2.0 * exact;
    let snapped = if (doubled - doubled.round()).abs() < 1e-9 * doubled {
        doubled.round() / 2.0
    } else {
        exact
    };
    let n = snapped.round();
    Ok(PointerProtocol {
        period: 2.0 * PI / (omega0 + chi),
        n: n as usize,
        residue: exact - n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::angular;

    #[test]
    fn forty_pulse_train_lasts_eight_ns() {
        let train = resonant_train(angular(5e9), 40, 1).unwrap();
        assert_eq!(train.len(), 40);
        assert!((train.duration() - 8e-9).abs() < 1e-22);
        assert_eq!(train.end(), train.duration());
    }

    #[test]
    fn single_pulse_train() {
        let train = resonant_train(1e10, 1, 1).unwrap();
        assert_eq!(train.times(), &[0.0]);
    }

    #[test]
    fn two_cycles_double_the_spacing() {
        let one = resonant_train(1e10, 5, 1).unwrap();
        let two = resonant_train(1e10, 5, 2).unwrap();
        assert_eq!(two.period(), 2.0 * one.period());
    }

    #[test]
    fn empty_train_is_an_error() {
        assert_eq!(resonant_train(1e10, 0, 1), Err(Error::EmptyTrain));
        assert!(resonant_train(-1.0, 3, 1).is_err());
    }

    #[test]
    fn nominal_spacing_is_exact() {
        let train = resonant_train(angular(5e9), 100, 1).unwrap();
        for (k, t) in train.times().iter().enumerate() {
            assert_eq!(*t, k as f64 * train.period());
        }
        assert!(train.intervals().all(|dt| (dt - train.period()).abs() < 1e-12 * train.period()));
        assert!(train.is_monotonic());
    }

    #[test]
    fn zero_sigma_is_identity() {
        let train = resonant_train(angular(5e9), 30, 1).unwrap();
        for mode in [ClockMode::External, ClockMode::Internal] {
            let jm = JitterModel::new(mode, 0.0, 7).unwrap();
            assert_eq!(apply_jitter(&train, &jm), train);
        }
    }

    #[test]
    fn jitter_is_seed_reproducible() {
        let train = resonant_train(angular(5e9), 50, 1).unwrap();
        let jm = JitterModel::new(ClockMode::Internal, 0.2e-12, 42).unwrap();
        let a = apply_jitter(&train, &jm);
        let b = apply_jitter(&train, &jm);
        assert_eq!(a, b);
        let c = apply_jitter(&train, &jm.with_stream(1));
        assert_ne!(a, c);
        assert_eq!(a.times()[0], 0.0);
    }

    #[test]
    fn transmission_line_scales_sigma() {
        let jm = JitterModel::new(ClockMode::External, 1e-13, 0)
            .unwrap()
            .with_transmission_line(16);
        assert!((jm.effective_sigma() - 4e-13).abs() < 1e-28);
        assert!(JitterModel::new(ClockMode::External, -1.0, 0).is_err());
    }

    #[test]
    fn large_jitter_can_reorder_events() {
        let train = PulseTrain::nominal(1.0, 200).unwrap();
        let jm = JitterModel::new(ClockMode::External, 2.0, 3).unwrap();
        let jittered = apply_jitter(&train, &jm);
        assert!(!jittered.is_monotonic());
        assert!(jittered.intervals().any(|dt| dt < 0.0));
    }

    #[test]
    fn pointer_protocol_paper_values() {
        let p = pointer_protocol(angular(5e9), angular(2.5e6)).unwrap();
        // (5000 + 2.5) / 5 = 1000.5 rounds away from zero
        assert_eq!(p.n, 1001);
        assert!((p.residue + 0.5).abs() < 1e-9);
        assert!((p.period - 2.0 * PI / (angular(5e9) + angular(2.5e6))).abs() < 1e-25);
    }

    #[test]
    fn pointer_protocol_exact_case() {
        let w = 3e10;
        let p = pointer_protocol(w, w / 3.0).unwrap();
        assert_eq!(p.n, 2);
        assert!(p.residue.abs() < 1e-12);
    }

    #[test]
    fn pointer_protocol_domain() {
        assert!(pointer_protocol(1e10, 1e10).is_err());
        assert!(pointer_protocol(1e10, 2e10).is_err());
        assert!(pointer_protocol(1e10, 0.0).is_err());
    }

    #[test]
    fn shape_constructors_validate() {
        assert!(PulseShape::rectangular(0.0).is_err());
        assert!(PulseShape::gaussian(-1.0).is_err());
        assert!(PulseShape::gaussian_with_cutoff(1e-12, 2.0).is_err());
        let g = PulseShape::gaussian(4e-12).unwrap();
        assert!((g.half_support() - 20e-12).abs() < 1e-25);
        assert_eq!(PulseShape::Delta.half_support(), 0.0);
    }
}
