//! Classical and quantum response of a linear cavity to SFQ pulse trains.
//!
//! The quantum cavity is tracked as a coherent amplitude: each delta pulse
//! displaces the state by α_SFQ, and in the frame rotating at ω₀ a pulse at
//! time t contributes α_SFQ·e^{−iω₀t}.

use std::f64::consts::PI;

use crate::error::{positive, Result};
use crate::linalg::C64;
use crate::params::{sfq_displacement, single_pulse_energy, CavityParams, PhysConst};
use crate::pulses::{pointer_protocol, PointerProtocol, PulseShape, PulseTrain};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentState {
    pub alpha: C64,
    pub omega0: f64,
}

impl CoherentState {
    pub fn photons(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn energy(&self, k: &PhysConst) -> f64 {
        k.hbar * self.omega0 * self.photons()
    }
}

/// |Σ_{k<n} e^{−ikx}|² = sin²(nx/2)/sin²(x/2), with the resonant limit n² taken
/// analytically near x = 2πm.
pub fn dirichlet_ratio(x: f64, n: usize) -> f64 {
    let n = n as f64;
    let half = 0.5 * x;
    let reduced = half - PI * (half / PI).round();
    if (n * reduced).abs() < 1e-4 {
        let r2 = reduced * reduced;
        n * n * (1.0 - (n * n - 1.0) * r2 / 3.0)
    } else {
        let ratio = (n * reduced).sin() / reduced.sin();
        ratio * ratio
    }
}

/// E_n = E₁ sin²(nω₀T/2)/sin²(ω₀T/2) for `n` delta pulses spaced by `period`.
pub fn train_energy_closed_form(
    cav: &CavityParams,
    period: f64,
    n: usize,
    k: &PhysConst,
) -> Result<f64> {
    let e1 = single_pulse_energy(cav, k)?;
    Ok(e1 * dirichlet_ratio(cav.omega0() * period, n))
}

/// Σ_k e^{−iωt_k} over the pulse times of `train`.
pub fn phase_sum(omega: f64, train: &PulseTrain) -> C64 {
    train
        .times()
        .iter()
        .map(|&t| C64::from_polar(1.0, -omega * t))
        .sum()
}

/// Coherent state left in the cavity after `train`: α = α_SFQ Σ_k e^{−iω₀t_k}.
pub fn coherent_amplitude(
    cav: &CavityParams,
    train: &PulseTrain,
    k: &PhysConst,
) -> Result<CoherentState> {
    let alpha_sfq = sfq_displacement(cav, k)?;
    Ok(CoherentState {
        alpha: phase_sum(cav.omega0(), train) * alpha_sfq,
        omega0: cav.omega0(),
    })
}

/// Fourier amplitude |Ṽ(ω)| of a single SFQ pulse of the given shape.
pub fn pulse_spectrum(shape: &PulseShape, omega: f64, flux_quantum: f64) -> f64 {
    match *shape {
        PulseShape::Delta => flux_quantum,
        PulseShape::Gaussian { tau, .. } => flux_quantum * (-0.5 * (omega * tau).powi(2)).exp(),
        PulseShape::Rectangular { half_width } => {
            let x = omega * half_width;
            if x == 0.0 {
                flux_quantum
            } else {
                flux_quantum * x.sin() / x
            }
        }
    }
}

/// Energy (ω₀²Cc²/2C')·|Ṽ(ω₀)|² deposited by one pulse of the given shape.
pub fn spectral_energy(cav: &CavityParams, shape: &PulseShape, k: &PhysConst) -> Result<f64> {
    let v = pulse_spectrum(shape, cav.omega0(), k.flux_quantum);
    let w = cav.omega0();
    Ok(w * w * cav.cc() * cav.cc() * v * v / (2.0 * cav.c_prime()))
}

/// Cavity states produced by the pointer protocol for each qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerStates {
    pub protocol: PointerProtocol,
    /// Qubit in |1⟩: cavity at ω₀ + χ, driven on resonance.
    pub bright: CoherentState,
    /// Qubit in |0⟩: cavity at ω₀ − χ, returned towards vacuum.
    pub dark: CoherentState,
}

impl PointerStates {
    /// Bright over dark photon number; infinite if the dark state is exactly empty.
    pub fn contrast(&self) -> f64 {
        self.bright.photons() / self.dark.photons()
    }
}

/// Runs the bright/dark protocol on a cavity with dispersive shift `chi`.
///
/// The per-pulse displacement is taken from the bare cavity; χ only shifts the
/// frequency at which the phases accumulate.
pub fn pointer_states(cav: &CavityParams, chi: f64, k: &PhysConst) -> Result<PointerStates> {
    let protocol = pointer_protocol(cav.omega0(), chi)?;
    let train = protocol.train()?;
    let alpha_sfq = sfq_displacement(cav, k)?;
    let state = |omega: f64| CoherentState {
        alpha: phase_sum(omega, &train) * alpha_sfq,
        omega0: omega,
    };
    Ok(PointerStates {
        protocol,
        bright: state(cav.omega0() + chi),
        dark: state(cav.omega0() - chi),
    })
}

/// Time-domain simulation of the classical LC resonator driven through Cc by a
/// train of box pulses of area Φ₀, each one grid step wide.
///
/// Integrates φ̇ = (q + Cc·V)/C', q̇ = −φ/L with classical RK4 on a grid of
/// `steps_per_period` points per oscillator period, aligned so every pulse
/// starts on a grid point, and returns the stored energy after the last pulse.
/// This is independent of the spectral formulas and serves as their oracle.
pub fn lc_time_domain_energy(
    cav: &CavityParams,
    train: &PulseTrain,
    steps_per_period: usize,
    k: &PhysConst,
) -> Result<f64> {
    positive(steps_per_period as f64, "steps_per_period")?;
    let osc_period = 2.0 * PI / cav.omega0();
    let spacing = train.period();
    let per_spacing = ((steps_per_period as f64) * spacing / osc_period).ceil().max(1.0) as usize;
    let h = spacing / per_spacing as f64;

    let c_prime = cav.c_prime();
    let inv_l = cav.omega0() * cav.omega0() * c_prime;
    let cc = cav.cc();
    let pulse_steps: Vec<usize> = train.times().iter().map(|t| (t / h).round() as usize).collect();
    let last = pulse_steps.iter().copied().max().unwrap_or(0);
    let v_on = k.flux_quantum / h;

    let deriv = |q: f64, phi: f64, v: f64| ((-phi * inv_l), (q + cc * v) / c_prime);
    let (mut q, mut phi) = (0.0f64, 0.0f64);
    let mut next_pulse = 0;
    let mut sorted = pulse_steps.clone();
    sorted.sort_unstable();
    for step in 0..=last {
        let mut v = 0.0;
        while next_pulse < sorted.len() && sorted[next_pulse] == step {
            v += v_on;
            next_pulse += 1;
        }
        let (k1q, k1p) = deriv(q, phi, v);
        let (k2q, k2p) = deriv(q + 0.5 * h * k1q, phi + 0.5 * h * k1p, v);
        let (k3q, k3p) = deriv(q + 0.5 * h * k2q, phi + 0.5 * h * k2p, v);
        let (k4q, k4p) = deriv(q + h * k3q, phi + h * k3p, v);
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        phi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    Ok(q * q / (2.0 * c_prime) + 0.5 * phi * phi * inv_l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::angular;
    use crate::pulses::resonant_train;

    const K: PhysConst = PhysConst::CODATA;

    fn cavity() -> CavityParams {
        CavityParams::new(angular(5e9), 1e-12, 1e-15).unwrap()
    }

    #[test]
    fn single_pulse_energy_is_e1() {
        let cav = cavity();
        let e1 = single_pulse_energy(&cav, &K).unwrap();
        assert_eq!(train_energy_closed_form(&cav, 1.3e-10, 1, &K).unwrap(), e1);
        let train = PulseTrain::nominal(1e-10, 1).unwrap();
        let state = coherent_amplitude(&cav, &train, &K).unwrap();
        assert_eq!(state.alpha.re, sfq_displacement(&cav, &K).unwrap());
    }

    #[test]
    fn forty_resonant_pulses_give_one_photon() {
        let cav = cavity();
        let train = resonant_train(cav.omega0(), 40, 1).unwrap();
        let e = train_energy_closed_form(&cav, train.period(), 40, &K).unwrap();
        let photons = e / (K.hbar * cav.omega0());
        assert!(photons > 0.98 && photons < 1.05, "photons = {photons}");
    }

    #[test]
    fn alternating_pulses_cancel() {
        let cav = cavity();
        let half = PI / cav.omega0();
        assert!(train_energy_closed_form(&cav, half, 2, &K).unwrap() < 1e-40);
    }

    #[test]
    fn resonance_limit_is_smooth() {
        let x = 2.0 * PI;
        assert_eq!(dirichlet_ratio(x, 7), 49.0);
        let near = dirichlet_ratio(x + 1e-9, 7);
        let off = dirichlet_ratio(x + 1e-3, 7);
        let direct = ((7.0 * (x + 1e-3) / 2.0).sin() / ((x + 1e-3) / 2.0).sin()).powi(2);
        assert!((near - 49.0).abs() < 1e-12);
        assert!((off - direct).abs() / direct < 1e-9);
    }

    #[test]
    fn spectral_energy_shapes() {
        let cav = cavity();
        let e1 = single_pulse_energy(&cav, &K).unwrap();
        assert_eq!(spectral_energy(&cav, &PulseShape::Delta, &K).unwrap(), e1);
        let g = PulseShape::gaussian(0.5e-12).unwrap();
        let ratio = spectral_energy(&cav, &g, &K).unwrap() / e1;
        assert!(((1.0 - ratio) - 2.467e-4).abs() < 1e-6);
        let full = PulseShape::rectangular(PI / cav.omega0()).unwrap();
        assert!(spectral_energy(&cav, &full, &K).unwrap() / e1 < 1e-30);
    }

    #[test]
    fn pointer_bright_and_dark() {
        let cav = cavity();
        let chi = cav.omega0() / 3.0;
        let states = pointer_states(&cav, chi, &K).unwrap();
        assert_eq!(states.protocol.n, 2);
        let alpha_sfq = sfq_displacement(&cav, &K).unwrap().abs();
        assert!(states.dark.alpha.norm() < 1e-10 * 2.0 * alpha_sfq);
        assert!((states.bright.alpha.norm() - 2.0 * alpha_sfq).abs() < 1e-12 * alpha_sfq);
    }

    #[test]
    fn pointer_rounding_residue_leaves_small_dark_amplitude() {
        let cav = cavity();
        let states = pointer_states(&cav, angular(2.5e6), &K).unwrap();
        assert!(states.contrast() > 1e6, "contrast = {}", states.contrast());
    }

    #[test]
    fn time_domain_single_pulse() {
        let cav = cavity();
        let train = PulseTrain::nominal(2.0 * PI / cav.omega0(), 1).unwrap();
        let e = lc_time_domain_energy(&cav, &train, 10_000, &K).unwrap();
        let e1 = single_pulse_energy(&cav, &K).unwrap();
        assert!((e - e1).abs() / e1 < 1e-6);
    }
}
