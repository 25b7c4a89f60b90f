//! Physical constants, circuit parameters and the scalar quantities derived
//! from them: single-pulse energy, cavity displacement and qubit tip angle.
//!
//! Frequencies are angular (rad/s) everywhere in the library.

use std::f64::consts::PI;

use crate::error::{finite, positive, Error, Result};

/// Physical constants used by the coupling formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConst {
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Superconducting flux quantum h/2e (Wb).
    pub flux_quantum: f64,
}

impl PhysConst {
    pub const CODATA: PhysConst = PhysConst {
        hbar: 1.054_571_817e-34,
        flux_quantum: 2.067_833_848e-15,
    };
}

impl Default for PhysConst {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Converts an ordinary frequency in Hz to an angular frequency.
pub fn angular(hz: f64) -> f64 {
    2.0 * PI * hz
}

/// Linear cavity mode capacitively coupled to the SFQ drive line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    omega0: f64,
    c: f64,
    cc: f64,
}

impl CavityParams {
    /// `omega0` in rad/s, capacitances in farads. A zero coupling capacitance is
    /// allowed and yields a decoupled cavity.
    pub fn new(omega0: f64, c: f64, cc: f64) -> Result<Self> {
        positive(omega0, "cavity omega0")?;
        positive(c, "cavity capacitance C")?;
        if !(cc.is_finite() && cc >= 0.0) {
            return Err(Error::domain(format!(
                "coupling capacitance Cc must be non-negative, got {cc}"
            )));
        }
        Ok(Self { omega0, c, cc })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn cc(&self) -> f64 {
        self.cc
    }

    /// Total node capacitance C' = C + Cc.
    pub fn c_prime(&self) -> f64 {
        self.c + self.cc
    }
}

/// How the per-pulse tip angle of a qubit is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitCoupling {
    /// Qubit capacitance `c` and coupling capacitance `cc` (F).
    Capacitive { c: f64, cc: f64 },
    /// Per-pulse rotation angle given directly (rad).
    Angle(f64),
}

/// Transmon-like qubit with its two lowest transition frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    omega10: f64,
    omega21: f64,
    coupling: Option<QubitCoupling>,
}

impl QubitParams {
    /// Three-level qubit; `omega21` is ignored by two-level calculations.
    pub fn new(omega10: f64, omega21: f64) -> Result<Self> {
        positive(omega10, "qubit omega10")?;
        positive(omega21, "qubit omega21")?;
        Ok(Self {
            omega10,
            omega21,
            coupling: None,
        })
    }

    /// Harmonic (η = 0) qubit, suitable wherever only the 0–1 transition matters.
    pub fn two_level(omega10: f64) -> Result<Self> {
        Self::new(omega10, omega10)
    }

    /// Builds the qubit from ω₁₀ and the anharmonicity η = (ω₁₀ − ω₂₁)/ω₁₀.
    pub fn from_anharmonicity(omega10: f64, eta: f64) -> Result<Self> {
        Self::new(omega10, omega10 * (1.0 - eta))
    }

    pub fn with_capacitive_coupling(mut self, c: f64, cc: f64) -> Result<Self> {
        positive(c, "qubit capacitance C")?;
        if !(cc.is_finite() && cc >= 0.0) {
            return Err(Error::domain(format!(
                "coupling capacitance Cc must be non-negative, got {cc}"
            )));
        }
        self.coupling = Some(QubitCoupling::Capacitive { c, cc });
        Ok(self)
    }

    pub fn with_pulse_angle(mut self, delta_theta: f64) -> Result<Self> {
        finite(delta_theta, "per-pulse angle")?;
        self.coupling = Some(QubitCoupling::Angle(delta_theta));
        Ok(self)
    }

    pub fn omega10(&self) -> f64 {
        self.omega10
    }

    pub fn omega21(&self) -> f64 {
        self.omega21
    }

    pub fn coupling(&self) -> Option<QubitCoupling> {
        self.coupling
    }

    /// Anharmonicity η = (ω₁₀ − ω₂₁)/ω₁₀.
    pub fn eta(&self) -> f64 {
        (self.omega10 - self.omega21) / self.omega10
    }

    /// Larmor period 2π/ω₁₀.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega10
    }
}

/// Rotation angle δθ = Cc Φ₀ √(2ω₁₀/(ħC)) imparted by one SFQ pulse.
///
/// A [`QubitCoupling::Angle`] override is returned unchanged.
pub fn delta_theta(q: &QubitParams, k: &PhysConst) -> Result<f64> {
    match q.coupling {
        Some(QubitCoupling::Angle(a)) => Ok(a),
        Some(QubitCoupling::Capacitive { c, cc }) => finite(
            cc * k.flux_quantum * (2.0 * q.omega10 / (k.hbar * c)).sqrt(),
            "delta_theta",
        ),
        None => Err(Error::domain(
            "qubit has no coupling; set a capacitive coupling or a pulse angle",
        )),
    }
}

/// Coupling capacitance that produces the per-pulse angle `target`; inverse of
/// [`delta_theta`] for a capacitive coupling.
pub fn coupling_for_angle(target: f64, omega10: f64, c: f64, k: &PhysConst) -> Result<f64> {
    positive(omega10, "qubit omega10")?;
    positive(c, "qubit capacitance C")?;
    finite(
        target / (k.flux_quantum * (2.0 * omega10 / (k.hbar * c)).sqrt()),
        "coupling capacitance",
    )
}

/// Coherent displacement α_SFQ = −Cc Φ₀ √(ω₀/(2ħC')) produced by one pulse.
pub fn sfq_displacement(cav: &CavityParams, k: &PhysConst) -> Result<f64> {
    finite(
        -cav.cc * k.flux_quantum * (cav.omega0 / (2.0 * k.hbar * cav.c_prime())).sqrt(),
        "alpha_sfq",
    )
}

/// Energy E₁ = ω₀² Cc² Φ₀² / (2C') deposited by a single delta pulse.
pub fn single_pulse_energy(cav: &CavityParams, k: &PhysConst) -> Result<f64> {
    let flux = cav.cc * k.flux_quantum;
    finite(
        cav.omega0 * cav.omega0 * flux * flux / (2.0 * cav.c_prime()),
        "single pulse energy",
    )
}

/// Energy suppression factor e^{−ω₀²τ²} of a Gaussian pulse with standard deviation `tau`.
pub fn gaussian_correction(omega0: f64, tau: f64) -> Result<f64> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::domain(format!("tau must be non-negative, got {tau}")));
    }
    Ok((-(omega0 * tau).powi(2)).exp())
}
