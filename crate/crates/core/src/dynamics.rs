//! Unitary evolution of two- and three-level qubits under SFQ pulse trains,
//! and the gate-fidelity metrics used to score it.
//!
//! # Conventions
//!
//! A delta pulse acts as exp(iδθσ_y/2) and free precession as
//! exp(iω₁₀tσ_z/2). The three-level operators use exp(−iH_free t/ħ) with
//! H_free = diag(0, ħω₁₀, ħ(ω₁₀+ω₂₁)), which equals the two-level free
//! precession up to the global phase e^{iω₁₀t/2}. The three-level drive
//! generator is oriented so that its 0–1 block reproduces exp(iδθσ_y/2);
//! finite-width Hamiltonians carry the same orientation. All fidelities are
//! insensitive to global phases.
//!
//! A gate of `n` pulses is `n` cycles of (pulse, free precession to the next
//! clock event), ending on the event that follows the last pulse. A pulse of
//! finite support (−t_c, t_c) enters as U_f(−t_c)·U_pulse·U_f(−t_c), which
//! keeps its centre on the clock event.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{pauli, Mat, Mat2, Mat3, C64, I, ONE, ZERO};
use crate::params::QubitParams;
use crate::pulses::{PulseShape, PulseTrain};

/// Default number of midpoint steps across a Gaussian pulse.
pub const DEFAULT_GAUSSIAN_STEPS: usize = 10_000;
/// Fewer steps than this are rejected.
pub const MIN_GAUSSIAN_STEPS: usize = 1_000;
/// Largest accepted max|U†U − 1| for fidelity inputs.
pub const UNITARITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Levels {
    Two,
    Three,
}

impl Levels {
    pub fn dim(self) -> usize {
        match self {
            Levels::Two => 2,
            Levels::Three => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Unitary {
    Two(Mat2),
    Three(Mat3),
}

impl Unitary {
    pub fn dim(&self) -> usize {
        match self {
            Unitary::Two(_) => 2,
            Unitary::Three(_) => 3,
        }
    }

    pub fn unitarity_defect(&self) -> f64 {
        match self {
            Unitary::Two(m) => m.unitarity_defect(),
            Unitary::Three(m) => m.unitarity_defect(),
        }
    }

    pub fn as_two(&self) -> Option<&Mat2> {
        match self {
            Unitary::Two(m) => Some(m),
            Unitary::Three(_) => None,
        }
    }

    pub fn as_three(&self) -> Option<&Mat3> {
        match self {
            Unitary::Three(m) => Some(m),
            Unitary::Two(_) => None,
        }
    }
}

/// Normalised state of a qubit (N = 2) or qutrit (N = 3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector<const N: usize>(pub [C64; N]);

impl<const N: usize> StateVector<N> {
    pub fn basis(level: usize) -> Self {
        let mut v = [ZERO; N];
        v[level] = ONE;
        Self(v)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn evolve(&self, u: &Mat<N>) -> Self {
        Self(u.apply(&self.0))
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn population(&self, level: usize) -> f64 {
        self.0[level].norm_sqr()
    }
}

/// Target rotation Θ about y built from `n` equal pulses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    pub theta: f64,
    pub n: usize,
}

impl GateSpec {
    pub fn new(theta: f64, n: usize) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::domain("rotation angle must be finite"));
        }
        if n == 0 {
            return Err(Error::EmptyTrain);
        }
        Ok(Self { theta, n })
    }

    pub fn delta_theta(&self) -> f64 {
        self.theta / self.n as f64
    }
}

/// exp(iδθσ_y/2) = [[cos, sin], [−sin, cos]] of δθ/2.
pub fn delta_pulse_unitary_2lvl(delta_theta: f64) -> Mat2 {
    pauli::exp_i([0.0, 0.5 * delta_theta, 0.0])
}

/// exp(iω₁₀tσ_z/2); negative `t` is allowed.
pub fn free_evolution_2lvl(t: f64, omega10: f64) -> Mat2 {
    pauli::exp_i([0.0, 0.0, 0.5 * omega10 * t])
}

/// exp(i(2ω₁₀t_cσ_z + δθσ_y)/2): precession during a rectangular pulse of width 2t_c.
pub fn rect_pulse_unitary(delta_theta: f64, tc: f64, omega10: f64) -> Mat2 {
    pauli::exp_i([0.0, 0.5 * delta_theta, omega10 * tc])
}

/// U_f(t_c)·exp(iδθσ_y/2)·U_f(t_c): a delta pulse centred in a window of width 2t_c.
pub fn delta_reference_2lvl(delta_theta: f64, tc: f64, omega10: f64) -> Mat2 {
    let f = free_evolution_2lvl(tc, omega10);
    f * delta_pulse_unitary_2lvl(delta_theta) * f
}

/// Real skew-symmetric ladder generator of the three-level drive; its 0–1 block
/// is iσ_y.
pub fn drive_generator_3lvl() -> Mat3 {
    let r2 = 2f64.sqrt();
    Mat3::from_real([[0.0, 1.0, 0.0], [-1.0, 0.0, r2], [0.0, -r2, 0.0]])
}

/// exp((δθ/2)·G) for the three-level drive generator, by the Rodrigues formula
/// (G³ = −3G).
pub fn delta_pulse_unitary_3lvl(delta_theta: f64) -> Mat3 {
    let g = drive_generator_3lvl();
    let root3 = 3f64.sqrt();
    let a = 0.5 * delta_theta * root3;
    let s = C64::new(a.sin() / root3, 0.0);
    let c = C64::new((1.0 - a.cos()) / 3.0, 0.0);
    Mat3::identity() + g.scale(s) + (g * g).scale(c)
}

/// diag(1, e^{−iω₁₀t}, e^{−i(ω₁₀+ω₂₁)t}).
pub fn free_evolution_3lvl(t: f64, q: &QubitParams) -> Mat3 {
    Mat3::diag([
        ONE,
        C64::from_polar(1.0, -q.omega10() * t),
        C64::from_polar(1.0, -(q.omega10() + q.omega21()) * t),
    ])
}

fn free_evolution(levels: Levels, t: f64, q: &QubitParams) -> Unitary {
    match levels {
        Levels::Two => Unitary::Two(free_evolution_2lvl(t, q.omega10())),
        Levels::Three => Unitary::Three(free_evolution_3lvl(t, q)),
    }
}

/// −i·dt·H/ħ for the three-level Hamiltonian with drive amplitude `f` (rad/s).
fn qutrit_step_generator(q: &QubitParams, f: f64, dt: f64) -> Mat3 {
    let diag = Mat3::diag([
        ZERO,
        C64::new(0.0, -q.omega10() * dt),
        C64::new(0.0, -(q.omega10() + q.omega21()) * dt),
    ]);
    diag + drive_generator_3lvl().scale(C64::new(f * dt, 0.0))
}

/// Propagator over (−cutoff·τ, cutoff·τ) for a Gaussian pulse of area δθ.
///
/// The drive envelope is δθ/(2√(2π)τ)·e^{−t²/2τ²} on top of free precession;
/// the time-ordered product is built from `steps` piecewise-constant
/// exponentials sampled at interval midpoints, starting from the identity.
pub fn gaussian_pulse_unitary(
    delta_theta: f64,
    tau: f64,
    cutoff: f64,
    steps: usize,
    levels: Levels,
    q: &QubitParams,
) -> Result<Unitary> {
    if steps < MIN_GAUSSIAN_STEPS {
        return Err(Error::config(format!(
            "gaussian integration needs at least {MIN_GAUSSIAN_STEPS} steps, got {steps}"
        )));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!("gaussian tau must be positive, got {tau}")));
    }
    let tc = cutoff * tau;
    let dt = 2.0 * tc / steps as f64;
    let amplitude = delta_theta / (2.0 * (2.0 * PI).sqrt() * tau);
    let envelope = |k: usize| {
        let t = -tc + (k as f64 + 0.5) * dt;
        amplitude * (-0.5 * (t / tau).powi(2)).exp()
    };
    Ok(match levels {
        Levels::Two => {
            let half_w = 0.5 * q.omega10() * dt;
            let u = (0..steps).fold(Mat2::identity(), |u, k| {
                pauli::exp_i([0.0, envelope(k) * dt, half_w]) * u
            });
            Unitary::Two(u)
        }
        Levels::Three => {
            let u = (0..steps).fold(Mat3::identity(), |u, k| {
                qutrit_step_generator(q, envelope(k), dt).expm() * u
            });
            Unitary::Three(u)
        }
    })
}

/// Constant drive δθ/(4t_c) for time 2t_c; the two-level case is
/// [`rect_pulse_unitary`].
fn rect_pulse(delta_theta: f64, tc: f64, levels: Levels, q: &QubitParams) -> Unitary {
    match levels {
        Levels::Two => Unitary::Two(rect_pulse_unitary(delta_theta, tc, q.omega10())),
        Levels::Three => {
            let f = delta_theta / (4.0 * tc);
            Unitary::Three(qutrit_step_generator(q, f, 2.0 * tc).expm())
        }
    }
}

/// Single-pulse operator referred to the pulse centre:
/// U_f(−t_c)·U_pulse·U_f(−t_c); equal to the bare delta pulse for `Delta`.
pub fn centred_pulse(
    shape: &PulseShape,
    delta_theta: f64,
    levels: Levels,
    q: &QubitParams,
) -> Result<Unitary> {
    let raw = match *shape {
        PulseShape::Delta => {
            return Ok(match levels {
                Levels::Two => Unitary::Two(delta_pulse_unitary_2lvl(delta_theta)),
                Levels::Three => Unitary::Three(delta_pulse_unitary_3lvl(delta_theta)),
            })
        }
        PulseShape::Rectangular { half_width } => rect_pulse(delta_theta, half_width, levels, q),
        PulseShape::Gaussian { tau, cutoff } => {
            gaussian_pulse_unitary(delta_theta, tau, cutoff, DEFAULT_GAUSSIAN_STEPS, levels, q)?
        }
    };
    let back = free_evolution(levels, -shape.half_support(), q);
    Ok(match (back, raw) {
        (Unitary::Two(b), Unitary::Two(p)) => Unitary::Two(b * p * b),
        (Unitary::Three(b), Unitary::Three(p)) => Unitary::Three(b * p * b),
        _ => unreachable!("levels fixed above"),
    })
}

fn compose_with<const N: usize>(
    pulse: Mat<N>,
    train: &PulseTrain,
    free: impl Fn(f64) -> Mat<N>,
) -> Mat<N> {
    train
        .intervals()
        .fold(Mat::<N>::identity(), |u, dt| free(dt) * pulse * u)
}

/// Gate propagator for `train` with pulses of `shape`, each of angle Θ/n.
pub fn compose_gate(
    spec: &GateSpec,
    train: &PulseTrain,
    shape: &PulseShape,
    levels: Levels,
    q: &QubitParams,
) -> Result<Unitary> {
    if train.len() != spec.n {
        return Err(Error::config(format!(
            "train has {} pulses but the gate expects {}",
            train.len(),
            spec.n
        )));
    }
    let pulse = centred_pulse(shape, spec.delta_theta(), levels, q)?;
    compose_with_pulse(&pulse, train, q)
}

/// Gate propagator from a precomputed centred pulse operator.
pub fn compose_with_pulse(pulse: &Unitary, train: &PulseTrain, q: &QubitParams) -> Result<Unitary> {
    Ok(match pulse {
        Unitary::Two(p) => {
            Unitary::Two(compose_with(*p, train, |t| free_evolution_2lvl(t, q.omega10())))
        }
        Unitary::Three(p) => Unitary::Three(compose_with(*p, train, |t| free_evolution_3lvl(t, q))),
    })
}

/// exp(iΘσ_y/2), embedded as a block with an untouched |2⟩ for three levels.
pub fn ideal_gate(theta: f64, levels: Levels) -> Unitary {
    let r = delta_pulse_unitary_2lvl(theta);
    match levels {
        Levels::Two => Unitary::Two(r),
        Levels::Three => {
            let mut m = Mat3::identity();
            for i in 0..2 {
                for j in 0..2 {
                    m[(i, j)] = r[(i, j)];
                }
            }
            Unitary::Three(m)
        }
    }
}

fn check_pair<'a>(u_id: &'a Unitary, u_g: &'a Unitary) -> Result<()> {
    if u_id.dim() != u_g.dim() {
        return Err(Error::config(format!(
            "dimension mismatch: ideal {} vs actual {}",
            u_id.dim(),
            u_g.dim()
        )));
    }
    for (name, u) in [("ideal", u_id), ("actual", u_g)] {
        let defect = u.unitarity_defect();
        if defect.is_nan() || defect > UNITARITY_TOLERANCE {
            return Err(Error::Validation(format!(
                "{name} operator is not unitary: max|U†U − 1| = {defect:e}"
            )));
        }
    }
    Ok(())
}

/// Average gate infidelity 1 − F_avg, evaluated without forming F first.
///
/// Two levels: (4 − |Tr U_id†U_G|²)/6. Three levels, averaged over the qubit
/// subspace with projector P: (6 − Tr{U_G†PU_GP} − |Tr{PU_id†U_G}|²)/6.
pub fn avg_infidelity(u_id: &Unitary, u_g: &Unitary) -> Result<f64> {
    check_pair(u_id, u_g)?;
    Ok(match (u_id, u_g) {
        (Unitary::Two(a), Unitary::Two(b)) => (4.0 - (a.adjoint() * *b).trace().norm_sqr()) / 6.0,
        (Unitary::Three(a), Unitary::Three(b)) => {
            // Tr{U†PUP} = Σ_{i,j<2} |U_ij|²
            let kept: f64 = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| b[(i, j)].norm_sqr())
                .sum();
            let overlap = a.adjoint() * *b;
            let tr = overlap[(0, 0)] + overlap[(1, 1)];
            ((2.0 - kept) + (4.0 - tr.norm_sqr())) / 6.0
        }
        _ => unreachable!("dimensions checked"),
    })
}

/// State-averaged gate fidelity F_avg.
pub fn avg_fidelity(u_id: &Unitary, u_g: &Unitary) -> Result<f64> {
    avg_infidelity(u_id, u_g).map(|e| 1.0 - e)
}

/// The six Pauli eigenstates, ordered +x, −x, +y, −y, +z, −z.
pub fn pauli_states() -> [StateVector<2>; 6] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| C64::new(x, 0.0);
    [
        StateVector([re(r), re(r)]),
        StateVector([re(r), re(-r)]),
        StateVector([re(r), I * r]),
        StateVector([re(r), -I * r]),
        StateVector([ONE, ZERO]),
        StateVector([ZERO, ONE]),
    ]
}

/// 1 − |⟨ψ_id|ψ_G⟩|² for each Pauli eigenstate (order of [`pauli_states`]).
pub fn pauli_state_errors(u_id: &Mat2, u_g: &Mat2) -> [f64; 6] {
    pauli_states().map(|psi| {
        let ideal = psi.evolve(u_id);
        let actual = psi.evolve(u_g);
        1.0 - ideal.inner(&actual).norm_sqr()
    })
}

/// Average over the six Pauli eigenstates of Tr{U_G ρ U_G† U_id ρ U_id†}.
pub fn pauli_avg_fidelity(u_id: &Unitary, u_g: &Unitary) -> Result<f64> {
    check_pair(u_id, u_g)?;
    match (u_id, u_g) {
        (Unitary::Two(a), Unitary::Two(b)) => {
            Ok(1.0 - pauli_state_errors(a, b).iter().sum::<f64>() / 6.0)
        }
        _ => Err(Error::config("Pauli-state average needs two-level operators")),
    }
}

/// P₂ = |⟨2|U_G|j⟩|² for initial level `j` ∈ {0, 1}.
pub fn leakage_population(u_g: &Mat3, j: usize) -> Result<f64> {
    if j > 1 {
        return Err(Error::domain(format!("initial level must be 0 or 1, got {j}")));
    }
    Ok(u_g[(2, j)].norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::angular;
    use crate::pulses::resonant_train;
    use std::f64::consts::FRAC_PI_2;

    fn dist<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> f64 {
        (*a - *b).max_abs()
    }

    fn qubit() -> QubitParams {
        QubitParams::new(angular(5e9), angular(4.8e9)).unwrap()
    }

    #[test]
    fn delta_pulse_basics() {
        assert_eq!(delta_pulse_unitary_2lvl(0.0), Mat2::identity());
        let half_turn = delta_pulse_unitary_2lvl(PI);
        let out = StateVector::<2>::basis(0).evolve(&half_turn);
        assert!((out.0[1] + ONE).norm() < 1e-15 && out.0[0].norm() < 1e-15);
    }

    #[test]
    fn delta_pulse_power_matches_closed_form() {
        let d = PI / 200.0;
        let p = delta_pulse_unitary_2lvl(d);
        let u = (0..100).fold(Mat2::identity(), |u, _| p * u);
        assert!(dist(&u, &delta_pulse_unitary_2lvl(100.0 * d)) < 1e-12);
    }

    #[test]
    fn free_evolution_2lvl_properties() {
        let w = angular(5e9);
        assert_eq!(free_evolution_2lvl(0.0, w), Mat2::identity());
        let full = free_evolution_2lvl(2.0 * PI / w, w);
        assert!(dist(&full, &Mat2::identity().scale(-ONE)) < 1e-14);
        let t = 3.7e-11;
        assert!(dist(&(free_evolution_2lvl(t, w) * free_evolution_2lvl(-t, w)), &Mat2::identity()) < 1e-15);
    }

    #[test]
    fn rect_pulse_limits() {
        let w = angular(5e9);
        let tc = 2e-12;
        assert!(dist(&rect_pulse_unitary(0.0, tc, w), &free_evolution_2lvl(2.0 * tc, w)) < 1e-15);
        let d = 0.3;
        let mut last = f64::INFINITY;
        for tc in [1e-12, 1e-13, 1e-14, 1e-15] {
            let e = dist(&rect_pulse_unitary(d, tc, w), &delta_pulse_unitary_2lvl(d));
            assert!(e < last && e < 2.0 * w * tc);
            last = e;
        }
    }

    #[test]
    fn three_level_pulse_is_orthogonal() {
        assert_eq!(delta_pulse_unitary_3lvl(0.0), Mat3::identity());
        for d in [0.01, 0.5, PI, 4.0] {
            let u = delta_pulse_unitary_3lvl(d);
            assert!((u.transpose() * u - Mat3::identity()).max_abs() < 1e-13);
            assert!(u.0.iter().flatten().all(|e| e.im == 0.0));
            let series = drive_generator_3lvl().scale(C64::new(0.5 * d, 0.0)).expm();
            assert!(dist(&u, &series) < 1e-13);
        }
    }

    #[test]
    fn three_level_block_approaches_two_level() {
        // deviation of the 0–1 block is second order in δθ
        for d in [1e-2, 1e-3] {
            let u3 = delta_pulse_unitary_3lvl(d);
            let u2 = delta_pulse_unitary_2lvl(d);
            let dev = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| (u3[(i, j)] - u2[(i, j)]).norm())
                .fold(0.0, f64::max);
            assert!(dev < d * d && dev > 0.1 * d * d, "dev = {dev}");
        }
    }

    #[test]
    fn free_evolution_3lvl_phases() {
        let harmonic = QubitParams::from_anharmonicity(angular(5e9), 0.0).unwrap();
        assert_eq!(free_evolution_3lvl(0.0, &harmonic), Mat3::identity());
        let period = harmonic.period();
        assert!(dist(&free_evolution_3lvl(period, &harmonic), &Mat3::identity()) < 1e-12);
        let q = qubit();
        let u = free_evolution_3lvl(q.period(), &q);
        let expected = C64::from_polar(1.0, 2.0 * PI * 0.04);
        assert!((u[(2, 2)] - expected).norm() < 1e-12);
        assert!((u[(1, 1)] - ONE).norm() < 1e-12);
    }

    #[test]
    fn fidelity_identities() {
        let u = ideal_gate(0.7, Levels::Two);
        assert!((avg_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-15);
        let Unitary::Two(m) = u else { unreachable!() };
        let phased = Unitary::Two(m.scale(C64::from_polar(1.0, 0.9)));
        assert!((avg_fidelity(&u, &phased).unwrap() - 1.0).abs() < 1e-15);
        let flipped = Unitary::Two(pauli::x() * m);
        assert!((pauli_avg_fidelity(&u, &flipped).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn small_over_rotation() {
        let theta = 1.1;
        for eps in [1e-2, 1e-3] {
            let f = avg_fidelity(&ideal_gate(theta, Levels::Two), &ideal_gate(theta + eps, Levels::Two))
                .unwrap();
            let predicted = 1.0 - eps * eps / 6.0;
            assert!((f - predicted).abs() < eps.powi(4), "eps {eps}: {f} vs {predicted}");
        }
    }

    #[test]
    fn fidelity_rejects_bad_input() {
        let two = ideal_gate(0.3, Levels::Two);
        let three = ideal_gate(0.3, Levels::Three);
        assert!(matches!(avg_fidelity(&two, &three), Err(Error::Config(_))));
        let bad = Unitary::Two(Mat2::identity().scale(C64::new(1.01, 0.0)));
        assert!(matches!(avg_fidelity(&two, &bad), Err(Error::Validation(_))));
        assert!(pauli_avg_fidelity(&three, &three).is_err());
    }

    #[test]
    fn three_level_fidelity_of_ideal_is_one() {
        let u = ideal_gate(FRAC_PI_2, Levels::Three);
        assert!(avg_infidelity(&u, &u).unwrap().abs() < 1e-15);
        assert_eq!(leakage_population(u.as_three().unwrap(), 0).unwrap(), 0.0);
        assert!(leakage_population(u.as_three().unwrap(), 2).is_err());
    }

    #[test]
    fn single_pulse_gate_is_the_pulse() {
        let q = qubit();
        let spec = GateSpec::new(0.4, 1).unwrap();
        let train = resonant_train(q.omega10(), 1, 1).unwrap();
        let u = compose_gate(&spec, &train, &PulseShape::Delta, Levels::Two, &q).unwrap();
        let e = avg_infidelity(&Unitary::Two(delta_pulse_unitary_2lvl(0.4)), &u).unwrap();
        assert!(e.abs() < 1e-15);
    }

    #[test]
    fn resonant_two_level_gates_are_exact() {
        let q = qubit();
        for theta in [PI / 8.0, PI / 4.0, FRAC_PI_2, PI] {
            for n in [1, 10, 100] {
                let spec = GateSpec::new(theta, n).unwrap();
                let train = resonant_train(q.omega10(), n, 1).unwrap();
                let u = compose_gate(&spec, &train, &PulseShape::Delta, Levels::Two, &q).unwrap();
                let e = avg_infidelity(&ideal_gate(theta, Levels::Two), &u).unwrap();
                assert!(e.abs() < 1e-12, "theta {theta} n {n}: {e}");
            }
        }
    }

    #[test]
    fn transmon_pi_half_gate_error_near_1e3() {
        let q = qubit();
        let spec = GateSpec::new(FRAC_PI_2, 100).unwrap();
        let train = resonant_train(q.omega10(), 100, 1).unwrap();
        let u = compose_gate(&spec, &train, &PulseShape::Delta, Levels::Three, &q).unwrap();
        let e = avg_infidelity(&ideal_gate(FRAC_PI_2, Levels::Three), &u).unwrap();
        assert!(e > 5e-4 && e < 1.5e-3, "error = {e}");
    }

    #[test]
    fn mismatched_train_is_config_error() {
        let q = qubit();
        let spec = GateSpec::new(1.0, 10).unwrap();
        let train = resonant_train(q.omega10(), 9, 1).unwrap();
        let r = compose_gate(&spec, &train, &PulseShape::Delta, Levels::Two, &q);
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn gaussian_with_zero_area_is_free_evolution() {
        let q = qubit();
        let tau = 2e-12;
        let u = gaussian_pulse_unitary(0.0, tau, 5.0, 2000, Levels::Two, &q).unwrap();
        let f = free_evolution_2lvl(10.0 * tau, q.omega10());
        assert!(dist(u.as_two().unwrap(), &f) < 1e-10);
        let u3 = gaussian_pulse_unitary(0.0, tau, 5.0, 2000, Levels::Three, &q).unwrap();
        let f3 = free_evolution_3lvl(10.0 * tau, &q);
        assert!(dist(u3.as_three().unwrap(), &f3) < 1e-10);
    }

    #[test]
    fn gaussian_step_floor() {
        let q = qubit();
        let r = gaussian_pulse_unitary(0.1, 1e-12, 5.0, 999, Levels::Two, &q);
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn gaussian_three_level_matches_two_level_block_for_small_pulses() {
        // for a weak, short pulse the three-level 0-1 block tracks the two-level result
        let q = qubit();
        let d = 1e-3;
        let u2 = gaussian_pulse_unitary(d, 0.5e-12, 5.0, 2000, Levels::Two, &q).unwrap();
        let u3 = gaussian_pulse_unitary(d, 0.5e-12, 5.0, 2000, Levels::Three, &q).unwrap();
        let (a, b) = (u2.as_two().unwrap(), u3.as_three().unwrap());
        // compare up to the global phase e^{iω₁₀t/2}
        let phase = b[(0, 0)] / a[(0, 0)];
        for i in 0..2 {
            for j in 0..2 {
                assert!((b[(i, j)] - a[(i, j)] * phase).norm() < 1e-5);
            }
        }
        assert!(u3.unitarity_defect() < 1e-12);
    }

    #[test]
    fn rect_three_level_reduces_to_delta_for_short_pulses() {
        let q = qubit();
        let d = 0.2;
        let u = centred_pulse(&PulseShape::rectangular(1e-16).unwrap(), d, Levels::Three, &q).unwrap();
        assert!(dist(u.as_three().unwrap(), &delta_pulse_unitary_3lvl(d)) < 1e-5);
    }
}
