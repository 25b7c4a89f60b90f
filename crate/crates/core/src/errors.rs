//! Closed-form error models for SFQ gates, the Monte Carlo jitter harness and
//! the sweep tables that compare them with full numerics.

use std::f64::consts::PI;

use log::warn;
use rayon::prelude::*;

use crate::dynamics::{
    avg_infidelity, compose_gate, delta_reference_2lvl, gaussian_pulse_unitary, ideal_gate,
    leakage_population, pauli_state_errors, rect_pulse_unitary, GateSpec, Levels, Unitary,
};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::params::QubitParams;
use crate::pulses::{apply_jitter, resonant_train, ClockMode, JitterModel, PulseShape};

/// Per-axis and averaged gate fidelities predicted for white timing jitter.
///
/// `f_x`, `f_y`, `f_z` are the overlap fidelities for input states along ±x,
/// ±y, ±z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterFidelityPrediction {
    pub mode: ClockMode,
    pub f_x: f64,
    pub f_y: f64,
    pub f_z: f64,
    pub f_avg: f64,
}

impl JitterFidelityPrediction {
    pub fn error(&self) -> f64 {
        1.0 - self.f_avg
    }

    /// Errors 1 − F along x, y, z.
    pub fn axis_errors(&self) -> [f64; 3] {
        [1.0 - self.f_x, 1.0 - self.f_y, 1.0 - self.f_z]
    }
}

/// sin(2Θ)/(2Θ), equal to 1 at Θ = 0.
fn sinc_2theta(theta: f64) -> f64 {
    if theta == 0.0 {
        1.0
    } else {
        (2.0 * theta).sin() / (2.0 * theta)
    }
}

fn warn_regime(omega10: f64, sigma: f64) {
    if omega10 * sigma > 0.1 {
        warn!("ω₁₀σ = {:.3} is outside the small-jitter regime", omega10 * sigma);
    }
}

/// Closed-form fidelities with every pulse jittered about a stable clock grid.
pub fn jitter_fidelity_external(theta: f64, n: usize, omega10: f64, sigma: f64) -> JitterFidelityPrediction {
    warn_regime(omega10, sigma);
    let ws2 = (omega10 * sigma).powi(2);
    let n = n as f64;
    let a = theta * theta / (8.0 * n);
    let s = sinc_2theta(theta);
    let (sin2, cos2) = (theta.sin().powi(2), theta.cos().powi(2));
    JitterFidelityPrediction {
        mode: ClockMode::External,
        f_x: 1.0 - ws2 * (a * (1.0 - s) + cos2 / 4.0),
        f_y: 1.0 - ws2 / 4.0 * (theta * theta / n + 1.0),
        f_z: 1.0 - ws2 * (a * (1.0 + s) + sin2 / 4.0),
        f_avg: 1.0 - ws2 / 6.0 * (theta * theta / n + 1.0),
    }
}

/// Closed-form fidelities when each inter-pulse interval fluctuates independently.
pub fn jitter_fidelity_internal(theta: f64, n: usize, omega10: f64, sigma: f64) -> JitterFidelityPrediction {
    warn_regime(omega10, sigma);
    let nws2 = n as f64 * (omega10 * sigma).powi(2);
    let s = sinc_2theta(theta);
    JitterFidelityPrediction {
        mode: ClockMode::Internal,
        f_x: 1.0 - nws2 / 8.0 * (1.0 + s),
        f_y: 1.0 - nws2 / 4.0,
        f_z: 1.0 - nws2 / 8.0 * (1.0 - s),
        f_avg: 1.0 - nws2 / 6.0,
    }
}

pub fn jitter_fidelity(mode: ClockMode, theta: f64, n: usize, omega10: f64, sigma: f64) -> JitterFidelityPrediction {
    match mode {
        ClockMode::External => jitter_fidelity_external(theta, n, omega10, sigma),
        ClockMode::Internal => jitter_fidelity_internal(theta, n, omega10, sigma),
    }
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    fn from_samples(samples: impl Iterator<Item = f64> + Clone) -> Self {
        let (count, sum) = samples.clone().fold((0usize, 0.0), |(c, s), x| (c + 1, s + x));
        let n = count as f64;
        let mean = sum / n;
        let var = samples.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self {
            mean,
            std_error: (var / n).sqrt(),
        }
    }

    /// |mean − value| in units of the standard error (0 when both vanish).
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (self.mean - value).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Outcome of a Monte Carlo jitter run.
#[derive(Debug, Clone, PartialEq)]
pub struct MCResult {
    pub mean_error: f64,
    pub std_error: f64,
    pub trials: usize,
    /// State errors averaged over ±x, ±y, ±z respectively.
    pub per_axis: [Estimate; 3],
    pub seed: u64,
}

pub const MIN_TRIALS: usize = 100;

/// Monte Carlo gate error of a delta-pulse two-level gate under timing jitter.
///
/// Trial `i` draws its jitter from RNG stream `i` of `jm.seed`, so results do
/// not depend on the number of worker threads. Each trial scores the state
/// error 1 − |⟨ψ_id|ψ⟩|² for the six Pauli eigenstates. With zero jitter the
/// result is exactly zero rather than the rounding residue of the nominal gate.
pub fn monte_carlo_jitter(spec: &GateSpec, jm: &JitterModel, q: &QubitParams, trials: usize) -> Result<MCResult> {
    if trials < MIN_TRIALS {
        return Err(Error::Statistics(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    if jm.effective_sigma() == 0.0 {
        // every realization is the nominal train, so jitter contributes nothing
        let zero = Estimate { mean: 0.0, std_error: 0.0 };
        return Ok(MCResult {
            mean_error: 0.0,
            std_error: 0.0,
            trials,
            per_axis: [zero; 3],
            seed: jm.seed,
        });
    }
    let nominal = resonant_train(q.omega10(), spec.n, 1)?;
    let ideal = ideal_gate(spec.theta, Levels::Two);
    let Unitary::Two(u_id) = ideal else { unreachable!() };
    let samples: Vec<[f64; 6]> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let train = apply_jitter(&nominal, &jm.with_stream(i));
            let u = compose_gate(spec, &train, &PulseShape::Delta, Levels::Two, q)?;
            let Unitary::Two(m) = u else { unreachable!() };
            Ok(pauli_state_errors(&u_id, &m))
        })
        .collect::<Result<_>>()?;

    let total = Estimate::from_samples(samples.iter().map(|s| s.iter().sum::<f64>() / 6.0));
    let axis = |a: usize| Estimate::from_samples(samples.iter().map(move |s| 0.5 * (s[2 * a] + s[2 * a + 1])));
    Ok(MCResult {
        mean_error: total.mean,
        std_error: total.std_error,
        trials,
        per_axis: [axis(0), axis(1), axis(2)],
        seed: jm.seed,
    })
}

/// Fourth-order error of a rectangular pulse of width 2t_c relative to a delta
/// pulse at its centre.
pub fn rect_pulse_error_analytic(delta_theta: f64, tc: f64, omega10: f64) -> f64 {
    let wt = omega10 * tc;
    if delta_theta.abs() > 0.3 || wt.abs() > 0.3 {
        warn!("rectangular-pulse expansion used outside its regime (δθ = {delta_theta}, ωt_c = {wt})");
    }
    let d2 = delta_theta * delta_theta;
    let w2 = wt * wt;
    (d2 * d2 * w2 + d2 * w2 * w2 - d2 * d2 * w2 * w2 / 5.0) / 216.0
}

/// Numerical average infidelity between a rectangular pulse and the centred
/// delta pulse U_f(t_c)·U_δ·U_f(t_c).
pub fn rect_pulse_error_numeric(delta_theta: f64, tc: f64, omega10: f64) -> Result<f64> {
    avg_infidelity(
        &Unitary::Two(delta_reference_2lvl(delta_theta, tc, omega10)),
        &Unitary::Two(rect_pulse_unitary(delta_theta, tc, omega10)),
    )
}

/// Numerical average infidelity between a Gaussian pulse and the centred delta
/// pulse spanning the same window.
pub fn gaussian_pulse_error_numeric(
    delta_theta: f64,
    tau: f64,
    cutoff: f64,
    steps: usize,
    omega10: f64,
) -> Result<f64> {
    let q = QubitParams::two_level(omega10)?;
    let u = gaussian_pulse_unitary(delta_theta, tau, cutoff, steps, Levels::Two, &q)?;
    avg_infidelity(&Unitary::Two(delta_reference_2lvl(delta_theta, cutoff * tau, omega10)), &u)
}

/// (1 − e^{inx})/(1 − e^{ix}), with the removable singularity at x = 2πm
/// evaluated as its limit.
fn geometric_ratio(x: f64, n: usize) -> C64 {
    let r = x - 2.0 * PI * (x / (2.0 * PI)).round();
    let nf = n as f64;
    let magnitude = if (nf * r).abs() < 1e-4 {
        nf * (1.0 - (nf * nf - 1.0) * r * r / 24.0)
    } else {
        (0.5 * nf * r).sin() / (0.5 * r).sin()
    };
    C64::from_polar(magnitude, 0.5 * (nf - 1.0) * r)
}

/// First-order |2⟩ population after an n-pulse Θ_y gate from initial level `j`.
pub fn leakage_p2_analytic(theta: f64, n: usize, eta: f64, j: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyTrain);
    }
    if j > 1 {
        return Err(Error::domain(format!("initial level must be 0 or 1, got {j}")));
    }
    let nf = n as f64;
    let half = 0.5 * theta / nf;
    let sign = if j == 0 { 1.0 } else { -1.0 };
    let plus = geometric_ratio(2.0 * PI * eta + half, n);
    let minus = geometric_ratio(2.0 * PI * eta - half, n);
    Ok(theta * theta / (8.0 * nf * nf) * (plus - minus * sign).norm_sqr())
}

/// Three-level gate built from `n` resonant delta pulses.
fn transmon_gate(theta: f64, n: usize, q: &QubitParams) -> Result<(f64, f64, f64)> {
    let spec = GateSpec::new(theta, n)?;
    let train = resonant_train(q.omega10(), n, 1)?;
    let u = compose_gate(&spec, &train, &PulseShape::Delta, Levels::Three, q)?;
    let error = avg_infidelity(&ideal_gate(theta, Levels::Three), &u)?;
    let Unitary::Three(m) = u else { unreachable!() };
    Ok((error, leakage_population(&m, 0)?, leakage_population(&m, 1)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NSweepRow {
    pub n: usize,
    pub error: f64,
    pub p2_0: f64,
    pub p2_1: f64,
    pub p2_0_analytic: f64,
    pub p2_1_analytic: f64,
}

/// Three-level gate error and leakage for each pulse count, sorted by `n`.
pub fn error_vs_n_sweep(theta: f64, ns: &[usize], q: &QubitParams) -> Result<Vec<NSweepRow>> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let eta = q.eta();
    ns.into_par_iter()
        .map(|n| {
            let (error, p2_0, p2_1) = transmon_gate(theta, n, q)?;
            Ok(NSweepRow {
                n,
                error,
                p2_0,
                p2_1,
                p2_0_analytic: leakage_p2_analytic(theta, n, eta, 0)?,
                p2_1_analytic: leakage_p2_analytic(theta, n, eta, 1)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSweepRow {
    pub eta: f64,
    pub error: f64,
    pub p2_0: f64,
    pub p2_1: f64,
}

/// Three-level gate error and leakage versus anharmonicity at fixed `n`,
/// sorted by η.
pub fn error_vs_eta_sweep(theta: f64, n: usize, omega10: f64, etas: &[f64]) -> Result<Vec<EtaSweepRow>> {
    let mut etas = etas.to_vec();
    etas.sort_by(f64::total_cmp);
    etas.into_par_iter()
        .map(|eta| {
            let q = QubitParams::from_anharmonicity(omega10, eta)?;
            let (error, p2_0, p2_1) = transmon_gate(theta, n, &q)?;
            Ok(EtaSweepRow { eta, error, p2_0, p2_1 })
        })
        .collect()
}

/// Indices of interior local minima: y[i] < y[i−1] and y[i] ≤ y[i+1].
pub fn local_minima(ys: &[f64]) -> Vec<usize> {
    (1..ys.len().saturating_sub(1))
        .filter(|&i| ys[i] < ys[i - 1] && ys[i] <= ys[i + 1])
        .collect()
}

/// Lower envelope through the local minima, interpolated linearly in log y
/// between them. Points outside the span of the minima, or every point when
/// fewer than two minima exist, keep their raw value.
pub fn lower_envelope(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let minima = local_minima(ys);
    let mut env = ys.to_vec();
    for pair in minima.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (la, lb) = (ys[a].ln(), ys[b].ln());
        for i in a..=b {
            let f = (xs[i] - xs[a]) / (xs[b] - xs[a]);
            env[i] = (la + f * (lb - la)).exp();
        }
    }
    env
}

/// First x at which the curve reaches `threshold` from above, interpolated
/// linearly in log y between samples.
pub fn first_crossing_below(xs: &[f64], ys: &[f64], threshold: f64) -> Option<f64> {
    if ys.first().is_some_and(|&y| y <= threshold) {
        return xs.first().copied();
    }
    let i = ys.iter().position(|&y| y <= threshold)?;
    let (y0, y1) = (ys[i - 1].ln(), ys[i].ln());
    let f = (y0 - threshold.ln()) / (y0 - y1);
    Some(xs[i - 1] + f * (xs[i] - xs[i - 1]))
}

/// Median spacing between consecutive local minima.
pub fn median_minimum_spacing(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let minima = local_minima(ys);
    let mut gaps: Vec<f64> = minima.windows(2).map(|w| xs[w[1]] - xs[w[0]]).collect();
    if gaps.is_empty() {
        return None;
    }
    gaps.sort_by(f64::total_cmp);
    let m = gaps.len() / 2;
    Some(if gaps.len() % 2 == 1 {
        gaps[m]
    } else {
        0.5 * (gaps[m - 1] + gaps[m])
    })
}

/// Ordinary least-squares (slope, intercept).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::angular;
    use std::f64::consts::FRAC_PI_2;

    const W: f64 = 2.0 * PI * 5e9;

    #[test]
    fn zero_jitter_is_perfect() {
        for mode in [ClockMode::External, ClockMode::Internal] {
            let p = jitter_fidelity(mode, 1.0, 50, W, 0.0);
            assert_eq!([p.f_x, p.f_y, p.f_z, p.f_avg], [1.0; 4]);
        }
    }

    #[test]
    fn worked_values() {
        let ext = jitter_fidelity_external(FRAC_PI_2, 100, W, 0.2e-12);
        assert!((ext.error() - 6.7e-6).abs() < 0.1e-6, "{}", ext.error());
        let int = jitter_fidelity_internal(FRAC_PI_2, 100, W, 0.2e-12);
        assert!((int.error() - 6.58e-4).abs() < 0.01e-4, "{}", int.error());
    }

    #[test]
    fn axis_average_is_consistent() {
        for mode in [ClockMode::External, ClockMode::Internal] {
            for theta in [0.0, 0.3, FRAC_PI_2, 2.9, 2.0 * PI] {
                let p = jitter_fidelity(mode, theta, 37, W, 0.3e-12);
                let avg = p.axis_errors().iter().sum::<f64>() / 3.0;
                assert!((avg - p.error()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn internal_z_error_vanishes_for_small_angles() {
        let p = jitter_fidelity_internal(0.0, 100, W, 0.2e-12);
        assert_eq!(p.f_z, 1.0);
        let small = jitter_fidelity_internal(1e-4, 100, W, 0.2e-12);
        assert!(1.0 - small.f_z < 1e-10);
    }

    #[test]
    fn monte_carlo_without_jitter_is_exact() {
        let q = QubitParams::two_level(W).unwrap();
        let spec = GateSpec::new(FRAC_PI_2, 20).unwrap();
        let jm = JitterModel::new(ClockMode::Internal, 0.0, 1).unwrap();
        let r = monte_carlo_jitter(&spec, &jm, &q, 100).unwrap();
        assert_eq!(r.mean_error, 0.0);
        assert_eq!(r.per_axis[2].mean, 0.0);
    }

    #[test]
    fn monte_carlo_needs_enough_trials() {
        let q = QubitParams::two_level(W).unwrap();
        let spec = GateSpec::new(FRAC_PI_2, 20).unwrap();
        let jm = JitterModel::new(ClockMode::Internal, 1e-13, 1).unwrap();
        assert!(matches!(monte_carlo_jitter(&spec, &jm, &q, 99), Err(Error::Statistics(_))));
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let q = QubitParams::two_level(W).unwrap();
        let spec = GateSpec::new(1.0, 30).unwrap();
        let jm = JitterModel::new(ClockMode::External, 0.2e-12, 9).unwrap();
        let a = monte_carlo_jitter(&spec, &jm, &q, 200).unwrap();
        let b = monte_carlo_jitter(&spec, &jm, &q, 200).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| monte_carlo_jitter(&spec, &jm, &q, 200).unwrap());
        assert_eq!(a.mean_error.to_bits(), c.mean_error.to_bits());
    }

    #[test]
    fn rect_analytic_values() {
        assert_eq!(rect_pulse_error_analytic(0.1, 0.0, W), 0.0);
        let e = rect_pulse_error_analytic(PI / 200.0, 3.5e-12, W);
        assert!((e - 1.7e-10).abs() < 0.05e-10, "{e}");
        let n = rect_pulse_error_numeric(PI / 200.0, 3.5e-12, W).unwrap();
        assert!((n - e).abs() / e < 0.05);
    }

    #[test]
    fn leakage_analytic_basics() {
        assert_eq!(leakage_p2_analytic(0.0, 100, 0.04, 0).unwrap(), 0.0);
        assert!(leakage_p2_analytic(1.0, 0, 0.04, 0).is_err());
        // singular point 2πη + δθ/2 = 2π
        let (theta, n) = (FRAC_PI_2, 100);
        let eta = 1.0 - theta / (n as f64 * 4.0 * PI);
        let at = leakage_p2_analytic(theta, n, eta, 0).unwrap();
        let near = leakage_p2_analytic(theta, n, eta + 1e-9, 0).unwrap();
        assert!(at.is_finite() && (at - near).abs() / at < 1e-6);
    }

    #[test]
    fn geometric_ratio_matches_direct_sum() {
        for (x, n) in [(0.3, 7), (2.0 * PI + 1e-3, 50), (-1.2, 13), (4.0 * PI, 9)] {
            let direct: C64 = (0..n).map(|k| C64::from_polar(1.0, k as f64 * x)).sum();
            assert!((geometric_ratio(x, n) - direct).norm() < 1e-9 * n as f64);
        }
    }

    #[test]
    fn envelope_and_crossing() {
        let xs: Vec<f64> = (0..9).map(f64::from).collect();
        let ys = [10.0, 4.0, 8.0, 5.0, 1.0, 3.0, 0.5, 2.0, 0.9];
        assert_eq!(local_minima(&ys), vec![1, 4, 6]);
        let env = lower_envelope(&xs, &ys);
        assert!((env[2] - 4f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert_eq!(env[0], 10.0);
        let c = first_crossing_below(&xs, &ys, 2.0).unwrap();
        assert!(c > 3.0 && c < 4.0);
        assert!(first_crossing_below(&xs, &ys, 0.1).is_none());
        assert_eq!(median_minimum_spacing(&xs, &ys), Some(2.5));
    }

    #[test]
    fn fits() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(-2)).collect();
        assert!((loglog_slope(&xs, &ys) + 2.0).abs() < 1e-12);
        let (s, b) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((s - 2.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sweep_rows_are_sorted() {
        let q = QubitParams::new(angular(5e9), angular(4.8e9)).unwrap();
        let rows = error_vs_n_sweep(FRAC_PI_2, &[30, 10, 20, 10], &q).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![10, 20, 30]);
        let eta_rows = error_vs_eta_sweep(FRAC_PI_2, 20, W, &[0.3, 0.1]).unwrap();
        assert!(eta_rows[0].eta < eta_rows[1].eta);
    }
}
