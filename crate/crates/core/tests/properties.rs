use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sfq_core::dynamics::{gaussian_pulse_unitary, Levels, DEFAULT_GAUSSIAN_STEPS};
use sfq_core::errors::{error_vs_n_sweep, leakage_p2_analytic, local_minima, loglog_slope};
use sfq_core::oscillator::{coherent_amplitude, lc_time_domain_energy, train_energy_closed_form};
use sfq_core::params::{angular, CavityParams, PhysConst, QubitParams};
use sfq_core::pulses::{apply_jitter, resonant_train, ClockMode, JitterModel, PulseTrain};

/// Accumulates the |2⟩ amplitude pulse by pulse to first order, holding the
/// |1⟩ amplitude at its unperturbed value.
fn first_order_p2(theta: f64, n: usize, eta: f64, j: usize) -> f64 {
    let d = theta / n as f64;
    let psi1 = |k: usize| {
        let a = 0.5 * k as f64 * d;
        if j == 0 {
            a.sin()
        } else {
            a.cos()
        }
    };
    let amp: C64 = (1..=n)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * eta * (n - k) as f64) * (d / 2f64.sqrt()) * psi1(k - 1))
        .sum();
    amp.norm_sqr()
}

#[test]
fn leakage_closed_form_equals_first_order_sum() {
    for &(theta, n, eta) in &[
        (FRAC_PI_2, 100, 0.04),
        (PI, 30, 0.04),
        (FRAC_PI_2, 10, 0.2),
        (1.3, 257, 0.013),
        (FRAC_PI_2, 300, 0.5),
    ] {
        for j in 0..2 {
            let closed = leakage_p2_analytic(theta, n, eta, j).unwrap();
            let summed = first_order_p2(theta, n, eta, j);
            assert!(
                (closed - summed).abs() <= 1e-10 * summed.max(1e-30),
                "Θ {theta} n {n} η {eta} j {j}: {closed} vs {summed}"
            );
        }
    }
}

#[test]
fn internal_spacings_are_uncorrelated() {
    let draws = 100_000;
    let period = 2e-10;
    let sigma = 1e-13;
    let train = PulseTrain::nominal(period, draws).unwrap();
    let jm = JitterModel::new(ClockMode::Internal, sigma, 11).unwrap();
    let jittered = apply_jitter(&train, &jm);
    let dev: Vec<f64> = jittered.intervals().map(|dt| (dt - period) / sigma).collect();
    let mean = dev.iter().sum::<f64>() / dev.len() as f64;
    let var = dev.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / dev.len() as f64;
    let lag1 = dev.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum::<f64>() / ((dev.len() - 1) as f64 * var);
    let se = 1.0 / (dev.len() as f64).sqrt();
    assert!(lag1.abs() < 3.0 * se, "lag-1 autocorrelation {lag1}");
    assert!((var - 1.0).abs() < 0.02, "variance {var}");
}

#[test]
fn external_offsets_do_not_accumulate() {
    let n = 400;
    let period = 2e-10;
    let sigma = 1e-13;
    let train = PulseTrain::nominal(period, n).unwrap();
    let spread = |mode: ClockMode, k: usize| {
        let samples: Vec<f64> = (0..2000u64)
            .map(|s| {
                let jm = JitterModel::new(mode, sigma, 5).unwrap().with_stream(s);
                apply_jitter(&train, &jm).times()[k] - k as f64 * period
            })
            .collect();
        (samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64).sqrt() / sigma
    };
    assert!((spread(ClockMode::External, 300) - 1.0).abs() < 0.1);
    let walk = spread(ClockMode::Internal, 300);
    assert!((walk / 300f64.sqrt() - 1.0).abs() < 0.1, "internal spread {walk}");
}

#[test]
fn lc_oracle_matches_closed_form_for_random_trains() {
    let k = PhysConst::CODATA;
    let cav = CavityParams::new(angular(5e9), 1e-12, 1e-15).unwrap();
    let base = 2.0 * PI / cav.omega0();
    let e1 = train_energy_closed_form(&cav, base, 1, &k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.random_range(1..=20usize);
        let period = base * rng.random_range(0.2..3.0);
        let closed = train_energy_closed_form(&cav, period, n, &k).unwrap();
        // skip near-total cancellation, where a relative comparison is meaningless
        if closed < 1e-2 * e1 {
            continue;
        }
        let train = PulseTrain::nominal(period, n).unwrap();
        let numeric = lc_time_domain_energy(&cav, &train, 10_000, &k).unwrap();
        assert!((numeric - closed).abs() / closed < 1e-6, "n {n} T {period}: {numeric} vs {closed}");
        checked += 1;
    }
}

#[test]
fn cavity_amplitude_magnitude_is_shift_invariant() {
    let k = PhysConst::CODATA;
    let cav = CavityParams::new(angular(5e9), 1e-12, 1e-15).unwrap();
    let train = PulseTrain::nominal(1.7e-10, 13).unwrap();
    let a = coherent_amplitude(&cav, &train, &k).unwrap().alpha;
    let b = coherent_amplitude(&cav, &train.shifted(3.3e-11), &k).unwrap().alpha;
    assert!((a.norm() - b.norm()).abs() < 1e-12 * a.norm());
    assert!((a - b).norm() > 1e-3 * a.norm());
}

#[test]
fn leakage_minima_fall_as_inverse_square() {
    let q = QubitParams::new(angular(5e9), angular(4.8e9)).unwrap();
    let ns: Vec<usize> = (50..=500).collect();
    let rows = error_vs_n_sweep(FRAC_PI_2, &ns, &q).unwrap();
    let ys: Vec<f64> = rows.iter().map(|r| r.error).collect();
    let minima = local_minima(&ys);
    assert!(minima.len() >= 5);
    let xs: Vec<f64> = minima.iter().map(|&i| rows[i].n as f64).collect();
    let ms: Vec<f64> = minima.iter().map(|&i| ys[i]).collect();
    let slope = loglog_slope(&xs, &ms);
    assert!((slope + 2.0).abs() < 0.3, "slope {slope}");
}

#[test]
fn gaussian_integration_converges() {
    let q = QubitParams::new(angular(5e9), angular(4.8e9)).unwrap();
    for levels in [Levels::Two, Levels::Three] {
        let coarse = gaussian_pulse_unitary(PI / 200.0, 4e-12, 5.0, DEFAULT_GAUSSIAN_STEPS, levels, &q).unwrap();
        let fine = gaussian_pulse_unitary(PI / 200.0, 4e-12, 5.0, 2 * DEFAULT_GAUSSIAN_STEPS, levels, &q).unwrap();
        let diff = match (coarse, fine) {
            (sfq_core::dynamics::Unitary::Two(a), sfq_core::dynamics::Unitary::Two(b)) => (a - b).max_abs(),
            (sfq_core::dynamics::Unitary::Three(a), sfq_core::dynamics::Unitary::Three(b)) => (a - b).max_abs(),
            _ => unreachable!(),
        };
        assert!(diff < 1e-10, "{levels:?}: {diff}");
    }
}

#[test]
fn nominal_gate_train_has_period_spacing() {
    let train = resonant_train(angular(5e9), 100, 1).unwrap();
    assert!(train.is_monotonic());
    assert_eq!(train.end(), 100.0 * train.period());
}
