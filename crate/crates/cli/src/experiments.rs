use std::f64::consts::PI;

use sfq_core::dynamics::{avg_infidelity, compose_gate, ideal_gate, GateSpec, Levels};
use sfq_core::errors::{
    error_vs_eta_sweep, error_vs_n_sweep, first_crossing_below, gaussian_pulse_error_numeric,
    jitter_fidelity, lower_envelope, monte_carlo_jitter, rect_pulse_error_analytic,
    rect_pulse_error_numeric,
};
use sfq_core::linalg::C64;
use sfq_core::oscillator::{pointer_states, train_energy_closed_form};
use sfq_core::params::{angular, gaussian_correction, sfq_displacement, CavityParams, PhysConst, QubitParams};
use sfq_core::pulses::{resonant_train, ClockMode, JitterModel, PulseShape, DEFAULT_GAUSSIAN_CUTOFF};
use sfq_core::reproduce::{run_all, ReproduceConfig};
use sfq_core::Error;

use crate::args::*;
use crate::output::{num, Table};
use crate::svg::{Chart, Scale, Series};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    pub table: Table,
    pub chart: Option<Chart>,
    pub summary: Vec<String>,
    /// Additional text artifacts (file name, contents).
    pub extra: Vec<(String, String)>,
    pub failed: bool,
}

impl Outcome {
    fn new(table: Table, chart: Option<Chart>, summary: Vec<String>) -> Self {
        Self { table, chart, summary, extra: Vec::new(), failed: false }
    }
}

fn require(ok: bool, key: &str, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("--{key}: {msg}")))
    }
}

fn chart(title: &str, x: &str, y: &str, xs: Scale, ys: Scale, series: Vec<Series>) -> Option<Chart> {
    Some(Chart {
        title: title.into(),
        x_label: x.into(),
        y_label: y.into(),
        x_scale: xs,
        y_scale: ys,
        series,
    })
}

fn series(name: &str, points: Vec<(f64, f64)>) -> Series {
    Series { name: name.into(), points }
}

pub fn run(cmd: &Command, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Oscillator(a) => oscillator(a),
        Command::Pointer(a) => pointer(a),
        Command::Gate2(a) => gate2(a),
        Command::Gate3(a) => gate3(a),
        Command::JitterMc(a) => jitter_mc(a, seed),
        Command::JitterAnalytic(a) => jitter_analytic(a),
        Command::PulseWidth(a) => pulse_width(a),
        Command::SweepN(a) => sweep_n(a),
        Command::SweepEta(a) => sweep_eta(a),
        Command::Reproduce(a) => reproduce(a, seed),
    }
}

fn oscillator(a: &OscillatorArgs) -> Result<Outcome> {
    require(a.n >= 1, "n", "must be at least 1")?;
    let k = PhysConst::CODATA;
    let cav = CavityParams::new(angular(a.f0), a.c, a.cc)?;
    let period = a.period.unwrap_or(1.0 / a.f0);
    require(period > 0.0 && period.is_finite(), "period", "must be positive")?;
    let alpha_sfq = sfq_displacement(&cav, &k)?;
    let shape_factor = gaussian_correction(cav.omega0(), a.tau)?;
    let quantum = k.hbar * cav.omega0();

    let mut table = Table::new(vec![
        "pulses",
        "duration_s",
        "alpha_re",
        "alpha_im",
        "photons",
        "energy_j",
        "energy_closed_form_j",
        "energy_gaussian_j",
    ]);
    let mut alpha = C64::new(0.0, 0.0);
    let mut pts = Vec::with_capacity(a.n);
    for m in 1..=a.n {
        let t = (m - 1) as f64 * period;
        alpha += C64::from_polar(alpha_sfq, -cav.omega0() * t);
        let closed = train_energy_closed_form(&cav, period, m, &k)?;
        let photons = alpha.norm_sqr();
        pts.push((m as f64, photons));
        table.push(vec![
            m.to_string(),
            num(m as f64 * period),
            num(alpha.re),
            num(alpha.im),
            num(photons),
            num(photons * quantum),
            num(closed),
            num(closed * shape_factor),
        ]);
    }
    let summary = vec![format!("photons after {} pulses: {:.6e}", a.n, alpha.norm_sqr())];
    let c = chart("Cavity excitation", "pulses", "photons", Scale::Linear, Scale::Linear, vec![series("photons", pts)]);
    Ok(Outcome::new(table, c, summary))
}

fn pointer(a: &PointerArgs) -> Result<Outcome> {
    let k = PhysConst::CODATA;
    let cav = CavityParams::new(angular(a.f0), a.c, a.cc)?;
    let chi = angular(a.chi);
    let states = pointer_states(&cav, chi, &k)?;
    let p = states.protocol;
    let alpha_sfq = sfq_displacement(&cav, &k)?;

    let mut table = Table::new(vec!["pulse", "time_s", "bright_photons", "dark_photons"]);
    let (mut bright, mut dark) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let (mut bp, mut dp) = (Vec::new(), Vec::new());
    for m in 0..p.n {
        let t = m as f64 * p.period;
        bright += C64::from_polar(alpha_sfq, -(cav.omega0() + chi) * t);
        dark += C64::from_polar(alpha_sfq, -(cav.omega0() - chi) * t);
        bp.push(((m + 1) as f64, bright.norm_sqr()));
        dp.push(((m + 1) as f64, dark.norm_sqr()));
        table.push(vec![(m + 1).to_string(), num(t), num(bright.norm_sqr()), num(dark.norm_sqr())]);
    }
    let summary = vec![
        format!("pulses n = {}, spacing T = {:.6e} s, rounding residue = {:+.3}", p.n, p.period, p.residue),
        format!("bright photons = {:.6e}", states.bright.photons()),
        format!("dark photons = {:.6e}", states.dark.photons()),
        format!("contrast = {:.6e}", states.contrast()),
    ];
    let c = chart(
        "Pointer states",
        "pulses",
        "photons",
        Scale::Linear,
        Scale::Linear,
        vec![series("qubit |1⟩ (bright)", bp), series("qubit |0⟩ (dark)", dp)],
    );
    Ok(Outcome::new(table, c, summary))
}

fn shape_of(shape: Shape, width: f64) -> Result<PulseShape> {
    Ok(match shape {
        Shape::Delta => PulseShape::Delta,
        Shape::Rect => PulseShape::rectangular(width)?,
        Shape::Gaussian => PulseShape::gaussian(width)?,
    })
}

fn gate2(a: &Gate2Args) -> Result<Outcome> {
    let q = QubitParams::two_level(angular(a.f10))?;
    let spec = GateSpec::new(a.theta, a.n)?;
    let shape = shape_of(a.shape, a.width)?;
    let train = resonant_train(q.omega10(), a.n, 1)?;
    let u = compose_gate(&spec, &train, &shape, Levels::Two, &q)?;
    let error = avg_infidelity(&ideal_gate(a.theta, Levels::Two), &u)?;
    let mut table = Table::new(vec!["theta", "n", "delta_theta", "shape", "width_s", "error"]);
    let shape_name = serde_json::to_value(a.shape).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    table.push(vec![num(a.theta), a.n.to_string(), num(spec.delta_theta()), shape_name, num(a.width), num(error)]);
    Ok(Outcome::new(table, None, vec![format!("gate error = {error:.6e}")]))
}

fn gate3(a: &Gate3Args) -> Result<Outcome> {
    require(a.n >= 1, "n", "must be at least 1")?;
    let q = QubitParams::new(angular(a.f10), angular(a.f21))?;
    let row = error_vs_n_sweep(a.theta, &[a.n], &q)?[0];
    let mut table = Table::new(vec!["theta", "n", "eta", "error", "p2_0", "p2_1", "p2_0_analytic", "p2_1_analytic"]);
    table.push(vec![
        num(a.theta),
        a.n.to_string(),
        num(q.eta()),
        num(row.error),
        num(row.p2_0),
        num(row.p2_1),
        num(row.p2_0_analytic),
        num(row.p2_1_analytic),
    ]);
    let summary = vec![
        format!("gate error = {:.6e}", row.error),
        format!("P2 from |0⟩ = {:.6e}, from |1⟩ = {:.6e}", row.p2_0, row.p2_1),
    ];
    Ok(Outcome::new(table, None, summary))
}

fn mode_name(m: ClockMode) -> &'static str {
    match m {
        ClockMode::External => "external",
        ClockMode::Internal => "internal",
    }
}

fn jitter_mc(a: &JitterMcArgs, seed: u64) -> Result<Outcome> {
    require(a.junctions >= 1, "junctions", "must be at least 1")?;
    let q = QubitParams::two_level(angular(a.f10))?;
    let spec = GateSpec::new(a.theta, a.n)?;
    let mode = ClockMode::from(a.mode);
    let jm = JitterModel::new(mode, a.sigma, seed)?.with_transmission_line(a.junctions);
    let mc = monte_carlo_jitter(&spec, &jm, &q, a.trials)?;
    let pred = jitter_fidelity(mode, a.theta, a.n, q.omega10(), jm.effective_sigma());
    let pe = pred.axis_errors();
    let mut table = Table::new(vec![
        "mode",
        "theta",
        "n",
        "sigma_s",
        "trials",
        "seed",
        "mean_error",
        "std_error",
        "error_x",
        "std_error_x",
        "error_y",
        "std_error_y",
        "error_z",
        "std_error_z",
        "predicted_error",
        "predicted_x",
        "predicted_y",
        "predicted_z",
    ]);
    let [x, y, z] = mc.per_axis;
    table.push(vec![
        mode_name(mode).into(),
        num(a.theta),
        a.n.to_string(),
        num(jm.effective_sigma()),
        a.trials.to_string(),
        seed.to_string(),
        num(mc.mean_error),
        num(mc.std_error),
        num(x.mean),
        num(x.std_error),
        num(y.mean),
        num(y.std_error),
        num(z.mean),
        num(z.std_error),
        num(pred.error()),
        num(pe[0]),
        num(pe[1]),
        num(pe[2]),
    ]);
    let summary = vec![
        format!("mean error = {:.4e} ± {:.2e} ({} trials)", mc.mean_error, mc.std_error, mc.trials),
        format!("closed form = {:.4e}", pred.error()),
    ];
    Ok(Outcome::new(table, None, summary))
}

fn jitter_analytic(a: &JitterAnalyticArgs) -> Result<Outcome> {
    require(a.points >= 1, "points", "must be at least 1")?;
    require(a.n >= 1, "n", "must be at least 1")?;
    let w = angular(a.f10);
    let mut table = Table::new(vec!["mode", "theta", "error_x", "error_y", "error_z", "error_avg"]);
    let mut all = Vec::new();
    for mode in [ClockMode::External, ClockMode::Internal] {
        let mut cols: [Vec<(f64, f64)>; 3] = Default::default();
        for k in 1..=a.points {
            let theta = 2.0 * PI * k as f64 / a.points as f64;
            let p = jitter_fidelity(mode, theta, a.n, w, a.sigma);
            let e = p.axis_errors();
            for (c, v) in cols.iter_mut().zip(e) {
                c.push((theta, v));
            }
            table.push(vec![mode_name(mode).into(), num(theta), num(e[0]), num(e[1]), num(e[2]), num(p.error())]);
        }
        for (axis, c) in ["x", "y", "z"].iter().zip(cols) {
            all.push(series(&format!("{} {axis}", mode_name(mode)), c));
        }
    }
    let c = chart("Jitter error per axis", "Θ (rad)", "1 − F", Scale::Linear, Scale::Log, all);
    Ok(Outcome::new(table, c, Vec::new()))
}

fn pulse_width(a: &PulseWidthArgs) -> Result<Outcome> {
    require(a.points >= 2, "points", "must be at least 2")?;
    require(a.tau_min > 0.0 && a.tau_max > a.tau_min, "tau-max", "needs 0 < tau-min < tau-max")?;
    let w = angular(a.f10);
    let mut table = Table::new(vec![
        "tau_s",
        "gaussian_error",
        "rect_half_width_s",
        "rect_error_numeric",
        "rect_error_analytic",
    ]);
    let (mut g, mut rn, mut ra) = (Vec::new(), Vec::new(), Vec::new());
    let ratio = (a.tau_max / a.tau_min).ln();
    for i in 0..a.points {
        let tau = a.tau_min * (ratio * i as f64 / (a.points - 1) as f64).exp();
        // equal second moment: a box of half-width √3τ has the Gaussian's variance
        let tc = 3f64.sqrt() * tau;
        let ge = gaussian_pulse_error_numeric(a.delta_theta, tau, DEFAULT_GAUSSIAN_CUTOFF, a.steps, w)?;
        let rne = rect_pulse_error_numeric(a.delta_theta, tc, w)?;
        let rae = rect_pulse_error_analytic(a.delta_theta, tc, w);
        g.push((tau, ge));
        rn.push((tau, rne));
        ra.push((tau, rae));
        table.push(vec![num(tau), num(ge), num(tc), num(rne), num(rae)]);
    }
    let c = chart(
        "Single-pulse error vs width",
        "τ (s)",
        "1 − F",
        Scale::Log,
        Scale::Log,
        vec![series("gaussian", g), series("rectangular", rn), series("rectangular (4th order)", ra)],
    );
    Ok(Outcome::new(table, c, Vec::new()))
}

fn sweep_n(a: &SweepNArgs) -> Result<Outcome> {
    require(a.n_min >= 1, "n-min", "must be at least 1")?;
    require(a.n_max >= a.n_min, "n-max", "must not be below n-min")?;
    let q = QubitParams::new(angular(a.f10), angular(a.f21))?;
    let ns: Vec<usize> = (a.n_min..=a.n_max).collect();
    let rows = error_vs_n_sweep(a.theta, &ns, &q)?;
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.error).collect();
    let env = lower_envelope(&xs, &ys);
    let mut table = Table::new(vec![
        "n",
        "error",
        "error_envelope",
        "p2_0",
        "p2_1",
        "p2_0_analytic",
        "p2_1_analytic",
    ]);
    for (r, e) in rows.iter().zip(&env) {
        table.push(vec![
            r.n.to_string(),
            num(r.error),
            num(*e),
            num(r.p2_0),
            num(r.p2_1),
            num(r.p2_0_analytic),
            num(r.p2_1_analytic),
        ]);
    }
    let crossing = first_crossing_below(&xs, &env, 1e-3);
    let summary = vec![match crossing {
        Some(c) => format!("lower envelope first below 1e-3 at n = {c:.1}"),
        None => "lower envelope stays above 1e-3".into(),
    }];
    let pts = |f: &dyn Fn(usize) -> f64| (0..rows.len()).map(|i| (xs[i], f(i))).collect::<Vec<_>>();
    let c = chart(
        "Three-level gate error vs pulses",
        "n",
        "error",
        Scale::Linear,
        Scale::Log,
        vec![
            series("1 − F", pts(&|i| ys[i])),
            series("envelope", pts(&|i| env[i])),
            series("P2 |0⟩", pts(&|i| rows[i].p2_0)),
            series("P2 |1⟩", pts(&|i| rows[i].p2_1)),
        ],
    );
    Ok(Outcome::new(table, c, summary))
}

fn sweep_eta(a: &SweepEtaArgs) -> Result<Outcome> {
    require(a.eta_step > 0.0, "eta-step", "must be positive")?;
    require(a.eta_max >= a.eta_min, "eta-max", "must not be below eta-min")?;
    require(a.n >= 1, "n", "must be at least 1")?;
    let count = ((a.eta_max - a.eta_min) / a.eta_step + 1e-9).floor() as usize + 1;
    let etas: Vec<f64> = (0..count).map(|i| a.eta_min + a.eta_step * i as f64).collect();
    let rows = error_vs_eta_sweep(a.theta, a.n, angular(a.f10), &etas)?;
    let mut table = Table::new(vec!["eta", "error", "p2_0", "p2_1"]);
    for r in &rows {
        table.push(vec![num(r.eta), num(r.error), num(r.p2_0), num(r.p2_1)]);
    }
    let pts = |f: fn(&sfq_core::errors::EtaSweepRow) -> f64| rows.iter().map(|r| (r.eta, f(r))).collect::<Vec<_>>();
    let c = chart(
        "Gate error vs anharmonicity",
        "η",
        "error",
        Scale::Linear,
        Scale::Log,
        vec![series("1 − F", pts(|r| r.error)), series("P2 |0⟩", pts(|r| r.p2_0)), series("P2 |1⟩", pts(|r| r.p2_1))],
    );
    Ok(Outcome::new(table, c, Vec::new()))
}

fn reproduce(a: &ReproduceArgs, seed: u64) -> Result<Outcome> {
    let cfg = ReproduceConfig { seed, trials: a.trials, sigma: a.sigma };
    let report = run_all(&cfg)?;
    let mut table = Table::new(vec!["criterion", "name", "pass", "metric", "value"]);
    for o in &report.outcomes {
        for (k, v) in &o.metrics {
            table.push(vec![o.id.to_string(), o.name.into(), o.pass.to_string(), k.clone(), num(*v)]);
        }
    }
    let text = report.to_text();
    let mut out = Outcome::new(table, None, text.lines().map(String::from).collect());
    out.extra.push(("report.txt".into(), text));
    out.failed = !report.all_passed();
    Ok(out)
}
