//! Acceptance suite. One PASS/FAIL line per criterion; the process exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};

use hybridgate::scenario::Scenario;
use hybridgate_core::budget::{assemble_budget, dephasing_time, inelastic_loss_probability, ramsey_contrast_mc};
use hybridgate_core::dynamics::{
    compare_raman_to_two_level, pi_pulse_duration, simulate_stirap, stirap_pulse_pair, LambdaParams, TwoLevelParams,
};
use hybridgate_core::gate::{
    accumulated_phase_numeric, build_phase_gate, dipole_dipole_rate, gate_fidelity, interaction_time_for_pi,
    interaction_time_for_pi_detuned, total_phase_closed_form, GateSchedule, Step,
};
use hybridgate_core::hyperfine::{
    breit_rabi_energy, field_sensitivity, open_decay_channels, resonance_site_count, site_frequency_resolution,
    transition_frequency, AtomSpecies, BreitRabiMode, HyperfineChannel, HyperfineState,
};

const MODE: BreitRabiMode = BreitRabiMode::Paper;
const B_RES: f64 = 649.0;

type Entry = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

/// Collects sub-checks of one criterion.
#[derive(Default)]
struct Criterion {
    parts: Vec<(bool, String)>,
}

impl Criterion {
    fn check(&mut self, ok: bool, text: String) -> &mut Self {
        self.parts.push((ok, text));
        self
    }

    fn done(&self) -> Outcome {
        let pass = self.parts.iter().all(|p| p.0);
        let detail = self
            .parts
            .iter()
            .map(|(ok, t)| if *ok { t.clone() } else { format!("[failed] {t}") })
            .collect::<Vec<_>>()
            .join("; ");
        Outcome { pass, detail }
    }
}

fn rb() -> AtomSpecies {
    AtomSpecies::rb87()
}

fn qubit() -> (HyperfineState, HyperfineState) {
    (HyperfineState::new(2, 2), HyperfineState::new(1, 1))
}

fn transition_at_resonance() -> Outcome {
    let (up, lo) = qubit();
    let f = transition_frequency(&rb(), up, lo, B_RES, MODE).unwrap();
    let mut c = Criterion::default();
    c.check(
        (f / 8.3e9 - 1.0).abs() <= 0.01,
        format!("E(2,2)-E(1,1) = {f:.6e} Hz vs 8.3e9 (1%)"),
    );
    c.check((f / 8.28e9 - 1.0).abs() <= 5e-3, "near the expected 8.28e9".to_string());
    c.done()
}

fn field_sensitivity_at_resonance() -> Outcome {
    let (up, lo) = qubit();
    let s = field_sensitivity(&rb(), up, lo, B_RES, MODE).unwrap();
    let h = 1e-3;
    let split =
        |b: f64| breit_rabi_energy(&rb(), up, b, MODE).unwrap() - breit_rabi_energy(&rb(), lo, b, MODE).unwrap();
    let fd = (split(B_RES + h) - split(B_RES - h)) / (2.0 * h);
    let mut c = Criterion::default();
    c.check(
        (s / 2.38e6 - 1.0).abs() <= 0.03,
        format!("df/dB = {s:.6e} Hz/G vs 2.38e6 (3%)"),
    );
    c.check((s / 2.33e6 - 1.0).abs() <= 5e-3, "near the expected 2.33e6".to_string());
    let rel = ((s - fd) / s).abs();
    c.check(rel <= 1e-6, format!("finite difference agrees to {rel:.1e} (1e-6)"));
    c.done()
}

fn addressing() -> Outcome {
    let (up, lo) = qubit();
    let s = field_sensitivity(&rb(), up, lo, B_RES, MODE).unwrap();
    let res = site_frequency_resolution(s, 1000.0, 5e-5).unwrap();
    let sites = resonance_site_count(5.0, 1000.0, 5e-5).unwrap();
    let mut c = Criterion::default();
    c.check(
        (1.0e5..=1.3e5).contains(&res),
        format!("site resolution {res:.4e} Hz in [1e5, 1.3e5]"),
    );
    c.check(sites == 100, format!("{sites} sites inside a 5 G resonance (100)"));
    c.done()
}

fn dipole_rate() -> Outcome {
    // Hand calculation in Gaussian units, where ω_dd = μ²/(r³ ħ):
    //   μ = 4.2 D = 4.2e-18 statC·cm, μ² = 1.764e-35
    //   r = 500 nm = 5e-5 cm, r³ = 1.25e-13 cm³
    //   ħ = 1.054571817e-27 erg·s, r³ħ = 1.31821477e-40
    //   ω_dd = 1.764e-35 / 1.31821477e-40 = 1.338173e5 rad/s
    const HAND: f64 = 1.338173e5;
    let w = dipole_dipole_rate(4.2, 500e-9).unwrap();
    let mut c = Criterion::default();
    c.check(
        (1.2e5..=1.5e5).contains(&w),
        format!("omega_dd = {w:.6e} rad/s in [1.2e5, 1.5e5]"),
    );
    c.check(
        (w / HAND - 1.0).abs() < 1e-6,
        format!("hand calculation {HAND:.6e} (1e-6)"),
    );
    c.done()
}

fn pi_pulse() -> Outcome {
    let t = pi_pulse_duration(&TwoLevelParams::resonant(1e6).unwrap()).unwrap();
    let mut c = Criterion::default();
    c.check(
        (t / 3e-6 - 1.0).abs() <= 0.10,
        format!("t_pi = {t:.4e} s vs 3e-6 (10%)"),
    );
    c.check((t - 3.14e-6).abs() < 0.005e-6, "equals 3.14 us".to_string());
    c.done()
}

fn phase_consistency() -> Outcome {
    let w = dipole_dipole_rate(4.2, 500e-9).unwrap();
    let omega = 1e6;
    let mut c = Criterion::default();

    let pulse = TwoLevelParams::resonant(omega).unwrap();
    let single = GateSchedule::new(vec![Step::RamanDown {
        pulse,
        duration: pi_pulse_duration(&pulse).unwrap(),
    }])
    .unwrap();
    let numeric = accumulated_phase_numeric(w, &single).unwrap().total;
    let exact = w * 3.0 * PI / (8.0 * omega);
    let rel = (numeric / exact - 1.0).abs();
    c.check(rel <= 1e-6, format!("single pulse phase off by {rel:.1e} rel (1e-6)"));

    let tau = interaction_time_for_pi(w, omega).unwrap();
    let full = GateSchedule::phase_gate(pulse, tau, None).unwrap();
    let phi = accumulated_phase_numeric(w, &full).unwrap().total;
    c.check(
        (phi - PI).abs() <= 1e-4,
        format!("schedule phase - pi = {:.1e} rad (1e-4)", phi - PI),
    );

    let detuned = TwoLevelParams::new(omega, w).unwrap();
    let tau = interaction_time_for_pi_detuned(w, omega, w).unwrap();
    let sched = GateSchedule::phase_gate(detuned, tau, None).unwrap();
    let quadrature = accumulated_phase_numeric(w, &sched).unwrap().total;
    let closed = total_phase_closed_form(w, omega, w, tau).unwrap();
    let rel = (closed / quadrature - 1.0).abs();
    c.check(
        rel <= 0.01,
        format!(
            "detuned closed form {closed:.6} vs quadrature {quadrature:.6} rad, {:.2}% (1%)",
            100.0 * rel
        ),
    );
    c.done()
}

fn gate_time() -> Outcome {
    let s = Scenario::paper_default();
    let sched = s.gate_schedule().unwrap();
    let t = sched.total_duration().gate_time();
    let w = s.omega_dd().unwrap();
    let tau = interaction_time_for_pi(w, 1e6).unwrap();
    let mut c = Criterion::default();
    c.check(
        (15e-6..=35e-6).contains(&t),
        format!("gate time {t:.4e} s in [15, 35] us"),
    );
    c.check(
        (21e-6..=31e-6).contains(&tau),
        format!("tau_int = {tau:.4e} s in [21, 31] us"),
    );
    // expected inconsistency: the quoted 14 us does not follow from the formula
    let quoted = 14e-6;
    c.check(
        tau / quoted > 1.25,
        format!(
            "quoted 14 us is {:.0}% short of the formula, recorded as inconsistent",
            100.0 * (1.0 - quoted / tau)
        ),
    );
    c.done()
}

fn fidelity() -> Outcome {
    let s = Scenario::paper_default();
    let phi = accumulated_phase_numeric(s.omega_dd().unwrap(), &s.gate_schedule().unwrap())
        .unwrap()
        .total;
    let f = gate_fidelity(&build_phase_gate(phi), &build_phase_gate(PI)).unwrap();
    let mut c = Criterion::default();
    c.check(f >= 1.0 - 1e-6, format!("F = 1 - {:.1e} (>= 1 - 1e-6)", 1.0 - f));
    c.done()
}

fn adiabatic_elimination() -> Outcome {
    let near = LambdaParams::new(2e7, 2e7, 2e8, 0.0)
        .unwrap()
        .with_stark_compensation(true);
    let t = pi_pulse_duration(&near.effective_two_level().unwrap()).unwrap();
    let k = 10f64.sqrt();
    let far = LambdaParams::new(2e7 * k, 2e7 * k, 2e9, 0.0)
        .unwrap()
        .with_stark_compensation(true);
    let d_near = compare_raman_to_two_level(&near, t).unwrap().final_deviation();
    let d_far = compare_raman_to_two_level(&far, t).unwrap().final_deviation();
    let mut c = Criterion::default();
    c.check(
        d_near < 0.01,
        format!("3-level vs 2-level transfer differ by {d_near:.2e} (1e-2)"),
    );
    c.check(
        d_near / d_far >= 5.0,
        format!("x{:.1} better at 10x detuning (>= 5)", d_near / d_far),
    );
    c.done()
}

fn stirap() -> Outcome {
    let (peak, sigma, delay) = (1e6, 30e-6, 45e-6);
    let p = LambdaParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
    let (pump, stokes) = stirap_pulse_pair(peak, sigma, delay, true).unwrap();
    let good = simulate_stirap(&pump, &stokes, &p).unwrap();
    let (pump, stokes) = stirap_pulse_pair(peak, sigma, delay, false).unwrap();
    let bad = simulate_stirap(&pump, &stokes, &p).unwrap();
    let mut c = Criterion::default();
    c.check(peak * sigma >= 30.0, format!("Omega_0 T = {}", peak * sigma));
    c.check(
        good.efficiency > 0.99,
        format!("efficiency {:.6} (> 0.99)", good.efficiency),
    );
    c.check(
        bad.efficiency < good.efficiency,
        format!("reversed order {:.4}", bad.efficiency),
    );
    let drift = good.max_norm_drift.max(bad.max_norm_drift);
    c.check(drift < 1e-9, format!("norm drift {drift:.1e} (< 1e-9)"));
    c.done()
}

fn budget() -> Outcome {
    let s = Scenario::paper_default();
    let (up, lo) = qubit();
    let sens = field_sensitivity(&rb(), up, lo, B_RES, MODE).unwrap();
    let t_phi = dephasing_time(sens, 3e-4).unwrap();
    let contrast = ramsey_contrast_mc(sens, 3e-4, t_phi, 100_000, s.seed).unwrap();
    let loss = inelastic_loss_probability(1e5, 20e-6).unwrap();
    let report = assemble_budget(
        &s.noise,
        sens,
        &s.gate_schedule().unwrap(),
        s.budget.readout_splitting_hz,
        &s.budget.options,
    )
    .unwrap();
    let ops = report.operations_count.unwrap();
    let mut c = Criterion::default();
    c.check(
        (180e-6..=250e-6).contains(&t_phi),
        format!("T_phi = {t_phi:.4e} s in [180, 250] us"),
    );
    c.check(
        (contrast - 0.6065).abs() <= 0.01,
        format!("MC contrast at T_phi {contrast:.4} (0.6065 +- 0.01)"),
    );
    c.check(
        (loss - 0.8647).abs() <= 1e-4,
        format!("loss over 20 us {loss:.6} (0.8647 +- 1e-4)"),
    );
    c.check(ops.abs_diff(10) <= 2, format!("{ops} operations (10 +- 2)"));
    c.done()
}

fn channel_stability() -> Outcome {
    let classify = |ch: HyperfineChannel| open_decay_channels(&ch, B_RES, MODE).unwrap();
    let mut c = Criterion::default();
    c.check(
        classify(HyperfineChannel::qubit_one()).is_empty(),
        "|2,2>+|2,2> stable".to_string(),
    );
    c.check(
        classify(HyperfineChannel::enabled_zero()).is_empty(),
        "|1,1>+|1,1> stable".to_string(),
    );
    let open = classify(HyperfineChannel::enabled_one());
    c.check(
        open == [HyperfineChannel::qubit_zero()],
        format!(
            "|2,2>Rb+|1,1>Li decays to {}",
            open.iter().map(|ch| ch.to_string()).collect::<Vec<_>>().join(", ")
        ),
    );
    c.done()
}

fn read_all(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn determinism() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let dir = root.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hybridgate"))
            .args(["paper-repro", "--seed", "7", "--out"])
            .arg(&dir)
            .env_remove("HYBRIDGATE_OUT")
            .output()
            .unwrap()
            .status;
        assert!(status.success(), "paper-repro exited with {status}");
        runs.push(read_all(&dir));
    }
    let mut c = Criterion::default();
    let names: Vec<&String> = runs[0].keys().collect();
    c.check(!runs[0].is_empty(), format!("files {names:?}"));
    c.check(runs[0] == runs[1], "two runs byte-identical".to_string());
    c.done()
}

fn main() -> ExitCode {
    let criteria: [Entry; 13] = [
        ("qubit transition at 649 G", transition_at_resonance),
        ("field sensitivity at 649 G", field_sensitivity_at_resonance),
        ("gradient addressing", addressing),
        ("dipole-dipole rate", dipole_rate),
        ("pi pulse duration", pi_pulse),
        ("phase consistency", phase_consistency),
        ("gate time", gate_time),
        ("noiseless fidelity", fidelity),
        ("adiabatic elimination", adiabatic_elimination),
        ("STIRAP transfer", stirap),
        ("decoherence budget", budget),
        ("channel stability", channel_stability),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
