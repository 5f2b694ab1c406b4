//! The `levels`, `pulse`, `stirap`, `gate`, `budget` and `sweep`
//! subcommands.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use hybridgate_core::budget::{
    assemble_budget, contrast_from_blocks, dephasing_time_with, inelastic_loss_probability, mc_block, mc_block_count,
    operations_budget, ramsey_contrast_analytic, ramsey_phasor_sum, validate_mc_inputs,
};
use hybridgate_core::dynamics::{
    pi_pulse_duration, raman_trajectory, simulate_stirap, stirap_pulse_pair, stirap_trajectory,
};
use hybridgate_core::gate::{
    accumulated_phase_numeric, build_phase_gate, gate_fidelity, phase_trajectory, total_phase_closed_form,
};
use hybridgate_core::hyperfine::{
    breit_rabi_energy, field_sensitivity, open_decay_channels, site_frequency_resolution, transition_frequency,
    AtomSpecies, HyperfineChannel, HyperfineState,
};

use crate::error::CliError;
use crate::output::{Cell, OutputDir};
use crate::scenario::{DipoleSource, Scenario, SweepParameter};

type Out<'a> = &'a mut dyn Write;

fn say(out: Out<'_>, text: impl AsRef<str>) {
    // terminal output is best effort; files are the product
    let _ = writeln!(out, "{}", text.as_ref());
}

/// `2` as "2", `-1` as "n1", `3/2` as "3h" (three halves).
fn half_tag(twice: i32) -> String {
    let sign = if twice < 0 { "n" } else { "" };
    let a = twice.abs();
    if a % 2 == 0 {
        format!("{sign}{}", a / 2)
    } else {
        format!("{sign}{a}h")
    }
}

pub fn state_tag(s: HyperfineState) -> String {
    format!("f{}m{}", half_tag(s.twice_f), half_tag(s.twice_m))
}

pub fn channel_tag(c: &HyperfineChannel) -> String {
    format!(
        "{}:{}+{}:{}",
        c.atom_a.species.name,
        state_tag(c.atom_a.state),
        c.atom_b.species.name,
        state_tag(c.atom_b.state)
    )
}

/// Stretched states of the upper and lower manifolds, |I+1/2, I+1/2⟩ and
/// |I-1/2, I-1/2⟩.
pub fn stretched_states(species: &AtomSpecies) -> (HyperfineState, HyperfineState) {
    let t = species.twice_nuclear_spin as i32;
    (
        HyperfineState {
            twice_f: t + 1,
            twice_m: t + 1,
        },
        HyperfineState {
            twice_f: t - 1,
            twice_m: t - 1,
        },
    )
}

/// Qubit-state × enabler-state channels: storage and enabled encodings.
pub fn encoding_channels(s: &Scenario) -> Result<Vec<HyperfineChannel>, CliError> {
    let (storage, enabled) = stretched_states(&s.enabler_species);
    let mut out = Vec::new();
    for enabler in [storage, enabled] {
        for qubit in [s.qubit_lower, s.qubit_upper] {
            out.push(HyperfineChannel::new(
                s.qubit_species.clone(),
                qubit,
                s.enabler_species.clone(),
                enabler,
            )?);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------

pub fn levels(s: &Scenario, files: &mut OutputDir, out: Out<'_>) -> Result<(), CliError> {
    let fields = s.levels.values();
    let species = [&s.qubit_species, &s.enabler_species];

    let mut header = vec!["b_g".to_string()];
    for sp in species {
        for st in sp.states() {
            header.push(format!("e_{}_{}_hz", sp.name.to_ascii_lowercase(), state_tag(st)));
        }
    }
    let mut energies = Vec::with_capacity(fields.len());
    let mut transitions = Vec::with_capacity(fields.len());
    for &b in &fields {
        let mut row = vec![Cell::Num(b)];
        for sp in species {
            for st in sp.states() {
                row.push(Cell::Num(breit_rabi_energy(sp, st, b, s.mode)?));
            }
        }
        energies.push(row);
        let splitting = transition_frequency(&s.qubit_species, s.qubit_upper, s.qubit_lower, b, s.mode)?;
        let sensitivity = field_sensitivity(&s.qubit_species, s.qubit_upper, s.qubit_lower, b, s.mode)?;
        let resolution = site_frequency_resolution(
            sensitivity.abs(),
            s.field.gradient_gauss_per_cm,
            s.field.site_spacing_cm,
        )?;
        transitions.push((b, splitting, sensitivity, resolution));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    files.table("levels_energies.csv", &header_refs, &energies)?;
    let rows: Vec<Vec<Cell>> = transitions
        .iter()
        .map(|&(b, f, d, r)| vec![b.into(), f.into(), d.into(), r.into()])
        .collect();
    files.table(
        "levels_transitions.csv",
        &["b_g", "splitting_hz", "sensitivity_hz_per_g", "site_resolution_hz"],
        &rows,
    )?;
    files.curve("levels", "splitting_hz", "b_g", transitions.iter().map(|t| (t.0, t.1)))?;
    files.curve(
        "levels",
        "sensitivity_hz_per_g",
        "b_g",
        transitions.iter().map(|t| (t.0, t.2)),
    )?;

    let b = s.field.b_gauss;
    let mut rows = Vec::new();
    say(out, format!("collision channels at {b} G:"));
    for channel in encoding_channels(s)? {
        let open = open_decay_channels(&channel, b, s.mode)?;
        let products: Vec<String> = open.iter().map(channel_tag).collect();
        say(
            out,
            format!(
                "  {channel}: {}",
                if open.is_empty() {
                    "stable".to_string()
                } else {
                    format!(
                        "decays to {}",
                        open.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                    )
                }
            ),
        );
        rows.push(vec![
            Cell::from(channel_tag(&channel)),
            Cell::Num(channel.m_total()),
            Cell::Num(channel.internal_energy(b, s.mode)?),
            Cell::Num(open.len() as f64),
            Cell::from(products.join(" ")),
        ]);
    }
    files.table(
        "levels_channels.csv",
        &["channel", "m_total", "energy_hz", "open_channels", "decay_products"],
        &rows,
    )?;
    let f = transition_frequency(&s.qubit_species, s.qubit_upper, s.qubit_lower, b, s.mode)?;
    say(
        out,
        format!(
            "qubit transition {} -> {} at {b} G: {f:.6e} Hz",
            s.qubit_lower, s.qubit_upper
        ),
    );
    Ok(())
}

// ---------------------------------------------------------------------------

pub fn pulse(s: &Scenario, files: &mut OutputDir, out: Out<'_>) -> Result<(), CliError> {
    let lambda = s.lambda_params()?;
    let two_level = s.raman_pulse()?;
    let t_pi = pi_pulse_duration(&two_level)?;
    let (cmp, trace) = raman_trajectory(&lambda, t_pi, s.raman.samples)?;
    let rows: Vec<Vec<Cell>> = trace
        .iter()
        .map(|p| {
            vec![
                p.time.into(),
                p.populations.atoms.into(),
                p.populations.excited.into(),
                p.populations.molecule.into(),
                p.two_level.into(),
            ]
        })
        .collect();
    files.table(
        "pulse_populations.csv",
        &["time_s", "atoms", "excited", "molecule", "two_level_molecule"],
        &rows,
    )?;
    files.curve(
        "pulse",
        "molecule",
        "time_s",
        trace.iter().map(|p| (p.time, p.populations.molecule)),
    )?;
    files.curve(
        "pulse",
        "two_level_molecule",
        "time_s",
        trace.iter().map(|p| (p.time, p.two_level)),
    )?;
    files.curve(
        "pulse",
        "excited",
        "time_s",
        trace.iter().map(|p| (p.time, p.populations.excited)),
    )?;
    let f = cmp.final_populations;
    files.summary(
        "pulse_summary.csv",
        &[
            ("omega_r_rad_s", two_level.omega_r),
            ("two_photon_detuning_rad_s", two_level.delta),
            ("pi_pulse_s", t_pi),
            ("final_atoms", f.atoms),
            ("final_excited", f.excited),
            ("final_molecule", f.molecule),
            ("two_level_final_molecule", cmp.two_level_final),
            ("final_deviation", cmp.final_deviation()),
            ("max_deviation", cmp.max_deviation),
            ("max_norm_drift", cmp.max_norm_drift),
            ("steps", cmp.steps as f64),
        ],
    )?;
    say(
        out,
        format!(
            "Raman pi pulse: Omega_R = {:.4e} rad/s, duration {:.4e} s",
            two_level.omega_r, t_pi
        ),
    );
    say(
        out,
        format!(
            "  three-level: atoms {:.6}, excited {:.2e}, molecule {:.6}; two-level molecule {:.6}",
            f.atoms, f.excited, f.molecule, cmp.two_level_final
        ),
    );
    Ok(())
}

// ---------------------------------------------------------------------------

pub fn stirap(s: &Scenario, files: &mut OutputDir, out: Out<'_>) -> Result<(), CliError> {
    let p = s.stirap_params()?;
    let st = &s.stirap;
    let (pump, stokes) = stirap_pulse_pair(st.peak, st.rms_width, st.delay, true)?;
    let (outcome, trace) = stirap_trajectory(&pump, &stokes, &p, st.samples)?;
    let rows: Vec<Vec<Cell>> = trace
        .iter()
        .map(|x| {
            vec![
                x.time.into(),
                x.pump.into(),
                x.stokes.into(),
                x.populations.atoms.into(),
                x.populations.excited.into(),
                x.populations.molecule.into(),
            ]
        })
        .collect();
    files.table(
        "stirap_trajectory.csv",
        &["time_s", "pump_rad_s", "stokes_rad_s", "atoms", "excited", "molecule"],
        &rows,
    )?;
    files.curve(
        "stirap",
        "molecule",
        "time_s",
        trace.iter().map(|x| (x.time, x.populations.molecule)),
    )?;

    let peaks = st.scan.values();
    let scan: Vec<(f64, f64, f64)> = peaks
        .par_iter()
        .map(|&peak| -> Result<(f64, f64, f64), CliError> {
            let (pump, stokes) = stirap_pulse_pair(peak, st.rms_width, st.delay, true)?;
            let good = simulate_stirap(&pump, &stokes, &p)?.efficiency;
            let (pump, stokes) = stirap_pulse_pair(peak, st.rms_width, st.delay, false)?;
            let reversed = simulate_stirap(&pump, &stokes, &p)?.efficiency;
            Ok((peak, good, reversed))
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<Vec<Cell>> = scan
        .iter()
        .map(|&(peak, good, rev)| vec![peak.into(), (peak * st.rms_width).into(), good.into(), rev.into()])
        .collect();
    files.table(
        "stirap_scan.csv",
        &["peak_rad_s", "pulse_area", "efficiency", "reversed_efficiency"],
        &rows,
    )?;
    files.curve(
        "stirap",
        "efficiency",
        "pulse_area",
        scan.iter().map(|x| (x.0 * st.rms_width, x.1)),
    )?;
    files.curve(
        "stirap",
        "reversed_efficiency",
        "pulse_area",
        scan.iter().map(|x| (x.0 * st.rms_width, x.2)),
    )?;

    let (pump_r, stokes_r) = stirap_pulse_pair(st.peak, st.rms_width, st.delay, false)?;
    let reversed = simulate_stirap(&pump_r, &stokes_r, &p)?;
    files.summary(
        "stirap_summary.csv",
        &[
            ("peak_rad_s", st.peak),
            ("rms_width_s", st.rms_width),
            ("delay_s", st.delay),
            ("pulse_area", st.peak * st.rms_width),
            ("efficiency", outcome.efficiency),
            ("reversed_efficiency", reversed.efficiency),
            (
                "max_excited_population",
                trace.iter().map(|x| x.populations.excited).fold(0.0, f64::max),
            ),
            ("max_norm_drift", outcome.max_norm_drift),
            ("steps", outcome.steps as f64),
        ],
    )?;
    say(
        out,
        format!(
            "STIRAP at Omega_0 sigma = {:.1}: efficiency {:.6} (reversed order {:.6}), norm drift {:.1e}",
            st.peak * st.rms_width,
            outcome.efficiency,
            reversed.efficiency,
            outcome.max_norm_drift
        ),
    );
    Ok(())
}

// ---------------------------------------------------------------------------

pub struct GateFigures {
    pub omega_dd: f64,
    pub omega_r: f64,
    pub delta: f64,
    pub pi_pulse: f64,
    pub interaction_time: f64,
    pub gate_time: f64,
    pub total_time: f64,
    pub phase_numeric: f64,
    pub phase_closed_form: f64,
    pub fidelity: f64,
}

pub fn gate_figures(s: &Scenario) -> Result<GateFigures, CliError> {
    let omega_dd = s.omega_dd()?;
    let pulse = s.raman_pulse()?;
    let tau = s.interaction_time()?;
    let schedule = s.gate_schedule()?;
    let phase = accumulated_phase_numeric(omega_dd, &schedule)?.total;
    let closed = total_phase_closed_form(omega_dd, pulse.omega_r, pulse.delta, tau)?;
    let fidelity = gate_fidelity(&build_phase_gate(phase), &build_phase_gate(PI))?;
    let durations = schedule.total_duration();
    Ok(GateFigures {
        omega_dd,
        omega_r: pulse.omega_r,
        delta: pulse.delta,
        pi_pulse: pi_pulse_duration(&pulse)?,
        interaction_time: tau,
        gate_time: durations.gate_time(),
        total_time: durations.total(),
        phase_numeric: phase,
        phase_closed_form: closed,
        fidelity,
    })
}

pub fn gate(s: &Scenario, files: &mut OutputDir, out: Out<'_>) -> Result<(), CliError> {
    let fig = gate_figures(s)?;
    let schedule = s.gate_schedule()?;
    let acc = accumulated_phase_numeric(fig.omega_dd, &schedule)?;
    let mut start = 0.0;
    let mut rows = Vec::new();
    for (i, step) in schedule.steps().iter().enumerate() {
        rows.push(vec![
            Cell::from(step.name()),
            Cell::Num(start),
            Cell::Num(step.duration()),
            Cell::Num(acc.per_step[i]),
            Cell::Num(acc.population_after[i]),
        ]);
        start += step.duration();
    }
    files.table(
        "gate_schedule.csv",
        &["step", "start_s", "duration_s", "phase_rad", "molecular_population_end"],
        &rows,
    )?;
    let trace = phase_trajectory(fig.omega_dd, &schedule, s.gate.samples_per_step)?;
    files.curve("gate", "phase_rad", "time_s", trace.iter().map(|p| (p.time, p.phase)))?;
    files.curve(
        "gate",
        "molecular_population",
        "time_s",
        trace.iter().map(|p| (p.time, p.molecular_population)),
    )?;
    let polarization = match s.dipole.source {
        DipoleSource::Induced => f64::NAN,
        DipoleSource::Field(d) => hybridgate_core::gate::induced_dipole(&d)?.polarization,
    };
    files.summary(
        "gate_summary.csv",
        &[
            ("induced_dipole_d", s.dipole.induced_debye),
            ("polarization", polarization),
            ("separation_m", s.dipole.separation_m),
            ("omega_dd_rad_s", fig.omega_dd),
            ("omega_r_rad_s", fig.omega_r),
            ("two_photon_detuning_rad_s", fig.delta),
            ("pi_pulse_s", fig.pi_pulse),
            ("interaction_time_s", fig.interaction_time),
            ("gate_time_s", fig.gate_time),
            ("total_time_s", fig.total_time),
            ("phase_numeric_rad", fig.phase_numeric),
            ("phase_closed_form_rad", fig.phase_closed_form),
            ("phase_error_rad", fig.phase_numeric - PI),
            ("fidelity", fig.fidelity),
        ],
    )?;
    say(
        out,
        format!(
            "omega_dd = {:.5e} rad/s, tau_int = {:.4e} s, gate time {:.4e} s",
            fig.omega_dd, fig.interaction_time, fig.gate_time
        ),
    );
    say(
        out,
        format!(
            "phase: quadrature {:.9} rad, closed form {:.9} rad; fidelity to diag(-1,1,1,1) {:.12}",
            fig.phase_numeric, fig.phase_closed_form, fig.fidelity
        ),
    );
    Ok(())
}

// ---------------------------------------------------------------------------

/// [`hybridgate_core::budget::ramsey_contrast_mc`] with the sample blocks
/// spread over the rayon pool. Bit-identical to the serial version.
pub fn ramsey_contrast_parallel(
    sensitivity: f64,
    sigma_b: f64,
    t: f64,
    n_samples: u64,
    seed: u64,
) -> Result<f64, CliError> {
    validate_mc_inputs(sensitivity, sigma_b, t, n_samples)?;
    let blocks: Vec<_> = (0..mc_block_count(n_samples))
        .into_par_iter()
        .map(|b| ramsey_phasor_sum(sensitivity, sigma_b, t, seed, mc_block(b, n_samples)))
        .collect();
    Ok(contrast_from_blocks(blocks, n_samples))
}

pub fn budget(s: &Scenario, files: &mut OutputDir, out: Out<'_>) -> Result<(), CliError> {
    let sensitivity = s.sensitivity()?.abs();
    let schedule = s.gate_schedule()?;
    let report = assemble_budget(
        &s.noise,
        sensitivity,
        &schedule,
        s.budget.readout_splitting_hz,
        &s.budget.options,
    )?;
    let reference_loss = inelastic_loss_probability(s.noise.gamma_inelastic, s.gate.reference_gate_time_s)?;
    let reference_ops = operations_budget(report.dephasing_time, s.gate.reference_gate_time_s)?;

    let mut contrast_at_t_phi = f64::NAN;
    if report.dephasing_time.is_finite() {
        let n = s.budget.contrast_points;
        let times: Vec<f64> = (0..n)
            .map(|k| 3.0 * report.dephasing_time * k as f64 / (n - 1) as f64)
            .collect();
        let curve: Vec<(f64, f64, f64)> = times
            .iter()
            .map(|&t| -> Result<_, CliError> {
                let mc = ramsey_contrast_parallel(sensitivity, s.noise.sigma_b, t, s.budget.mc_samples, s.seed)?;
                Ok((t, mc, ramsey_contrast_analytic(t, report.dephasing_time)))
            })
            .collect::<Result<_, _>>()?;
        let rows: Vec<Vec<Cell>> = curve
            .iter()
            .map(|&(t, m, g)| vec![t.into(), m.into(), g.into()])
            .collect();
        files.table(
            "budget_contrast.csv",
            &["time_s", "contrast_mc", "contrast_gaussian"],
            &rows,
        )?;
        files.curve("budget", "contrast_mc", "time_s", curve.iter().map(|c| (c.0, c.1)))?;
        files.curve(
            "budget",
            "contrast_gaussian",
            "time_s",
            curve.iter().map(|c| (c.0, c.2)),
        )?;
        contrast_at_t_phi = ramsey_contrast_parallel(
            sensitivity,
            s.noise.sigma_b,
            report.dephasing_time,
            s.budget.mc_samples,
            s.seed,
        )?;
    }
    let ops = |o: Option<u64>| o.map_or(f64::INFINITY, |n| n as f64);
    files.summary(
        "budget_report.csv",
        &[
            ("sensitivity_hz_per_g", sensitivity),
            ("sigma_b_g", s.noise.sigma_b),
            ("dephasing_time_s", report.dephasing_time),
            ("gate_time_s", report.gate_time),
            ("operations_count", ops(report.operations_count)),
            ("operations_count_reference", ops(reference_ops)),
            ("loss_probability", report.loss_probability),
            ("loss_probability_reference", reference_loss),
            ("adiabaticity_ok", if report.adiabaticity_ok { 1.0 } else { 0.0 }),
            ("adiabaticity_margin", report.adiabaticity_margin.unwrap_or(f64::NAN)),
            ("readout_min_duration_s", report.readout_min_duration),
            ("contrast_at_dephasing_time", contrast_at_t_phi),
        ],
    )?;
    say(
        out,
        format!(
            "T_phi = {:.4e} s, gate time {:.4e} s, operations {}, loss per gate {:.4}",
            report.dephasing_time,
            report.gate_time,
            report
                .operations_count
                .map_or("unbounded".to_string(), |n| n.to_string()),
            report.loss_probability
        ),
    );
    say(
        out,
        format!(
            "adiabatic rotations: {}, readout pulse >= {:.3e} s",
            if report.adiabaticity_ok { "yes" } else { "no" },
            report.readout_min_duration
        ),
    );
    Ok(())
}

// ---------------------------------------------------------------------------

pub fn sweep_columns(p: SweepParameter) -> &'static [&'static str] {
    match p {
        SweepParameter::SeparationM | SweepParameter::MuInducedD => {
            &["omega_dd_rad_s", "interaction_time_s", "gate_time_s", "phase_rad"]
        }
        SweepParameter::FieldG => &[
            "transition_hz",
            "sensitivity_hz_per_g",
            "site_resolution_hz",
            "dephasing_time_s",
        ],
        SweepParameter::OmegaRRadS => &[
            "pi_pulse_s",
            "interaction_time_s",
            "gate_time_s",
            "phase_rad",
            "fidelity",
        ],
        SweepParameter::SigmaBG => &["dephasing_time_s", "operations_count"],
        SweepParameter::GammaInelasticPerS => &["loss_probability", "loss_probability_reference"],
        SweepParameter::StirapPeakRadS => &["pulse_area", "efficiency", "reversed_efficiency"],
    }
}

/// Domain failures at one sweep point become NaN cells; numerical failures
/// abort the sweep.
fn or_nan(r: Result<f64, CliError>) -> Result<f64, CliError> {
    match r {
        Ok(v) => Ok(v),
        Err(CliError::Compute(e)) if e.is_numerical() => Err(CliError::Compute(e)),
        Err(_) => Ok(f64::NAN),
    }
}

fn gate_columns(s: &Scenario, with_pulse: bool) -> Result<Vec<f64>, CliError> {
    match gate_figures(s) {
        Ok(f) => Ok(if with_pulse {
            vec![f.pi_pulse, f.interaction_time, f.gate_time, f.phase_numeric, f.fidelity]
        } else {
            vec![f.omega_dd, f.interaction_time, f.gate_time, f.phase_numeric]
        }),
        Err(CliError::Compute(e)) if e.is_numerical() => Err(CliError::Compute(e)),
        Err(_) => {
            let mut v = vec![f64::NAN; if with_pulse { 5 } else { 4 }];
            if !with_pulse {
                v[0] = or_nan(s.omega_dd())?;
            } else {
                v[0] = or_nan(s.raman_pulse().and_then(|p| Ok(pi_pulse_duration(&p)?)))?;
            }
            Ok(v)
        }
    }
}

pub fn sweep_point(base: &Scenario, p: SweepParameter, value: f64) -> Result<Vec<f64>, CliError> {
    let mut s = base.clone();
    match p {
        SweepParameter::SeparationM => {
            s.dipole.separation_m = value;
            gate_columns(&s, false)
        }
        SweepParameter::MuInducedD => {
            s.dipole.induced_debye = value;
            gate_columns(&s, false)
        }
        SweepParameter::FieldG => {
            s.field.b_gauss = value;
            let f = or_nan(
                transition_frequency(&s.qubit_species, s.qubit_upper, s.qubit_lower, value, s.mode)
                    .map_err(CliError::from),
            )?;
            let d = or_nan(s.sensitivity())?;
            let r = or_nan(
                site_frequency_resolution(d.abs(), s.field.gradient_gauss_per_cm, s.field.site_spacing_cm)
                    .map_err(CliError::from),
            )?;
            let t = or_nan(
                dephasing_time_with(d.abs(), s.noise.sigma_b, s.budget.options.dephasing).map_err(CliError::from),
            )?;
            Ok(vec![f, d, r, t])
        }
        SweepParameter::OmegaRRadS => {
            let current = base.raman_pulse()?.omega_r;
            let scale = (value / current).sqrt();
            s.raman.omega_p *= scale;
            s.raman.omega_s *= scale;
            gate_columns(&s, true)
        }
        SweepParameter::SigmaBG => {
            s.noise.sigma_b = value;
            let t = or_nan(
                s.sensitivity()
                    .and_then(|d| Ok(dephasing_time_with(d.abs(), value, s.budget.options.dephasing)?)),
            )?;
            let gate_time = s.gate_schedule()?.total_duration().gate_time();
            let n = or_nan(
                operations_budget(t, gate_time)
                    .map(|o| o.map_or(f64::INFINITY, |n| n as f64))
                    .map_err(CliError::from),
            )?;
            Ok(vec![t, n])
        }
        SweepParameter::GammaInelasticPerS => {
            let gate_time = s.gate_schedule()?.total_duration().gate_time();
            Ok(vec![
                or_nan(inelastic_loss_probability(value, gate_time).map_err(CliError::from))?,
                or_nan(inelastic_loss_probability(value, s.gate.reference_gate_time_s).map_err(CliError::from))?,
            ])
        }
        SweepParameter::StirapPeakRadS => {
            let p = s.stirap_params()?;
            let st = &s.stirap;
            let run = |counterintuitive: bool| -> Result<f64, CliError> {
                let (pump, stokes) = stirap_pulse_pair(value, st.rms_width, st.delay, counterintuitive)?;
                Ok(simulate_stirap(&pump, &stokes, &p)?.efficiency)
            };
            Ok(vec![value * st.rms_width, or_nan(run(true))?, or_nan(run(false))?])
        }
    }
}

pub fn sweep(s: &Scenario, files: &mut OutputDir, out: Out<'_>) -> Result<(), CliError> {
    let p = s.sweep.parameter;
    let xs = s.sweep.axis.values();
    let results: Vec<Vec<f64>> = xs.par_iter().map(|&x| sweep_point(s, p, x)).collect::<Result<_, _>>()?;
    let columns = sweep_columns(p);
    let mut header = vec![p.key()];
    header.extend_from_slice(columns);
    let rows: Vec<Vec<Cell>> = xs
        .iter()
        .zip(&results)
        .map(|(&x, ys)| std::iter::once(x).chain(ys.iter().copied()).map(Cell::Num).collect())
        .collect();
    files.table(&format!("sweep_{}.csv", p.key()), &header, &rows)?;
    for (j, quantity) in columns.iter().enumerate() {
        files.curve(
            "sweep",
            quantity,
            p.key(),
            xs.iter().zip(&results).map(|(&x, ys)| (x, ys[j])),
        )?;
    }
    say(
        out,
        format!(
            "swept {} over {} points in [{:e}, {:e}]",
            p.key(),
            xs.len(),
            s.sweep.axis.min,
            s.sweep.axis.max
        ),
    );
    Ok(())
}
