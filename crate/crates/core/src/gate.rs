//! Dipole-dipole phase gate between two molecules in neighbouring sites.
//!
//! The only state that picks up a phase is the one where both sites hold a
//! molecule. With `p(t)` the molecular population of one site, the phase is
//! `φ(t) = ∫ ω_dd · p(t')² dt'` where `ω_dd = V_dd/ħ` (rad/s).

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // unused once std is linked
use num_traits::Float;

use crate::constants::{debye_to_si, COULOMB_FACTOR, PLANCK, REDUCED_PLANCK};
use crate::dynamics::{pi_pulse_duration, two_level_population, TwoLevelParams, C64};
use crate::{Error, Result};

/// Induced dipoles whose polarization factor exceeds this are flagged as
/// outside the linear-response regime.
pub const LINEAR_RESPONSE_LIMIT: f64 = 0.5;

/// Relative convergence target for the phase quadrature.
pub const PHASE_QUADRATURE_TOLERANCE: f64 = 1e-10;

/// Unitarity tolerance on max |U†U - I|.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleParams {
    /// Permanent dipole μ, debye.
    pub mu_permanent_debye: f64,
    /// Rotational constant B expressed as a linear frequency, Hz.
    pub rotational_constant_hz: f64,
    /// Static electric field E_dc, V/m.
    pub field_v_per_m: f64,
    /// Distance between the molecules, m.
    pub separation_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedDipole {
    pub debye: f64,
    /// μE_dc/(3hB).
    pub polarization: f64,
    /// False when the polarization exceeds [`LINEAR_RESPONSE_LIMIT`].
    pub linear_response_valid: bool,
}

/// Lab-frame dipole `μ·(μE_dc/3hB)` of a molecule in its rotational ground
/// state, to first order in the field.
pub fn induced_dipole(d: &DipoleParams) -> Result<InducedDipole> {
    let positive = [d.mu_permanent_debye, d.rotational_constant_hz, d.field_v_per_m]
        .iter()
        .all(|v| *v > 0.0 && v.is_finite());
    if !positive {
        return Err(Error::domain("induced dipole", "mu, B and E_dc must be positive"));
    }
    let polarization = polarization_factor(d.mu_permanent_debye, d.field_v_per_m, d.rotational_constant_hz);
    Ok(InducedDipole {
        debye: d.mu_permanent_debye * polarization,
        polarization,
        linear_response_valid: polarization <= LINEAR_RESPONSE_LIMIT,
    })
}

fn polarization_factor(mu_debye: f64, field_v_per_m: f64, rotational_constant_hz: f64) -> f64 {
    debye_to_si(mu_debye) * field_v_per_m / (3.0 * PLANCK * rotational_constant_hz)
}

/// Field E_dc that gives the requested polarization factor.
pub fn field_for_polarization(mu_debye: f64, rotational_constant_hz: f64, polarization: f64) -> f64 {
    polarization * 3.0 * PLANCK * rotational_constant_hz / debye_to_si(mu_debye)
}

/// `ω_dd = μ²/(4πε₀ r³ ħ)`, rad/s, for two aligned dipoles.
pub fn dipole_dipole_rate(mu_debye: f64, separation_m: f64) -> Result<f64> {
    if !(separation_m > 0.0 && separation_m.is_finite()) {
        return Err(Error::domain("dipole-dipole rate", "separation must be positive"));
    }
    if !(mu_debye >= 0.0 && mu_debye.is_finite()) {
        return Err(Error::domain("dipole-dipole rate", "dipole must be non-negative"));
    }
    let mu = debye_to_si(mu_debye);
    Ok(mu * mu / (COULOMB_FACTOR * separation_m.powi(3) * REDUCED_PLANCK))
}

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    /// Enabler atom rotated into the Feshbach channel.
    EnablerRotation {
        duration: f64,
    },
    /// Atom pair converted into a molecule.
    RamanDown {
        pulse: TwoLevelParams,
        duration: f64,
    },
    /// Fields off; the molecules interact.
    Wait {
        duration: f64,
    },
    /// Molecule converted back into atoms.
    RamanUp {
        pulse: TwoLevelParams,
        duration: f64,
    },
    EnablerReturn {
        duration: f64,
    },
}

impl Step {
    pub fn duration(&self) -> f64 {
        match *self {
            Step::EnablerRotation { duration }
            | Step::RamanDown { duration, .. }
            | Step::Wait { duration }
            | Step::RamanUp { duration, .. }
            | Step::EnablerReturn { duration } => duration,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Step::EnablerRotation { .. } => "enabler_rotation",
            Step::RamanDown { .. } => "raman_down",
            Step::Wait { .. } => "wait",
            Step::RamanUp { .. } => "raman_up",
            Step::EnablerReturn { .. } => "enabler_return",
        }
    }

    pub fn is_enabler(&self) -> bool {
        matches!(self, Step::EnablerRotation { .. } | Step::EnablerReturn { .. })
    }

    /// Molecular population `duration`-relative time `t` into the step,
    /// given the population `held` when the step starts.
    fn molecular_population(&self, held: f64, t: f64) -> f64 {
        match self {
            Step::RamanDown { pulse, .. } => held + (1.0 - held) * two_level_population(pulse, t),
            Step::RamanUp { pulse, .. } => {
                let ceiling = pulse.transfer_ceiling();
                if ceiling == 0.0 {
                    held
                } else {
                    held * (1.0 - two_level_population(pulse, t) / ceiling)
                }
            }
            _ => held,
        }
    }
}

/// Ordered protocol timeline. Starts with no molecules.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateSchedule {
    steps: Vec<Step>,
}

impl GateSchedule {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let schedule = GateSchedule { steps };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Enabler rotation, Raman pi pulse down, wait, Raman pi pulse up,
    /// enabler return. Enabler steps are skipped when `enabler_rotation` is
    /// `None`.
    pub fn phase_gate(raman: TwoLevelParams, wait: f64, enabler_rotation: Option<f64>) -> Result<Self> {
        let pulse = pi_pulse_duration(&raman)?;
        let mut steps = Vec::with_capacity(5);
        if let Some(duration) = enabler_rotation {
            steps.push(Step::EnablerRotation { duration });
        }
        steps.push(Step::RamanDown {
            pulse: raman,
            duration: pulse,
        });
        steps.push(Step::Wait { duration: wait });
        steps.push(Step::RamanUp {
            pulse: raman,
            duration: pulse,
        });
        if let Some(duration) = enabler_rotation {
            steps.push(Step::EnablerReturn { duration });
        }
        Self::new(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &GateSchedule) -> Result<Self> {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Self::new(steps)
    }

    fn validate(&self) -> Result<()> {
        if self
            .steps
            .iter()
            .any(|s| !(s.duration() > 0.0 && s.duration().is_finite()))
        {
            return Err(Error::InvalidSchedule("step durations must be positive and finite"));
        }
        let first = |pred: fn(&Step) -> bool| self.steps.iter().position(pred);
        let last = |pred: fn(&Step) -> bool| self.steps.iter().rposition(pred);
        let is_down = |s: &Step| matches!(s, Step::RamanDown { .. });
        let is_wait = |s: &Step| matches!(s, Step::Wait { .. });
        let is_up = |s: &Step| matches!(s, Step::RamanUp { .. });
        if let (Some(down), Some(wait), Some(up)) = (first(is_down), first(is_wait), first(is_up)) {
            let last_down = last(is_down).unwrap_or(down);
            if !(down < wait && wait < up && last_down < up) {
                return Err(Error::InvalidSchedule(
                    "Raman down-transfer must precede the wait, which must precede the up-transfer",
                ));
            }
        }
        Ok(())
    }

    pub fn total_duration(&self) -> DurationBreakdown {
        let mut b = DurationBreakdown::default();
        for step in &self.steps {
            let d = step.duration();
            match step {
                Step::EnablerRotation { .. } | Step::EnablerReturn { .. } => b.enabler += d,
                Step::RamanDown { .. } => b.raman_down += d,
                Step::Wait { .. } => b.wait += d,
                Step::RamanUp { .. } => b.raman_up += d,
            }
        }
        b
    }
}

/// Schedule length split by step kind, seconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DurationBreakdown {
    pub enabler: f64,
    pub raman_down: f64,
    pub wait: f64,
    pub raman_up: f64,
}

impl DurationBreakdown {
    /// Conversion pulses plus interaction time; enabler rotations excluded.
    pub fn gate_time(&self) -> f64 {
        self.raman_down + self.wait + self.raman_up
    }

    pub fn total(&self) -> f64 {
        self.gate_time() + self.enabler
    }
}

pub fn schedule_total_duration(schedule: &GateSchedule) -> DurationBreakdown {
    schedule.total_duration()
}

// ---------------------------------------------------------------------------
// Phase accumulation
// ---------------------------------------------------------------------------

/// Composite Simpson on `[0, length]`, doubling the panel count until the
/// relative change drops below `tolerance`.
fn integrate<F: Fn(f64) -> f64>(f: F, length: f64, tolerance: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 1 << 22;
    let simpson = |n: usize| {
        let h = length / n as f64;
        let mut odd = 0.0;
        let mut even = 0.0;
        for k in 1..n {
            let v = f(k as f64 * h);
            if k % 2 == 1 {
                odd += v;
            } else {
                even += v;
            }
        }
        h / 3.0 * (f(0.0) + 4.0 * odd + 2.0 * even + f(length))
    };
    let mut n = 16;
    let mut previous = simpson(n);
    loop {
        n *= 2;
        let current = simpson(n);
        let change = (current - previous).abs();
        if change <= tolerance * current.abs() || change == 0.0 {
            return Ok(current);
        }
        if n >= MAX_INTERVALS {
            return Err(Error::QuadratureDiverged { intervals: n, change });
        }
        previous = current;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAccumulation {
    /// Total phase, rad.
    pub total: f64,
    /// Phase collected in each step, rad, in schedule order.
    pub per_step: Vec<f64>,
    /// Molecular population at the end of each step.
    pub population_after: Vec<f64>,
}

/// Numerical `∫ ω_dd p(t)² dt` over the schedule. During Raman steps the
/// population follows the two-level Rabi formula; during waits it stays at
/// the value reached by the preceding pulse.
pub fn accumulated_phase_numeric(omega_dd: f64, schedule: &GateSchedule) -> Result<PhaseAccumulation> {
    if !(omega_dd >= 0.0 && omega_dd.is_finite()) {
        return Err(Error::domain(
            "phase accumulation",
            "omega_dd must be finite and non-negative",
        ));
    }
    let mut held = 0.0;
    let mut per_step = Vec::with_capacity(schedule.steps.len());
    let mut population_after = Vec::with_capacity(schedule.steps.len());
    for step in &schedule.steps {
        let phase = integrate(
            |t| {
                let p = step.molecular_population(held, t);
                omega_dd * p * p
            },
            step.duration(),
            PHASE_QUADRATURE_TOLERANCE,
        )?;
        per_step.push(phase);
        held = step.molecular_population(held, step.duration());
        population_after.push(held);
    }
    Ok(PhaseAccumulation {
        total: per_step.iter().sum(),
        per_step,
        population_after,
    })
}

/// A point of the phase-versus-time curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample {
    pub time: f64,
    pub molecular_population: f64,
    pub phase: f64,
}

/// φ(t) sampled `samples_per_step` times inside every step (plus t = 0).
pub fn phase_trajectory(omega_dd: f64, schedule: &GateSchedule, samples_per_step: usize) -> Result<Vec<PhaseSample>> {
    if samples_per_step == 0 {
        return Err(Error::domain("phase trajectory", "need at least one sample per step"));
    }
    let mut out = Vec::with_capacity(schedule.steps.len() * samples_per_step + 1);
    out.push(PhaseSample {
        time: 0.0,
        molecular_population: 0.0,
        phase: 0.0,
    });
    let mut held = 0.0;
    let mut phase = 0.0;
    let mut start = 0.0;
    for step in &schedule.steps {
        let h = step.duration() / samples_per_step as f64;
        for k in 0..samples_per_step {
            let a = k as f64 * h;
            let piece = integrate(
                |t| {
                    let p = step.molecular_population(held, a + t);
                    omega_dd * p * p
                },
                h,
                PHASE_QUADRATURE_TOLERANCE,
            )?;
            phase += piece;
            out.push(PhaseSample {
                time: start + a + h,
                molecular_population: step.molecular_population(held, a + h),
                phase,
            });
        }
        held = step.molecular_population(held, step.duration());
        start += step.duration();
    }
    Ok(out)
}

/// `ω_dd·(3π/(4√(Ω_R²+δ²)) + τ_int)`: two full-transfer pi pulses plus the
/// interaction time.
pub fn total_phase_closed_form(omega_dd: f64, omega_r: f64, delta: f64, tau_int: f64) -> Result<f64> {
    let w = omega_r.hypot(delta);
    if w == 0.0 || !w.is_finite() {
        return Err(Error::domain("closed-form phase", "Omega_R and delta are both zero"));
    }
    Ok(omega_dd * (3.0 * PI / (4.0 * w) + tau_int))
}

/// `τ_int = (π/ω_dd)(1 - 3ω_dd/(4Ω_R))`, the wait that completes a π phase
/// when the two pulses are resonant.
pub fn interaction_time_for_pi(omega_dd: f64, omega_r: f64) -> Result<f64> {
    if !(omega_dd > 0.0) || !(omega_r > 0.0) {
        return Err(Error::domain(
            "interaction time",
            "omega_dd and Omega_R must be positive",
        ));
    }
    let pulse_share = 3.0 * omega_dd / (4.0 * omega_r);
    if pulse_share >= 1.0 {
        return Err(Error::domain(
            "interaction time",
            "the pulses alone already reach pi (3 omega_dd / 4 Omega_R >= 1)",
        ));
    }
    Ok(PI / omega_dd * (1.0 - pulse_share))
}

/// Wait that makes [`total_phase_closed_form`] exactly π for detuned pulses:
/// `π/ω_dd - 3π/(4√(Ω_R²+δ²))`.
pub fn interaction_time_for_pi_detuned(omega_dd: f64, omega_r: f64, delta: f64) -> Result<f64> {
    if !(omega_dd > 0.0) {
        return Err(Error::domain("interaction time", "omega_dd must be positive"));
    }
    let w = omega_r.hypot(delta);
    if w == 0.0 {
        return Err(Error::domain("interaction time", "Omega_R and delta are both zero"));
    }
    let tau = PI / omega_dd - 3.0 * PI / (4.0 * w);
    if tau <= 0.0 {
        return Err(Error::domain("interaction time", "the pulses alone already reach pi"));
    }
    Ok(tau)
}

// ---------------------------------------------------------------------------
// Two-qubit unitaries
// ---------------------------------------------------------------------------

/// 4×4 unitary on the enabled basis (|0'0'⟩, |0'1'⟩, |1'0'⟩, |1'1'⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitUnitary([[C64; 4]; 4]);

impl TwoQubitUnitary {
    pub fn new(matrix: [[C64; 4]; 4]) -> Result<Self> {
        let u = TwoQubitUnitary(matrix);
        let defect = u.unitarity_defect();
        if !(defect < UNITARITY_TOLERANCE) {
            return Err(Error::NotUnitary { defect });
        }
        Ok(u)
    }

    pub fn identity() -> Self {
        Self::diagonal([C64::new(1.0, 0.0); 4])
    }

    fn diagonal(d: [C64; 4]) -> Self {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for (i, v) in d.into_iter().enumerate() {
            m[i][i] = v;
        }
        TwoQubitUnitary(m)
    }

    pub fn matrix(&self) -> &[[C64; 4]; 4] {
        &self.0
    }

    pub fn dagger(&self) -> Self {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[j][i] = v.conj();
            }
        }
        TwoQubitUnitary(m)
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                *out = (0..4).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        TwoQubitUnitary(m)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        TwoQubitUnitary(self.0.map(|row| row.map(|v| v * factor)))
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// max |(U†U - I)_ij|.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.dagger().compose(self);
        let mut worst: f64 = 0.0;
        for (i, row) in p.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        if worst.is_nan() {
            f64::INFINITY
        } else {
            worst
        }
    }

    /// Largest entrywise distance to `other`.
    pub fn max_distance(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

/// diag(e^{iφ}, 1, 1, 1): only |0'0'⟩, where both sites hold a molecule,
/// picks up the phase.
pub fn build_phase_gate(phi: f64) -> TwoQubitUnitary {
    let one = C64::new(1.0, 0.0);
    TwoQubitUnitary::diagonal([C64::from_polar(1.0, phi), one, one, one])
}

/// Global-phase-insensitive overlap `|Tr(U†V)/4|²`.
pub fn gate_fidelity(u: &TwoQubitUnitary, v: &TwoQubitUnitary) -> Result<f64> {
    for m in [u, v] {
        let defect = m.unitarity_defect();
        if !(defect < UNITARITY_TOLERANCE) {
            return Err(Error::NotUnitary { defect });
        }
    }
    let overlap = u.dagger().compose(v).trace() / 4.0;
    Ok(overlap.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const OMEGA_DD: f64 = 1.34e5;

    fn resonant_pulse(omega: f64) -> TwoLevelParams {
        TwoLevelParams::resonant(omega).unwrap()
    }

    #[test]
    fn induced_dipole_examples() {
        let mu = 4.2;
        let b_rot = 6.5e9;
        let unit = DipoleParams {
            mu_permanent_debye: mu,
            rotational_constant_hz: b_rot,
            field_v_per_m: field_for_polarization(mu, b_rot, 1.0),
            separation_m: 500e-9,
        };
        let d = induced_dipole(&unit).unwrap();
        assert_relative_eq!(d.polarization, 1.0, max_relative = 1e-12);
        assert_relative_eq!(d.debye, 4.2, max_relative = 1e-12);
        assert!(!d.linear_response_valid);

        let half = DipoleParams {
            field_v_per_m: field_for_polarization(mu, b_rot, 0.5),
            ..unit
        };
        let d = induced_dipole(&half).unwrap();
        assert_relative_eq!(d.debye, 2.1, max_relative = 1e-12);

        let weak = DipoleParams {
            field_v_per_m: field_for_polarization(mu, b_rot, 0.1),
            ..unit
        };
        assert!(induced_dipole(&weak).unwrap().linear_response_valid);
        assert!(induced_dipole(&DipoleParams {
            field_v_per_m: 0.0,
            ..unit
        })
        .is_err());
    }

    #[test]
    fn dipole_rate_examples() {
        let base = dipole_dipole_rate(4.2, 500e-9).unwrap();
        assert_relative_eq!(base, 1.34e5, max_relative = 2e-3);
        assert_relative_eq!(
            dipole_dipole_rate(8.4, 500e-9).unwrap(),
            4.0 * base,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            dipole_dipole_rate(4.2, 1000e-9).unwrap(),
            base / 8.0,
            max_relative = 1e-14
        );
        assert!(dipole_dipole_rate(4.2, 0.0).is_err());
    }

    #[test]
    fn single_pi_pulse_phase() {
        let pulse = resonant_pulse(1e6);
        let schedule = GateSchedule::new(alloc::vec![Step::RamanDown {
            pulse,
            duration: pi_pulse_duration(&pulse).unwrap(),
        }])
        .unwrap();
        let phase = accumulated_phase_numeric(OMEGA_DD, &schedule).unwrap().total;
        let exact = OMEGA_DD * 3.0 * PI / (8.0 * 1e6);
        assert_relative_eq!(exact, 0.1579, max_relative = 1e-3);
        assert!((phase / exact - 1.0).abs() < 1e-8);
    }

    #[test]
    fn wait_phase_is_linear() {
        let tau = 5e-6;
        let pulse = resonant_pulse(1e6);
        let t_pi = pi_pulse_duration(&pulse).unwrap();
        let schedule = GateSchedule::new(alloc::vec![
            Step::RamanDown { pulse, duration: t_pi },
            Step::Wait { duration: tau },
        ])
        .unwrap();
        let acc = accumulated_phase_numeric(OMEGA_DD, &schedule).unwrap();
        assert_relative_eq!(acc.per_step[1], OMEGA_DD * tau, max_relative = 1e-12);
        assert_relative_eq!(acc.population_after[0], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn full_schedule_reaches_pi() {
        let tau = interaction_time_for_pi(OMEGA_DD, 1e6).unwrap();
        let schedule = GateSchedule::phase_gate(resonant_pulse(1e6), tau, Some(30e-6)).unwrap();
        let acc = accumulated_phase_numeric(OMEGA_DD, &schedule).unwrap();
        assert!((acc.total - PI).abs() < 1e-4);
        // enabler steps carry no molecules and no phase
        assert_eq!(acc.per_step[0], 0.0);
        assert_eq!(*acc.per_step.last().unwrap(), 0.0);
        assert!(acc.population_after[3] < 1e-20);
    }

    #[test]
    fn closed_form_examples() {
        assert_relative_eq!(
            total_phase_closed_form(OMEGA_DD, 1e6, 0.0, 0.0).unwrap(),
            3.0 * PI * OMEGA_DD / 4e6,
            max_relative = 1e-15
        );
        let tau = interaction_time_for_pi_detuned(OMEGA_DD, 1e6, OMEGA_DD).unwrap();
        let phi = total_phase_closed_form(OMEGA_DD, 1e6, OMEGA_DD, tau).unwrap();
        assert!((phi - PI).abs() < 1e-12);
        assert!(total_phase_closed_form(OMEGA_DD, 0.0, 0.0, 1e-6).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature_for_resonant_pulses() {
        let tau = 10e-6;
        let schedule = GateSchedule::phase_gate(resonant_pulse(1e6), tau, None).unwrap();
        let numeric = accumulated_phase_numeric(OMEGA_DD, &schedule).unwrap().total;
        let closed = total_phase_closed_form(OMEGA_DD, 1e6, 0.0, tau).unwrap();
        assert!((numeric / closed - 1.0).abs() < 1e-8);
    }

    #[test]
    fn interaction_time_examples() {
        let t = interaction_time_for_pi(OMEGA_DD, 1e6).unwrap();
        assert_relative_eq!(t, 21.1e-6, max_relative = 2e-3);
        assert_relative_eq!(
            interaction_time_for_pi(1e5, 1e15).unwrap(),
            PI / 1e5,
            max_relative = 1e-9
        );
        assert_relative_eq!(interaction_time_for_pi(1e5, 1e6).unwrap(), 29.1e-6, max_relative = 2e-3);
        assert!(interaction_time_for_pi(1e6, 7.5e5).is_err());
        assert!(interaction_time_for_pi(0.0, 1e6).is_err());
    }

    #[test]
    fn phase_gate_examples() {
        let z = build_phase_gate(PI);
        let expected = TwoQubitUnitary::new([
            [
                C64::new(-1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
            [
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
            [
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
            [
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        ])
        .unwrap();
        assert!(z.max_distance(&expected) < 1e-15);
        assert_eq!(build_phase_gate(0.0), TwoQubitUnitary::identity());
        assert!(build_phase_gate(2.0 * PI).max_distance(&TwoQubitUnitary::identity()) < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let z = build_phase_gate(PI);
        assert_relative_eq!(gate_fidelity(&z, &z).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            gate_fidelity(&z, &TwoQubitUnitary::identity()).unwrap(),
            0.25,
            max_relative = 1e-15
        );
        let rotated = z.scaled(C64::from_polar(1.0, 0.7));
        assert_relative_eq!(gate_fidelity(&rotated, &z).unwrap(), 1.0, max_relative = 1e-14);
        let not_unitary = z.scaled(C64::new(2.0, 0.0));
        assert!(matches!(gate_fidelity(&not_unitary, &z), Err(Error::NotUnitary { .. })));
        assert!(TwoQubitUnitary::new(*not_unitary.matrix()).is_err());
    }

    #[test]
    fn durations() {
        let tau = interaction_time_for_pi(OMEGA_DD, 1e6).unwrap();
        let schedule = GateSchedule::phase_gate(resonant_pulse(1e6), tau, Some(30e-6)).unwrap();
        let b = schedule_total_duration(&schedule);
        assert_relative_eq!(b.gate_time(), 2.0 * PI / 1e6 + tau, max_relative = 1e-14);
        assert_relative_eq!(b.enabler, 60e-6, max_relative = 1e-14);
        assert_eq!(schedule_total_duration(&GateSchedule::default()).total(), 0.0);
        let twice = schedule.concat(&GateSchedule::new(alloc::vec![Step::Wait { duration: 1e-6 }]).unwrap());
        // a second wait after the up-transfer is still well ordered
        assert!(twice.is_ok());
    }

    #[test]
    fn concatenation_adds_durations() {
        let a = GateSchedule::new(alloc::vec![
            Step::EnablerRotation { duration: 2e-6 },
            Step::Wait { duration: 3e-6 }
        ])
        .unwrap();
        let b = GateSchedule::new(alloc::vec![Step::Wait { duration: 4e-6 }]).unwrap();
        let ab = a.concat(&b).unwrap();
        assert_relative_eq!(
            ab.total_duration().total(),
            a.total_duration().total() + b.total_duration().total(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn malformed_schedules_are_rejected() {
        let pulse = resonant_pulse(1e6);
        assert!(GateSchedule::new(alloc::vec![Step::Wait { duration: 0.0 }]).is_err());
        assert!(GateSchedule::new(alloc::vec![Step::Wait { duration: f64::NAN }]).is_err());
        let backwards = GateSchedule::new(alloc::vec![
            Step::RamanUp { pulse, duration: 1e-6 },
            Step::Wait { duration: 1e-6 },
            Step::RamanDown { pulse, duration: 1e-6 },
        ]);
        assert!(matches!(backwards, Err(Error::InvalidSchedule(_))));
    }

    #[test]
    fn detuned_quadrature_scales_with_transfer_ceiling() {
        // with δ ≠ 0 every molecular population is capped at Ω²/(Ω²+δ²)
        let omega = 1e6;
        for delta in [0.0, 2e4, 1.34e5, 2e5] {
            let pulse = TwoLevelParams::new(omega, delta).unwrap();
            let tau = 15e-6;
            let schedule = GateSchedule::phase_gate(pulse, tau, None).unwrap();
            let numeric = accumulated_phase_numeric(OMEGA_DD, &schedule).unwrap().total;
            let closed = total_phase_closed_form(OMEGA_DD, omega, delta, tau).unwrap();
            let ceiling = pulse.transfer_ceiling();
            assert!((numeric / closed - ceiling * ceiling).abs() < 1e-8, "delta = {delta}");
        }
    }

    #[test]
    fn trajectory_ends_at_total_phase() {
        let tau = interaction_time_for_pi(OMEGA_DD, 1e6).unwrap();
        let schedule = GateSchedule::phase_gate(resonant_pulse(1e6), tau, None).unwrap();
        let traj = phase_trajectory(OMEGA_DD, &schedule, 50).unwrap();
        let total = accumulated_phase_numeric(OMEGA_DD, &schedule).unwrap().total;
        assert_eq!(traj.len(), 151);
        assert_relative_eq!(traj.last().unwrap().phase, total, max_relative = 1e-9);
        assert_relative_eq!(
            traj.last().unwrap().time,
            schedule.total_duration().total(),
            max_relative = 1e-12
        );
    }

    proptest! {
        #[test]
        fn phase_gates_compose(a in -10.0f64..10.0, b in -10.0f64..10.0) {
            let product = build_phase_gate(a).compose(&build_phase_gate(b));
            prop_assert!(product.max_distance(&build_phase_gate(a + b)) < 1e-12);
        }

        #[test]
        fn phase_gates_are_unitary(phi in -100.0f64..100.0) {
            prop_assert!(build_phase_gate(phi).unitarity_defect() < UNITARITY_TOLERANCE);
        }

        #[test]
        fn fidelity_is_symmetric(a in -4.0f64..4.0, b in -4.0f64..4.0, g in -4.0f64..4.0) {
            let u = build_phase_gate(a).scaled(C64::from_polar(1.0, g));
            let v = build_phase_gate(b);
            let f1 = gate_fidelity(&u, &v).unwrap();
            let f2 = gate_fidelity(&v, &u).unwrap();
            prop_assert!((f1 - f2).abs() < 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&f1));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn phase_never_decreases(omega_r in 3e5f64..3e6, delta_frac in 0.0f64..0.2, tau in 1e-6f64..3e-5) {
            let pulse = TwoLevelParams::new(omega_r, delta_frac * omega_r).unwrap();
            let schedule = GateSchedule::phase_gate(pulse, tau, None).unwrap();
            let traj = phase_trajectory(OMEGA_DD, &schedule, 20).unwrap();
            prop_assert!(traj.windows(2).all(|w| w[1].phase >= w[0].phase));
        }

        #[test]
        fn closed_form_disagreement_is_the_transfer_deficit(omega_r in 3e5f64..3e6, delta_frac in 0.0f64..0.2, tau in 1e-6f64..3e-5) {
            let delta = delta_frac * omega_r;
            let pulse = TwoLevelParams::new(omega_r, delta).unwrap();
            let schedule = GateSchedule::phase_gate(pulse, tau, None).unwrap();
            let numeric = accumulated_phase_numeric(OMEGA_DD, &schedule).unwrap().total;
            let closed = total_phase_closed_form(OMEGA_DD, omega_r, delta, tau).unwrap();
            let rel = (numeric / closed - 1.0).abs();
            let ratio = delta_frac * delta_frac;
            let deficit = 1.0 - 1.0 / ((1.0 + ratio) * (1.0 + ratio));
            prop_assert!((rel - deficit).abs() < 1e-6);
            prop_assert!(rel <= 2.0 * ratio + 1e-6);
        }
    }
}
