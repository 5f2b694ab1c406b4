//! Few-level coherent dynamics: the analytic two-level Rabi solution, a
//! fixed-step RK4 Schrödinger integrator, and the three-level Lambda system
//! (atom pair `a`, excited molecule `e`, ground molecule `g`) driven either
//! by a Raman pi pulse or by STIRAP.
//!
//! Hamiltonians are written in angular-frequency units (ħ = 1, rad/s). The
//! Lambda system uses the rotating frame
//!
//! ```text
//!     | 0       Ωp/2            0     |
//! H = | Ωp/2    -Δe - iγe/2     ΩS/2  |
//!     | 0       ΩS/2            -δ    |
//! ```
//!
//! with real, positive couplings.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // unused once std is linked
use num_traits::Float;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Dense N×N complex matrix, row major.
pub type Matrix<const N: usize> = [[C64; N]; N];

/// Largest `max‖H‖·h` the integrator accepts.
pub const MAX_NORM_STEP: f64 = 0.05;

/// `‖H‖·h` used when this module picks its own step. RK4 loses norm like
/// `(‖H‖h)⁶/72` per step, so 0.005 keeps 10⁶ steps well under 1e-9.
pub const DEFAULT_NORM_STEP: f64 = 0.005;

/// Allowed drift of Σ|c|² over a run of unitary evolution.
pub const NORM_DRIFT_LIMIT: f64 = 1e-7;

/// Tolerance on Σ|c|² = 1 for a freshly built state.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector<const N: usize> {
    pub amplitudes: [C64; N],
    pub labels: [&'static str; N],
}

impl<const N: usize> StateVector<N> {
    pub fn new(amplitudes: [C64; N], labels: [&'static str; N]) -> Result<Self> {
        let state = StateVector { amplitudes, labels };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// All population in basis state `index`.
    pub fn basis(index: usize, labels: [&'static str; N]) -> Self {
        let mut amplitudes = [C64::new(0.0, 0.0); N];
        amplitudes[index] = C64::new(1.0, 0.0);
        StateVector { amplitudes, labels }
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn populations(&self) -> [f64; N] {
        self.amplitudes.map(|c| c.norm_sqr())
    }
}

fn norm_sqr<const N: usize>(v: &[C64; N]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Uniform time grid `start + k·step`, `k = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub step: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(end > start) || !start.is_finite() || !end.is_finite() {
            return Err(Error::domain("time grid", "needs end > start and at least one step"));
        }
        Ok(TimeGrid {
            start,
            step: (end - start) / steps as f64,
            steps,
        })
    }

    /// Finest grid over `[start, end]` whose step does not exceed `max_step`.
    pub fn with_max_step(start: f64, end: f64, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0) {
            return Err(Error::domain("time grid", "step must be positive"));
        }
        let steps = ((end - start) / max_step).ceil().max(1.0) as usize;
        Self::new(start, end, steps)
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.time(self.steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[C64; N]>,
    pub labels: [&'static str; N],
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> StateVector<N> {
        StateVector {
            amplitudes: *self.states.last().expect("trajectory holds the initial state"),
            labels: self.labels,
        }
    }

    pub fn population(&self, index: usize) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(move |s| s[index].norm_sqr())
    }
}

/// Summary of a propagation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagation<const N: usize> {
    pub final_state: [C64; N],
    /// Largest |Σ|c|² - Σ|c₀|²| seen on the grid.
    pub max_norm_drift: f64,
    /// Whether every sampled H(t) was Hermitian.
    pub hermitian: bool,
}

fn matrix_norm<const N: usize>(h: &Matrix<N>) -> f64 {
    h.iter()
        .map(|row| row.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn is_hermitian<const N: usize>(h: &Matrix<N>, scale: f64) -> bool {
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    (0..N).all(|i| (i..N).all(|j| (h[i][j] - h[j][i].conj()).norm() <= tol))
}

/// `-i·H·ψ`
fn derivative<const N: usize>(h: &Matrix<N>, psi: &[C64; N]) -> [C64; N] {
    let mut out = [C64::new(0.0, 0.0); N];
    for (row, o) in h.iter().zip(out.iter_mut()) {
        let mut acc = C64::new(0.0, 0.0);
        for (hij, pj) in row.iter().zip(psi.iter()) {
            acc += hij * pj;
        }
        *o = C64::new(acc.im, -acc.re);
    }
    out
}

fn axpy<const N: usize>(base: &[C64; N], scale: f64, k: &[C64; N]) -> [C64; N] {
    let mut out = *base;
    for (o, ki) in out.iter_mut().zip(k.iter()) {
        *o += ki * scale;
    }
    out
}

/// Integrates `i·dψ/dt = H(t)·ψ` with classical fixed-step RK4 on `grid`,
/// calling `observe(k, t_k, ψ_k)` for every grid point including the first.
///
/// Fails if `‖H(t)‖·h` exceeds [`MAX_NORM_STEP`] at any evaluation, or, when
/// every sampled H was Hermitian, if the norm drifts by more than
/// [`NORM_DRIFT_LIMIT`].
pub fn propagate<const N: usize, H, O>(
    hamiltonian: H,
    psi0: &StateVector<N>,
    grid: &TimeGrid,
    mut observe: O,
) -> Result<Propagation<N>>
where
    H: Fn(f64) -> Matrix<N>,
    O: FnMut(usize, f64, &[C64; N]),
{
    let h = grid.step;
    let mut hermitian = true;
    let mut evaluate = |t: f64| -> Result<Matrix<N>> {
        let m = hamiltonian(t);
        let norm = matrix_norm(&m);
        if norm * h > MAX_NORM_STEP {
            return Err(Error::StepTooLarge {
                product: norm * h,
                limit: MAX_NORM_STEP,
                time: t,
            });
        }
        hermitian &= is_hermitian(&m, norm);
        Ok(m)
    };

    let initial_norm = psi0.norm_sqr();
    let mut psi = psi0.amplitudes;
    let mut max_drift: f64 = 0.0;
    observe(0, grid.start, &psi);
    let mut h_start = evaluate(grid.start)?;
    for k in 0..grid.steps {
        let t = grid.time(k);
        let h_mid = evaluate(t + 0.5 * h)?;
        let h_end = evaluate(grid.time(k + 1))?;
        let k1 = derivative(&h_start, &psi);
        let k2 = derivative(&h_mid, &axpy(&psi, 0.5 * h, &k1));
        let k3 = derivative(&h_mid, &axpy(&psi, 0.5 * h, &k2));
        let k4 = derivative(&h_end, &axpy(&psi, h, &k3));
        for i in 0..N {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        max_drift = max_drift.max((norm_sqr(&psi) - initial_norm).abs());
        observe(k + 1, grid.time(k + 1), &psi);
        h_start = h_end;
    }
    if hermitian && max_drift > NORM_DRIFT_LIMIT {
        return Err(Error::NormDrift {
            drift: max_drift,
            limit: NORM_DRIFT_LIMIT,
        });
    }
    Ok(Propagation {
        final_state: psi,
        max_norm_drift: max_drift,
        hermitian,
    })
}

/// [`propagate`], keeping the whole trajectory.
pub fn integrate_schrodinger<const N: usize, H>(
    hamiltonian: H,
    psi0: &StateVector<N>,
    grid: &TimeGrid,
) -> Result<Trajectory<N>>
where
    H: Fn(f64) -> Matrix<N>,
{
    let mut times = Vec::with_capacity(grid.steps + 1);
    let mut states = Vec::with_capacity(grid.steps + 1);
    propagate(hamiltonian, psi0, grid, |_, t, psi| {
        times.push(t);
        states.push(*psi);
    })?;
    Ok(Trajectory {
        times,
        states,
        labels: psi0.labels,
    })
}

// ---------------------------------------------------------------------------
// Two-level Rabi problem
// ---------------------------------------------------------------------------

pub const TWO_LEVEL_LABELS: [&str; 2] = ["atoms", "molecule"];

/// Effective two-level drive between the atom pair and the molecule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelParams {
    /// Effective Rabi frequency Ω_R, rad/s.
    pub omega_r: f64,
    /// Two-photon detuning δ, rad/s.
    pub delta: f64,
}

impl TwoLevelParams {
    pub fn new(omega_r: f64, delta: f64) -> Result<Self> {
        if !(omega_r >= 0.0 && omega_r.is_finite()) || !delta.is_finite() {
            return Err(Error::domain("Rabi frequency", "must be finite and non-negative"));
        }
        Ok(TwoLevelParams { omega_r, delta })
    }

    pub fn resonant(omega_r: f64) -> Result<Self> {
        Self::new(omega_r, 0.0)
    }

    /// Generalized Rabi frequency √(Ω_R² + δ²).
    pub fn generalized_rabi(&self) -> f64 {
        self.omega_r.hypot(self.delta)
    }

    /// Largest population the drive can transfer, Ω_R²/(Ω_R² + δ²).
    pub fn transfer_ceiling(&self) -> f64 {
        let w2 = self.omega_r * self.omega_r + self.delta * self.delta;
        if w2 == 0.0 {
            0.0
        } else {
            self.omega_r * self.omega_r / w2
        }
    }

    pub fn hamiltonian(&self) -> Matrix<2> {
        let c = C64::new(0.5 * self.omega_r, 0.0);
        [[C64::new(0.0, 0.0), c], [c, C64::new(-self.delta, 0.0)]]
    }
}

/// Molecular population after driving the atom pair for time `t`:
/// `Ω_R²/(Ω_R²+δ²) · sin²(√(Ω_R²+δ²)·t/2)`.
pub fn two_level_population(p: &TwoLevelParams, t: f64) -> f64 {
    let w = p.generalized_rabi();
    if w == 0.0 {
        return 0.0;
    }
    let s = (0.5 * w * t).sin();
    p.transfer_ceiling() * s * s
}

/// Duration π/√(Ω_R²+δ²) of a pi pulse.
pub fn pi_pulse_duration(p: &TwoLevelParams) -> Result<f64> {
    let w = p.generalized_rabi();
    if w == 0.0 {
        return Err(Error::domain("pi pulse", "Rabi frequency and detuning are both zero"));
    }
    Ok(core::f64::consts::PI / w)
}

// ---------------------------------------------------------------------------
// Lambda system
// ---------------------------------------------------------------------------

pub const LAMBDA_LABELS: [&str; 3] = ["atoms", "excited", "molecule"];

/// Pump/Stokes configuration of the Lambda system. All values rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaParams {
    pub omega_p: f64,
    pub omega_s: f64,
    /// Common one-photon detuning Δ_e from the excited molecular level.
    pub delta_e: f64,
    /// Two-photon detuning δ.
    pub delta: f64,
    /// Excited-state loss rate γ_e.
    pub gamma_e: f64,
    /// Shift the bare two-photon detuning so that, after the differential
    /// light shift, the effective detuning is `delta`.
    pub stark_compensated: bool,
}

impl LambdaParams {
    pub fn new(omega_p: f64, omega_s: f64, delta_e: f64, delta: f64) -> Result<Self> {
        let p = LambdaParams {
            omega_p,
            omega_s,
            delta_e,
            delta,
            gamma_e: 0.0,
            stark_compensated: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_loss(mut self, gamma_e: f64) -> Result<Self> {
        self.gamma_e = gamma_e;
        self.validate()?;
        Ok(self)
    }

    pub fn with_stark_compensation(mut self, on: bool) -> Self {
        self.stark_compensated = on;
        self
    }

    /// Scales the pump coupling by a Feshbach-optimized photoassociation
    /// enhancement factor (≥ 1).
    pub fn with_fopa_enhancement(mut self, factor: f64) -> Result<Self> {
        if !(factor >= 1.0 && factor.is_finite()) {
            return Err(Error::domain("FOPA enhancement", "must be a finite factor >= 1"));
        }
        self.omega_p *= factor;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let all_finite = [self.omega_p, self.omega_s, self.delta_e, self.delta, self.gamma_e]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::domain("Lambda parameters", "must be finite"));
        }
        if self.omega_p < 0.0 || self.omega_s < 0.0 {
            return Err(Error::domain(
                "Lambda parameters",
                "Rabi frequencies must be non-negative",
            ));
        }
        if self.gamma_e < 0.0 {
            return Err(Error::domain("Lambda parameters", "gamma_e must be non-negative"));
        }
        Ok(())
    }

    /// Bare two-photon detuning that puts the dressed detuning at `delta`.
    fn bare_two_photon_detuning(&self, omega_p: f64, omega_s: f64) -> Result<f64> {
        if !self.stark_compensated || omega_p == omega_s {
            return Ok(self.delta);
        }
        if self.delta_e == 0.0 {
            return Err(Error::domain(
                "light-shift compensation",
                "needs a non-zero one-photon detuning",
            ));
        }
        Ok(self.delta + (omega_s * omega_s - omega_p * omega_p) / (4.0 * self.delta_e))
    }

    /// Effective two-level drive after adiabatic elimination of `e`.
    pub fn effective_two_level(&self) -> Result<TwoLevelParams> {
        let coupling = effective_rabi(self)?;
        TwoLevelParams::new(coupling.omega_r.abs(), self.delta)
    }
}

/// Result of adiabatically eliminating the excited level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoupling {
    /// Ω_R = Ω_p·Ω_S/(2Δ_e), rad/s.
    pub omega_r: f64,
    /// Ω_p²/(4Δ_e), rad/s.
    pub pump_light_shift: f64,
    /// Ω_S²/(4Δ_e), rad/s.
    pub stokes_light_shift: f64,
}

pub fn effective_rabi(p: &LambdaParams) -> Result<EffectiveCoupling> {
    if p.delta_e == 0.0 {
        return Err(Error::domain(
            "effective Rabi frequency",
            "one-photon detuning is zero; adiabatic elimination is invalid",
        ));
    }
    Ok(EffectiveCoupling {
        omega_r: p.omega_p * p.omega_s / (2.0 * p.delta_e),
        pump_light_shift: p.omega_p * p.omega_p / (4.0 * p.delta_e),
        stokes_light_shift: p.omega_s * p.omega_s / (4.0 * p.delta_e),
    })
}

fn lambda_hamiltonian(pump: f64, stokes: f64, delta_e: f64, gamma_e: f64, delta: f64) -> Matrix<3> {
    let zero = C64::new(0.0, 0.0);
    let p = C64::new(0.5 * pump, 0.0);
    let s = C64::new(0.5 * stokes, 0.0);
    [
        [zero, p, zero],
        [p, C64::new(-delta_e, -0.5 * gamma_e), s],
        [zero, s, C64::new(-delta, 0.0)],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeShape {
    Rectangular,
    Gaussian,
}

/// Time profile of one laser's Rabi frequency. Zero outside
/// `[start, start + duration]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseEnvelope {
    pub shape: EnvelopeShape,
    /// Peak Rabi frequency, rad/s.
    pub peak: f64,
    pub start: f64,
    pub duration: f64,
    /// Gaussian centre, s. Unused for rectangular pulses.
    pub center: f64,
    /// Gaussian rms width, s. Unused for rectangular pulses.
    pub rms_width: f64,
}

impl PulseEnvelope {
    pub fn rectangular(peak: f64, start: f64, duration: f64) -> Result<Self> {
        if !(duration > 0.0) || !(peak >= 0.0) {
            return Err(Error::domain("pulse envelope", "needs duration > 0 and peak >= 0"));
        }
        Ok(PulseEnvelope {
            shape: EnvelopeShape::Rectangular,
            peak,
            start,
            duration,
            center: start + 0.5 * duration,
            rms_width: 0.0,
        })
    }

    /// Gaussian truncated at `center ± truncation·rms_width`.
    pub fn gaussian(peak: f64, center: f64, rms_width: f64, truncation: f64) -> Result<Self> {
        if !(rms_width > 0.0) || !(truncation > 0.0) || !(peak >= 0.0) {
            return Err(Error::domain("pulse envelope", "needs rms width > 0 and peak >= 0"));
        }
        Ok(PulseEnvelope {
            shape: EnvelopeShape::Gaussian,
            peak,
            start: center - truncation * rms_width,
            duration: 2.0 * truncation * rms_width,
            center,
            rms_width,
        })
    }

    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        if t < self.start || t > self.end() {
            return 0.0;
        }
        match self.shape {
            EnvelopeShape::Rectangular => self.peak,
            EnvelopeShape::Gaussian => {
                let z = (t - self.center) / self.rms_width;
                self.peak * (-0.5 * z * z).exp()
            }
        }
    }
}

/// Final populations of the Lambda system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPopulations {
    pub atoms: f64,
    pub excited: f64,
    pub molecule: f64,
}

impl LambdaPopulations {
    fn from_state(psi: &[C64; 3]) -> Self {
        LambdaPopulations {
            atoms: psi[0].norm_sqr(),
            excited: psi[1].norm_sqr(),
            molecule: psi[2].norm_sqr(),
        }
    }

    pub fn total(&self) -> f64 {
        self.atoms + self.excited + self.molecule
    }
}

/// Three-level Raman pulse compared against its effective two-level
/// reduction on the integration grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanComparison {
    pub final_populations: LambdaPopulations,
    /// Effective-model molecular population at the end of the pulse.
    pub two_level_final: f64,
    /// max over the grid of |P_g(3-level) - P_g(2-level)|.
    pub max_deviation: f64,
    pub max_norm_drift: f64,
    pub steps: usize,
}

impl RamanComparison {
    pub fn final_deviation(&self) -> f64 {
        (self.final_populations.molecule - self.two_level_final).abs()
    }
}

fn raman_norm_bound(p: &LambdaParams, delta_bare: f64) -> f64 {
    let row_e = 0.5 * p.omega_p + p.delta_e.hypot(0.5 * p.gamma_e) + 0.5 * p.omega_s;
    row_e.max(0.5 * p.omega_s + delta_bare.abs()).max(0.5 * p.omega_p)
}

/// One recorded point of a Raman pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanSample {
    pub time: f64,
    pub populations: LambdaPopulations,
    /// Effective two-level molecular population; NaN when Δ_e = 0.
    pub two_level: f64,
}

/// True for about `samples + 1` evenly spread grid indices, always
/// including both ends.
fn is_recorded(k: usize, steps: usize, samples: usize) -> bool {
    k == 0 || k == steps || (k * samples) / steps != ((k - 1) * samples) / steps
}

fn raman_run(
    p: &LambdaParams,
    duration: f64,
    norm_step: f64,
    samples: usize,
) -> Result<(RamanComparison, Vec<RamanSample>)> {
    if !(duration > 0.0) {
        return Err(Error::domain("Raman pulse", "duration must be positive"));
    }
    let delta_bare = p.bare_two_photon_detuning(p.omega_p, p.omega_s)?;
    let h = lambda_hamiltonian(p.omega_p, p.omega_s, p.delta_e, p.gamma_e, delta_bare);
    let bound = raman_norm_bound(p, delta_bare);
    let grid = if bound == 0.0 {
        TimeGrid::new(0.0, duration, 1)?
    } else {
        TimeGrid::with_max_step(0.0, duration, norm_step / bound)?
    };
    // the reduction is only defined off one-photon resonance
    let effective = if p.delta_e != 0.0 {
        Some(p.effective_two_level()?)
    } else {
        None
    };
    let mut max_deviation: f64 = 0.0;
    let mut trace = Vec::new();
    let psi0 = StateVector::basis(0, LAMBDA_LABELS);
    let run = propagate(
        |_| h,
        &psi0,
        &grid,
        |k, t, psi| {
            let two_level = effective.map_or(f64::NAN, |e| two_level_population(&e, t));
            if effective.is_some() {
                max_deviation = max_deviation.max((psi[2].norm_sqr() - two_level).abs());
            }
            if samples > 0 && is_recorded(k, grid.steps, samples) {
                trace.push(RamanSample {
                    time: t,
                    populations: LambdaPopulations::from_state(psi),
                    two_level,
                });
            }
        },
    )?;
    let comparison = RamanComparison {
        final_populations: LambdaPopulations::from_state(&run.final_state),
        two_level_final: effective
            .map(|e| two_level_population(&e, duration))
            .unwrap_or(f64::NAN),
        max_deviation: if effective.is_some() { max_deviation } else { f64::NAN },
        max_norm_drift: run.max_norm_drift,
        steps: grid.steps,
    };
    Ok((comparison, trace))
}

/// Raman pulse with rectangular envelopes of length `duration`, integrated
/// with `norm_step` = ‖H‖·h.
pub fn compare_raman_with_step(p: &LambdaParams, duration: f64, norm_step: f64) -> Result<RamanComparison> {
    Ok(raman_run(p, duration, norm_step, 0)?.0)
}

/// [`compare_raman_to_two_level`] plus about `samples + 1` evenly spaced
/// points of the population dynamics.
pub fn raman_trajectory(
    p: &LambdaParams,
    duration: f64,
    samples: usize,
) -> Result<(RamanComparison, Vec<RamanSample>)> {
    if samples == 0 {
        return Err(Error::domain("Raman trajectory", "need at least one sample"));
    }
    raman_run(p, duration, DEFAULT_NORM_STEP, samples)
}

pub fn compare_raman_to_two_level(p: &LambdaParams, duration: f64) -> Result<RamanComparison> {
    compare_raman_with_step(p, duration, DEFAULT_NORM_STEP)
}

/// Populations (atoms, excited, molecule) after a rectangular Raman pulse.
pub fn simulate_raman_pi_pulse(p: &LambdaParams, duration: f64) -> Result<LambdaPopulations> {
    Ok(compare_raman_to_two_level(p, duration)?.final_populations)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirapOutcome {
    /// Final molecular population.
    pub efficiency: f64,
    pub final_populations: LambdaPopulations,
    pub max_norm_drift: f64,
    pub steps: usize,
}

/// Pump and Stokes Gaussians of equal peak and width, truncated at ±6σ,
/// separated by `delay`. With `counterintuitive` the Stokes pulse comes
/// first.
pub fn stirap_pulse_pair(
    peak: f64,
    rms_width: f64,
    delay: f64,
    counterintuitive: bool,
) -> Result<(PulseEnvelope, PulseEnvelope)> {
    let (pump_center, stokes_center) = if counterintuitive {
        (0.5 * delay, -0.5 * delay)
    } else {
        (-0.5 * delay, 0.5 * delay)
    };
    Ok((
        PulseEnvelope::gaussian(peak, pump_center, rms_width, 6.0)?,
        PulseEnvelope::gaussian(peak, stokes_center, rms_width, 6.0)?,
    ))
}

/// One recorded point of a STIRAP sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirapSample {
    pub time: f64,
    pub pump: f64,
    pub stokes: f64,
    pub populations: LambdaPopulations,
}

fn stirap_run(
    pump: &PulseEnvelope,
    stokes: &PulseEnvelope,
    p: &LambdaParams,
    norm_step: f64,
    samples: usize,
) -> Result<(StirapOutcome, Vec<StirapSample>)> {
    let start = pump.start.min(stokes.start);
    let end = pump.end().max(stokes.end());
    let bound = 0.5 * pump.peak + p.delta_e.hypot(0.5 * p.gamma_e) + 0.5 * stokes.peak + p.delta.abs();
    let grid = if bound == 0.0 {
        TimeGrid::new(start, end, 1)?
    } else {
        TimeGrid::with_max_step(start, end, norm_step / bound)?
    };
    // light shifts follow the envelopes; only the requested detuning is used
    let hamiltonian =
        |t: f64| lambda_hamiltonian(pump.amplitude(t), stokes.amplitude(t), p.delta_e, p.gamma_e, p.delta);
    let mut trace = Vec::new();
    let run = propagate(
        hamiltonian,
        &StateVector::basis(0, LAMBDA_LABELS),
        &grid,
        |k, t, psi| {
            if samples > 0 && is_recorded(k, grid.steps, samples) {
                trace.push(StirapSample {
                    time: t,
                    pump: pump.amplitude(t),
                    stokes: stokes.amplitude(t),
                    populations: LambdaPopulations::from_state(psi),
                });
            }
        },
    )?;
    let populations = LambdaPopulations::from_state(&run.final_state);
    let outcome = StirapOutcome {
        efficiency: populations.molecule,
        final_populations: populations,
        max_norm_drift: run.max_norm_drift,
        steps: grid.steps,
    };
    Ok((outcome, trace))
}

pub fn simulate_stirap_with_step(
    pump: &PulseEnvelope,
    stokes: &PulseEnvelope,
    p: &LambdaParams,
    norm_step: f64,
) -> Result<StirapOutcome> {
    Ok(stirap_run(pump, stokes, p, norm_step, 0)?.0)
}

/// [`simulate_stirap`] plus about `samples + 1` evenly spaced points.
pub fn stirap_trajectory(
    pump: &PulseEnvelope,
    stokes: &PulseEnvelope,
    p: &LambdaParams,
    samples: usize,
) -> Result<(StirapOutcome, Vec<StirapSample>)> {
    if samples == 0 {
        return Err(Error::domain("STIRAP trajectory", "need at least one sample"));
    }
    stirap_run(pump, stokes, p, DEFAULT_NORM_STEP, samples)
}

/// STIRAP transfer from the atom pair to the molecule. The Rabi
/// frequencies come from the envelopes; `p` supplies Δ_e, δ and γ_e.
pub fn simulate_stirap(pump: &PulseEnvelope, stokes: &PulseEnvelope, p: &LambdaParams) -> Result<StirapOutcome> {
    simulate_stirap_with_step(pump, stokes, p, DEFAULT_NORM_STEP)
}
