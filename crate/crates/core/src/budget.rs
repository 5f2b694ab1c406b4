//! Decoherence and feasibility budget.

use core::f64::consts::TAU;
use core::ops::Range;

#[allow(unused_imports)] // unused once std is linked
use num_traits::Float;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::gate::GateSchedule;
use crate::numeric::snapped_floor;
use crate::{Error, Result};

/// Minimum number of trap periods a rotation must last.
pub const DEFAULT_ADIABATICITY_THRESHOLD: f64 = 3.0;

/// Smallest sample count accepted by [`ramsey_contrast_mc`].
pub const MIN_MC_SAMPLES: u64 = 1000;

/// Samples per block in the Monte Carlo reduction. Blocks are summed in
/// index order, so any partition of the blocks over workers gives the same
/// bits.
pub const MC_BLOCK: u64 = 4096;

/// How an rms frequency spread is turned into a dephasing time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DephasingDefinition {
    /// `1/(2π Δν)`: the 1/√e time of the Ramsey contrast.
    #[default]
    AngularLinewidth,
    /// `1/Δν`.
    Linewidth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// rms magnetic field fluctuation, G.
    pub sigma_b: f64,
    /// Inelastic collision rate, 1/s.
    pub gamma_inelastic: f64,
    /// Trap oscillation frequency, Hz.
    pub trap_frequency: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(sigma_b: f64, gamma_inelastic: f64, trap_frequency: f64, seed: u64) -> Result<Self> {
        if !(sigma_b >= 0.0 && sigma_b.is_finite()) {
            return Err(Error::domain("noise model", "sigma_B must be finite and non-negative"));
        }
        if !(gamma_inelastic >= 0.0 && gamma_inelastic.is_finite()) {
            return Err(Error::domain(
                "noise model",
                "inelastic rate must be finite and non-negative",
            ));
        }
        if !(trap_frequency > 0.0 && trap_frequency.is_finite()) {
            return Err(Error::domain("noise model", "trap frequency must be positive"));
        }
        Ok(NoiseModel {
            sigma_b,
            gamma_inelastic,
            trap_frequency,
            seed,
        })
    }
}

/// Knobs of the budget that are conventions rather than physics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetOptions {
    pub dephasing: DephasingDefinition,
    pub adiabaticity_threshold: f64,
    pub selectivity_factor: f64,
}

impl Default for BudgetOptions {
    fn default() -> Self {
        BudgetOptions {
            dephasing: DephasingDefinition::AngularLinewidth,
            adiabaticity_threshold: DEFAULT_ADIABATICITY_THRESHOLD,
            selectivity_factor: 1.0,
        }
    }
}

/// `1/(2π s σ_B)` (or `1/(s σ_B)`), seconds. Infinite when σ_B = 0.
pub fn dephasing_time_with(
    sensitivity_hz_per_gauss: f64,
    sigma_b: f64,
    definition: DephasingDefinition,
) -> Result<f64> {
    if !(sensitivity_hz_per_gauss > 0.0) {
        return Err(Error::domain("dephasing time", "field sensitivity must be positive"));
    }
    if !(sigma_b >= 0.0) {
        return Err(Error::domain("dephasing time", "sigma_B must be non-negative"));
    }
    if sigma_b == 0.0 {
        return Ok(f64::INFINITY);
    }
    let linewidth = sensitivity_hz_per_gauss * sigma_b;
    Ok(match definition {
        DephasingDefinition::AngularLinewidth => 1.0 / (TAU * linewidth),
        DephasingDefinition::Linewidth => 1.0 / linewidth,
    })
}

pub fn dephasing_time(sensitivity_hz_per_gauss: f64, sigma_b: f64) -> Result<f64> {
    dephasing_time_with(sensitivity_hz_per_gauss, sigma_b, DephasingDefinition::AngularLinewidth)
}

/// Partial sums of `cos` and `sin` of the Ramsey phase over one range of
/// sample indices.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasorSum {
    pub re: f64,
    pub im: f64,
}

impl core::ops::Add for PhasorSum {
    type Output = PhasorSum;

    fn add(self, other: PhasorSum) -> PhasorSum {
        PhasorSum {
            re: self.re + other.re,
            im: self.im + other.im,
        }
    }
}

/// Sum of `exp(i 2π s δB t)` over samples `indices`. Sample `k` draws its
/// field offset from ChaCha8 stream `k` of `seed`, independent of which
/// worker evaluates it.
pub fn ramsey_phasor_sum(
    sensitivity_hz_per_gauss: f64,
    sigma_b: f64,
    t: f64,
    seed: u64,
    indices: Range<u64>,
) -> PhasorSum {
    let scale = TAU * sensitivity_hz_per_gauss * sigma_b * t;
    let mut sum = PhasorSum::default();
    for k in indices {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k);
        let z: f64 = StandardNormal.sample(&mut rng);
        let (s, c) = (scale * z).sin_cos();
        sum.re += c;
        sum.im += s;
    }
    sum
}

/// Index range of block `b` for `n` samples.
pub fn mc_block(b: u64, n: u64) -> Range<u64> {
    let start = b * MC_BLOCK;
    start..(start + MC_BLOCK).min(n)
}

pub fn mc_block_count(n: u64) -> u64 {
    n.div_ceil(MC_BLOCK)
}

/// `|Σ|/n` from block sums given in block order.
pub fn contrast_from_blocks<I: IntoIterator<Item = PhasorSum>>(blocks: I, n: u64) -> f64 {
    let total = blocks.into_iter().fold(PhasorSum::default(), |a, b| a + b);
    total.re.hypot(total.im) / n as f64
}

fn check_mc_inputs(sensitivity: f64, sigma_b: f64, t: f64, n_samples: u64) -> Result<()> {
    if n_samples < MIN_MC_SAMPLES {
        return Err(Error::domain("Ramsey Monte Carlo", "need at least 1000 samples"));
    }
    if !(sensitivity.is_finite() && sigma_b >= 0.0 && sigma_b.is_finite() && t.is_finite()) {
        return Err(Error::domain(
            "Ramsey Monte Carlo",
            "inputs must be finite, sigma_B non-negative",
        ));
    }
    Ok(())
}

/// Ramsey contrast `|⟨exp(i 2π s δB t)⟩|` for quasi-static Gaussian field
/// offsets `δB ~ N(0, σ_B²)`.
pub fn ramsey_contrast_mc(
    sensitivity_hz_per_gauss: f64,
    sigma_b: f64,
    t: f64,
    n_samples: u64,
    seed: u64,
) -> Result<f64> {
    check_mc_inputs(sensitivity_hz_per_gauss, sigma_b, t, n_samples)?;
    let blocks = (0..mc_block_count(n_samples))
        .map(|b| ramsey_phasor_sum(sensitivity_hz_per_gauss, sigma_b, t, seed, mc_block(b, n_samples)));
    Ok(contrast_from_blocks(blocks, n_samples))
}

/// Validates the inputs of a caller-driven (e.g. parallel) Monte Carlo run.
pub fn validate_mc_inputs(sensitivity: f64, sigma_b: f64, t: f64, n_samples: u64) -> Result<()> {
    check_mc_inputs(sensitivity, sigma_b, t, n_samples)
}

/// Expected contrast `exp(-t²/(2T_φ²))` of the Gaussian model.
pub fn ramsey_contrast_analytic(t: f64, dephasing_time: f64) -> f64 {
    let r = t / dephasing_time;
    (-0.5 * r * r).exp()
}

/// `1 - exp(-γt)`.
pub fn inelastic_loss_probability(gamma: f64, t: f64) -> Result<f64> {
    if !(gamma >= 0.0) || !(t >= 0.0) {
        return Err(Error::domain("inelastic loss", "rate and time must be non-negative"));
    }
    Ok(-(-gamma * t).exp_m1())
}

/// `floor(T_φ/T_gate)`, or `None` when T_φ is unbounded.
pub fn operations_budget(dephasing_time: f64, gate_time: f64) -> Result<Option<u64>> {
    if !(dephasing_time > 0.0) || !(gate_time > 0.0 && gate_time.is_finite()) {
        return Err(Error::domain("operations budget", "times must be positive"));
    }
    if dephasing_time.is_infinite() {
        return Ok(None);
    }
    Ok(Some(snapped_floor(dephasing_time / gate_time) as u64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adiabaticity {
    pub pass: bool,
    /// Pulse duration in trap periods.
    pub margin: f64,
}

pub fn adiabaticity_check(pulse_duration: f64, trap_frequency: f64) -> Result<Adiabaticity> {
    adiabaticity_check_with(pulse_duration, trap_frequency, DEFAULT_ADIABATICITY_THRESHOLD)
}

pub fn adiabaticity_check_with(pulse_duration: f64, trap_frequency: f64, threshold: f64) -> Result<Adiabaticity> {
    if !(pulse_duration > 0.0) || !(trap_frequency > 0.0) {
        return Err(Error::domain(
            "adiabaticity",
            "duration and trap frequency must be positive",
        ));
    }
    let margin = pulse_duration * trap_frequency;
    Ok(Adiabaticity {
        pass: margin >= threshold * (1.0 - 1e-12),
        margin,
    })
}

/// Shortest pulse that resolves a `splitting` (Hz): `factor/splitting`.
pub fn selective_readout_min_duration(splitting: f64, selectivity_factor: f64) -> Result<f64> {
    if !(splitting > 0.0) {
        return Err(Error::domain("readout duration", "splitting must be positive"));
    }
    if !(selectivity_factor > 0.0) {
        return Err(Error::domain("readout duration", "selectivity factor must be positive"));
    }
    Ok(selectivity_factor / splitting)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetReport {
    /// s; infinite without field noise.
    pub dephasing_time: f64,
    pub gate_time: f64,
    /// `None` when the dephasing time is unbounded.
    pub operations_count: Option<u64>,
    /// Inelastic loss during one gate.
    pub loss_probability: f64,
    /// True when every enabler rotation lasts long enough. Vacuously true
    /// for schedules without enabler steps.
    pub adiabaticity_ok: bool,
    /// Smallest enabler-rotation margin, in trap periods.
    pub adiabaticity_margin: Option<f64>,
    pub readout_min_duration: f64,
}

pub fn assemble_budget(
    noise: &NoiseModel,
    sensitivity_hz_per_gauss: f64,
    schedule: &GateSchedule,
    readout_splitting: f64,
    options: &BudgetOptions,
) -> Result<BudgetReport> {
    let dephasing = dephasing_time_with(sensitivity_hz_per_gauss, noise.sigma_b, options.dephasing)?;
    let gate_time = schedule.total_duration().gate_time();
    let operations = operations_budget(dephasing, gate_time)?;
    let loss = inelastic_loss_probability(noise.gamma_inelastic, gate_time)?;

    let mut adiabaticity_ok = true;
    let mut margin: Option<f64> = None;
    for step in schedule.steps() {
        if step.is_enabler() {
            let check = adiabaticity_check_with(step.duration(), noise.trap_frequency, options.adiabaticity_threshold)?;
            adiabaticity_ok &= check.pass;
            margin = Some(margin.map_or(check.margin, |m| m.min(check.margin)));
        }
    }

    Ok(BudgetReport {
        dephasing_time: dephasing,
        gate_time,
        operations_count: operations,
        loss_probability: loss,
        adiabaticity_ok,
        adiabaticity_margin: margin,
        readout_min_duration: selective_readout_min_duration(readout_splitting, options.selectivity_factor)?,
    })
}
