//! Typed scenario built from a [`Config`], with every value validated
//! against the operation that will consume it.

use std::fmt;
use std::str::FromStr;

use hybridgate_core::budget::{BudgetOptions, DephasingDefinition, NoiseModel};
use hybridgate_core::dynamics::{LambdaParams, TwoLevelParams};
use hybridgate_core::gate::{
    dipole_dipole_rate, induced_dipole, interaction_time_for_pi, interaction_time_for_pi_detuned, DipoleParams,
    GateSchedule,
};
use hybridgate_core::hyperfine::{field_sensitivity, AtomSpecies, BreitRabiMode, HyperfineState};

use crate::config::Config;
use crate::error::CliError;

/// Bundled default scenario.
pub const DEFAULT_CONFIG: &str = include_str!("../paper.cfg");

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Detuning {
    Value(f64),
    /// Two-photon detuning equal to the dipole-dipole rate.
    DipoleRate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSettings {
    pub b_gauss: f64,
    pub gradient_gauss_per_cm: f64,
    pub site_spacing_cm: f64,
    pub resonance_width_gauss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl Axis {
    fn new(key: &str, min: f64, max: f64, count: usize, log: bool) -> Result<Self, CliError> {
        if count < 2 {
            return Err(CliError::config(format!("{key}: need at least 2 points")));
        }
        Self::grid(key, min, max, count, log)
    }

    /// Like [`Axis::new`], but a single point is allowed when `min == max`.
    fn grid(key: &str, min: f64, max: f64, count: usize, log: bool) -> Result<Self, CliError> {
        if count == 0 || (count == 1 && min != max) {
            return Err(CliError::config(format!("{key}: need at least 2 points")));
        }
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(CliError::config(format!("{key}: need finite min <= max")));
        }
        if log && !(min > 0.0) {
            return Err(CliError::config(format!("{key}: log axis needs min > 0")));
        }
        Ok(Axis { min, max, count, log })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let s = k as f64 / last;
                if k == self.count - 1 {
                    self.max
                } else if self.log {
                    self.min * (self.max / self.min).powf(s)
                } else {
                    self.min + (self.max - self.min) * s
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanSettings {
    pub omega_p: f64,
    pub omega_s: f64,
    pub delta_e: f64,
    pub detuning: Detuning,
    pub gamma_e: f64,
    pub fopa_enhancement: f64,
    pub stark_compensated: bool,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirapSettings {
    pub peak: f64,
    pub rms_width: f64,
    pub delay: f64,
    pub delta_e: f64,
    pub gamma_e: f64,
    pub samples: usize,
    pub scan: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DipoleSource {
    Induced,
    Field(DipoleParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSettings {
    pub induced_debye: f64,
    pub separation_m: f64,
    pub source: DipoleSource,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSettings {
    pub enabler_rotation_s: Option<f64>,
    pub samples_per_step: usize,
    /// Gate duration used for the fixed-time loss estimate, s.
    pub reference_gate_time_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetSettings {
    pub options: BudgetOptions,
    pub readout_splitting_hz: f64,
    pub mc_samples: u64,
    pub contrast_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    SeparationM,
    MuInducedD,
    FieldG,
    OmegaRRadS,
    SigmaBG,
    GammaInelasticPerS,
    StirapPeakRadS,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 7] = [
        SweepParameter::SeparationM,
        SweepParameter::MuInducedD,
        SweepParameter::FieldG,
        SweepParameter::OmegaRRadS,
        SweepParameter::SigmaBG,
        SweepParameter::GammaInelasticPerS,
        SweepParameter::StirapPeakRadS,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SweepParameter::SeparationM => "separation_m",
            SweepParameter::MuInducedD => "mu_induced_d",
            SweepParameter::FieldG => "b_g",
            SweepParameter::OmegaRRadS => "omega_r_rad_s",
            SweepParameter::SigmaBG => "sigma_b_g",
            SweepParameter::GammaInelasticPerS => "gamma_inelastic_per_s",
            SweepParameter::StirapPeakRadS => "stirap_peak_rad_s",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.to_ascii_lowercase();
        SweepParameter::ALL
            .into_iter()
            .find(|p| p.key() == wanted)
            .ok_or_else(|| {
                let names: Vec<&str> = SweepParameter::ALL.iter().map(|p| p.key()).collect();
                format!("unknown sweep parameter `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub parameter: SweepParameter,
    pub axis: Axis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mode: BreitRabiMode,
    pub seed: u64,
    pub qubit_species: AtomSpecies,
    pub enabler_species: AtomSpecies,
    pub qubit_upper: HyperfineState,
    pub qubit_lower: HyperfineState,
    pub field: FieldSettings,
    pub levels: Axis,
    pub raman: RamanSettings,
    pub stirap: StirapSettings,
    pub dipole: DipoleSettings,
    pub gate: GateSettings,
    pub noise: NoiseModel,
    pub budget: BudgetSettings,
    pub sweep: SweepSettings,
}

/// `2`, `-1`, `3/2` or `-1/2` as a doubled integer.
fn parse_twice(text: &str) -> Option<i32> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, "2")) => num.trim().parse::<i32>().ok(),
        Some(_) => None,
        None => text.parse::<i32>().ok().map(|v| 2 * v),
    }
}

/// `f,m` with optional halves, e.g. `2,2` or `3/2,-1/2`.
pub fn parse_state(text: &str) -> Option<HyperfineState> {
    let (f, m) = text.split_once(',')?;
    Some(HyperfineState {
        twice_f: parse_twice(f)?,
        twice_m: parse_twice(m)?,
    })
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(format!("{key}: must be positive and finite, got {v}")))
    }
}

fn non_negative(key: &str, v: f64) -> Result<f64, CliError> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(format!(
            "{key}: must be finite and non-negative, got {v}"
        )))
    }
}

fn at_least_one(key: &str, v: usize) -> Result<usize, CliError> {
    if v >= 1 {
        Ok(v)
    } else {
        Err(CliError::config(format!("{key}: must be at least 1")))
    }
}

fn preset(name: &str) -> Option<AtomSpecies> {
    match name.to_ascii_lowercase().as_str() {
        "rb87" => Some(AtomSpecies::rb87()),
        "li7" => Some(AtomSpecies::li7()),
        _ => None,
    }
}

fn species(c: &mut Config, role: &str, default: AtomSpecies) -> Result<AtomSpecies, CliError> {
    let section = format!("species.{role}");
    let base = match c.take(&section, "preset") {
        Some(name) => preset(&name)
            .ok_or_else(|| CliError::config(format!("{section}.preset: unknown species `{name}` (Rb87 or Li7)")))?,
        None => default,
    };
    let name = c.take(&section, "name").unwrap_or(base.name);
    let twice_i = c.take_or(&section, "twice_nuclear_spin", base.twice_nuclear_spin)?;
    let hfs = c.take_or(&section, "hyperfine_splitting_Hz", base.hyperfine_splitting_hz)?;
    let g_j = c.take_or(&section, "g_J", base.g_j)?;
    let g_i = c.take_or(&section, "g_I", base.g_i)?;
    AtomSpecies::new(name, twice_i, hfs, g_j, g_i).map_err(|e| CliError::at_key(&section, e))
}

fn state(
    c: &mut Config,
    key: &str,
    default: HyperfineState,
    species: &AtomSpecies,
) -> Result<HyperfineState, CliError> {
    let s = match c.take("qubit", key) {
        None => default,
        Some(raw) => parse_state(&raw).ok_or_else(|| {
            CliError::config(format!(
                "qubit.{key}: expected `f,m` (e.g. 2,2 or 3/2,-1/2), found `{raw}`"
            ))
        })?,
    };
    species
        .validate(s)
        .map_err(|e| CliError::at_key(&format!("qubit.{key}"), e))?;
    Ok(s)
}

impl Scenario {
    pub fn from_config_text(text: &str) -> Result<Self, CliError> {
        let mut c = Config::parse(text)?;
        let s = Self::build(&mut c)?;
        c.finish()?;
        Ok(s)
    }

    pub fn paper_default() -> Self {
        Self::from_config_text(DEFAULT_CONFIG).expect("bundled configuration is valid")
    }

    fn build(c: &mut Config) -> Result<Self, CliError> {
        let mode = match c.take("hyperfine", "mode").as_deref() {
            None | Some("paper") => BreitRabiMode::Paper,
            Some("standard") => BreitRabiMode::Standard,
            Some(other) => {
                return Err(CliError::config(format!(
                    "hyperfine.mode: expected paper or standard, found `{other}`"
                )))
            }
        };

        let qubit_species = species(c, "qubit", AtomSpecies::rb87())?;
        let enabler_species = species(c, "enabler", AtomSpecies::li7())?;
        let qubit_upper = state(c, "upper", HyperfineState::new(2, 2), &qubit_species)?;
        let qubit_lower = state(c, "lower", HyperfineState::new(1, 1), &qubit_species)?;
        if qubit_upper == qubit_lower {
            return Err(CliError::config("qubit.lower: must differ from qubit.upper"));
        }

        let field = FieldSettings {
            b_gauss: non_negative("field.B_G", c.take_or("field", "B_G", 649.0)?)?,
            gradient_gauss_per_cm: positive(
                "field.gradient_G_per_cm",
                c.take_or("field", "gradient_G_per_cm", 1000.0)?,
            )?,
            site_spacing_cm: positive("field.site_spacing_cm", c.take_or("field", "site_spacing_cm", 5e-5)?)?,
            resonance_width_gauss: non_negative(
                "field.resonance_width_G",
                c.take_or("field", "resonance_width_G", 5.0)?,
            )?,
        };

        let levels = Axis::grid(
            "levels",
            non_negative("levels.B_min_G", c.take_or("levels", "B_min_G", 0.0)?)?,
            c.take_or("levels", "B_max_G", 1000.0)?,
            c.take_or("levels", "B_count", 101)?,
            false,
        )?;

        let detuning = match c.take("raman", "two_photon_detuning_rad_s") {
            None => Detuning::Value(0.0),
            Some(raw) if raw == "omega_dd" => Detuning::DipoleRate,
            Some(raw) => Detuning::Value(raw.parse::<f64>().map_err(|_| {
                CliError::config(format!(
                    "raman.two_photon_detuning_rad_s: expected a number or omega_dd, found `{raw}`"
                ))
            })?),
        };
        let raman = RamanSettings {
            omega_p: positive("raman.omega_p_rad_s", c.take_or("raman", "omega_p_rad_s", 2e7)?)?,
            omega_s: positive("raman.omega_s_rad_s", c.take_or("raman", "omega_s_rad_s", 2e7)?)?,
            delta_e: c.take_or("raman", "delta_e_rad_s", 2e8)?,
            detuning,
            gamma_e: non_negative("raman.gamma_e_per_s", c.take_or("raman", "gamma_e_per_s", 0.0)?)?,
            fopa_enhancement: c.take_or("raman", "fopa_enhancement", 1.0)?,
            stark_compensated: c.take_bool_or("raman", "stark_compensated", true)?,
            samples: at_least_one("raman.samples", c.take_or("raman", "samples", 400)?)?,
        };
        if raman.delta_e == 0.0 || !raman.delta_e.is_finite() {
            return Err(CliError::config("raman.delta_e_rad_s: must be finite and non-zero"));
        }
        if !(raman.fopa_enhancement >= 1.0 && raman.fopa_enhancement.is_finite()) {
            return Err(CliError::config("raman.fopa_enhancement: must be a finite factor >= 1"));
        }

        let stirap = StirapSettings {
            peak: positive("stirap.peak_rad_s", c.take_or("stirap", "peak_rad_s", 1e6)?)?,
            rms_width: positive("stirap.rms_width_s", c.take_or("stirap", "rms_width_s", 30e-6)?)?,
            delay: non_negative("stirap.delay_s", c.take_or("stirap", "delay_s", 45e-6)?)?,
            delta_e: c.take_or("stirap", "delta_e_rad_s", 0.0)?,
            gamma_e: non_negative("stirap.gamma_e_per_s", c.take_or("stirap", "gamma_e_per_s", 0.0)?)?,
            samples: at_least_one("stirap.samples", c.take_or("stirap", "samples", 400)?)?,
            scan: Axis::new(
                "stirap.scan",
                positive(
                    "stirap.scan_peak_min_rad_s",
                    c.take_or("stirap", "scan_peak_min_rad_s", 1e4)?,
                )?,
                c.take_or("stirap", "scan_peak_max_rad_s", 2e6)?,
                c.take_or("stirap", "scan_count", 12)?,
                true,
            )?,
        };
        if !stirap.delta_e.is_finite() {
            return Err(CliError::config("stirap.delta_e_rad_s: must be finite"));
        }

        let dipole = Self::dipole(c)?;

        let gate = GateSettings {
            enabler_rotation_s: match c.take_parsed::<f64>("gate", "enabler_rotation_s")? {
                None => Some(30e-6),
                Some(0.0) => None,
                Some(v) => Some(positive("gate.enabler_rotation_s", v)?),
            },
            samples_per_step: at_least_one("gate.samples_per_step", c.take_or("gate", "samples_per_step", 50)?)?,
            reference_gate_time_s: positive(
                "gate.reference_gate_time_s",
                c.take_or("gate", "reference_gate_time_s", 20e-6)?,
            )?,
        };

        let seed = c.take_or("noise", "seed", 1u64)?;
        let noise = NoiseModel::new(
            c.take_or("noise", "sigma_B_G", 3e-4)?,
            c.take_or("noise", "gamma_inelastic_per_s", 1e5)?,
            c.take_or("noise", "trap_frequency_Hz", 1e5)?,
            seed,
        )
        .map_err(|e| CliError::at_key("noise", e))?;

        let dephasing = match c.take("budget", "dephasing_definition").as_deref() {
            None | Some("angular") => DephasingDefinition::AngularLinewidth,
            Some("linewidth") => DephasingDefinition::Linewidth,
            Some(other) => {
                return Err(CliError::config(format!(
                    "budget.dephasing_definition: expected angular or linewidth, found `{other}`"
                )))
            }
        };
        let budget = BudgetSettings {
            options: BudgetOptions {
                dephasing,
                adiabaticity_threshold: positive(
                    "budget.adiabaticity_threshold",
                    c.take_or("budget", "adiabaticity_threshold", 3.0)?,
                )?,
                selectivity_factor: positive(
                    "budget.selectivity_factor",
                    c.take_or("budget", "selectivity_factor", 1.0)?,
                )?,
            },
            readout_splitting_hz: positive(
                "budget.readout_splitting_Hz",
                c.take_or("budget", "readout_splitting_Hz", 1e3)?,
            )?,
            mc_samples: c.take_or("budget", "mc_samples", 100_000u64)?,
            contrast_points: c.take_or("budget", "contrast_points", 25)?,
        };
        if budget.mc_samples < hybridgate_core::budget::MIN_MC_SAMPLES {
            return Err(CliError::config("budget.mc_samples: must be at least 1000"));
        }
        if budget.contrast_points < 2 {
            return Err(CliError::config("budget.contrast_points: need at least 2 points"));
        }

        let parameter = match c.take("sweep", "parameter") {
            None => SweepParameter::SeparationM,
            Some(raw) => raw
                .parse::<SweepParameter>()
                .map_err(|e| CliError::config(format!("sweep.parameter: {e}")))?,
        };
        let log = match c.take("sweep", "scale").as_deref() {
            None | Some("linear") => false,
            Some("log") => true,
            Some(other) => {
                return Err(CliError::config(format!(
                    "sweep.scale: expected linear or log, found `{other}`"
                )))
            }
        };
        let sweep = SweepSettings {
            parameter,
            axis: Axis::new(
                "sweep",
                c.take_or("sweep", "min", 3e-7)?,
                c.take_or("sweep", "max", 1e-6)?,
                c.take_or("sweep", "count", 36)?,
                log,
            )?,
        };

        let scenario = Scenario {
            mode,
            seed,
            qubit_species,
            enabler_species,
            qubit_upper,
            qubit_lower,
            field,
            levels,
            raman,
            stirap,
            dipole,
            gate,
            noise,
            budget,
            sweep,
        };
        scenario.check_derived()?;
        Ok(scenario)
    }

    fn dipole(c: &mut Config) -> Result<DipoleSettings, CliError> {
        let separation_m = positive("dipole.separation_m", c.take_or("dipole", "separation_m", 500e-9)?)?;
        let induced = c.take_parsed::<f64>("dipole", "mu_induced_D")?;
        let permanent = c.take_parsed::<f64>("dipole", "mu_permanent_D")?;
        let b_rot = c.take_parsed::<f64>("dipole", "rotational_constant_Hz")?;
        let e_dc = c.take_parsed::<f64>("dipole", "field_V_per_m")?;
        match (induced, permanent, b_rot, e_dc) {
            (Some(mu), None, None, None) => Ok(DipoleSettings {
                induced_debye: positive("dipole.mu_induced_D", mu)?,
                separation_m,
                source: DipoleSource::Induced,
            }),
            (None, Some(mu), Some(b), Some(e)) => {
                let params = DipoleParams {
                    mu_permanent_debye: mu,
                    rotational_constant_hz: b,
                    field_v_per_m: e,
                    separation_m,
                };
                let d = induced_dipole(&params).map_err(|e| CliError::at_key("dipole", e))?;
                Ok(DipoleSettings {
                    induced_debye: d.debye,
                    separation_m,
                    source: DipoleSource::Field(params),
                })
            }
            (None, None, None, None) => Ok(DipoleSettings {
                induced_debye: 4.2,
                separation_m,
                source: DipoleSource::Induced,
            }),
            (Some(_), _, _, _) => Err(CliError::config(
                "dipole.mu_induced_D: set either mu_induced_D or mu_permanent_D with rotational_constant_Hz and field_V_per_m, not both",
            )),
            _ => Err(CliError::config(
                "dipole.mu_permanent_D: needs rotational_constant_Hz and field_V_per_m as well",
            )),
        }
    }

    /// Checks that the derived gate quantities exist for these inputs.
    fn check_derived(&self) -> Result<(), CliError> {
        self.lambda_params()?;
        self.gate_schedule()?;
        Ok(())
    }

    pub fn omega_dd(&self) -> Result<f64, CliError> {
        dipole_dipole_rate(self.dipole.induced_debye, self.dipole.separation_m)
            .map_err(|e| CliError::at_key("dipole", e))
    }

    pub fn two_photon_detuning(&self) -> Result<f64, CliError> {
        Ok(match self.raman.detuning {
            Detuning::Value(v) => v,
            Detuning::DipoleRate => self.omega_dd()?,
        })
    }

    pub fn lambda_params(&self) -> Result<LambdaParams, CliError> {
        let key = "raman";
        let r = &self.raman;
        LambdaParams::new(r.omega_p, r.omega_s, r.delta_e, self.two_photon_detuning()?)
            .and_then(|p| p.with_loss(r.gamma_e))
            .and_then(|p| p.with_fopa_enhancement(r.fopa_enhancement))
            .map(|p| p.with_stark_compensation(r.stark_compensated))
            .map_err(|e| CliError::at_key(key, e))
    }

    pub fn stirap_params(&self) -> Result<LambdaParams, CliError> {
        LambdaParams::new(0.0, 0.0, self.stirap.delta_e, 0.0)
            .and_then(|p| p.with_loss(self.stirap.gamma_e))
            .map_err(|e| CliError::at_key("stirap", e))
    }

    /// Effective two-level Raman drive.
    pub fn raman_pulse(&self) -> Result<TwoLevelParams, CliError> {
        self.lambda_params()?
            .effective_two_level()
            .map_err(|e| CliError::at_key("raman", e))
    }

    /// Wait that completes a π phase with the configured pulses.
    pub fn interaction_time(&self) -> Result<f64, CliError> {
        let omega_dd = self.omega_dd()?;
        let pulse = self.raman_pulse()?;
        let tau = if pulse.delta == 0.0 {
            interaction_time_for_pi(omega_dd, pulse.omega_r)
        } else {
            interaction_time_for_pi_detuned(omega_dd, pulse.omega_r, pulse.delta)
        };
        tau.map_err(|e| CliError::at_key("raman", e))
    }

    pub fn gate_schedule(&self) -> Result<GateSchedule, CliError> {
        GateSchedule::phase_gate(
            self.raman_pulse()?,
            self.interaction_time()?,
            self.gate.enabler_rotation_s,
        )
        .map_err(|e| CliError::at_key("gate", e))
    }

    /// Qubit transition sensitivity at the working field, Hz/G.
    pub fn sensitivity(&self) -> Result<f64, CliError> {
        field_sensitivity(
            &self.qubit_species,
            self.qubit_upper,
            self.qubit_lower,
            self.field.b_gauss,
            self.mode,
        )
        .map_err(|e| CliError::at_key("field.B_G", e))
    }
}
