//! Hyperfine Zeeman structure of ground-state alkali atoms.
//!
//! Level energies come from the Breit-Rabi formula. Two flavours are
//! available through [`BreitRabiMode`]:
//!
//! * `Paper`: `E/ΔE_hf = -1/12 ± ½·sqrt(1 + m·x + x²)` with
//!   `x = g_J μ_B B / ΔE_hf`, evaluated literally.
//! * `Standard`: `E = -ΔE_hf/(2(2I+1)) + g_I μ_B m B ± ½ΔE_hf·sqrt(1 + 4mx/(2I+1) + x²)`
//!   with `x = (g_J - g_I) μ_B B / ΔE_hf` and the stretched states continued
//!   through `x = 1` without the absolute value.
//!
//! The two agree on every energy difference when `I = 3/2` and `g_I = 0`.
//! Energies are linear frequencies in Hz, fields in gauss.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // unused once std is linked
use num_traits::Float;

use crate::constants::BOHR_MAGNETON_HZ_PER_GAUSS;
use crate::numeric::snapped_floor;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BreitRabiMode {
    #[default]
    Paper,
    Standard,
}

/// A ground-state alkali atom.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpecies {
    pub name: String,
    /// Twice the nuclear spin, so that half-integer spins stay exact.
    pub twice_nuclear_spin: u32,
    /// Zero-field hyperfine splitting ΔE_hf, Hz.
    pub hyperfine_splitting_hz: f64,
    pub g_j: f64,
    /// Nuclear g-factor in the `+g_I μ_B m B` convention. Only used in
    /// standard mode.
    pub g_i: f64,
}

impl AtomSpecies {
    pub fn new(
        name: impl Into<String>,
        twice_nuclear_spin: u32,
        hyperfine_splitting_hz: f64,
        g_j: f64,
        g_i: f64,
    ) -> Result<Self> {
        if twice_nuclear_spin == 0 {
            return Err(Error::domain("nuclear spin", "must be positive"));
        }
        if !(hyperfine_splitting_hz > 0.0 && hyperfine_splitting_hz.is_finite()) {
            return Err(Error::domain("hyperfine splitting", "must be positive and finite"));
        }
        if !g_j.is_finite() || !g_i.is_finite() {
            return Err(Error::domain("g-factor", "must be finite"));
        }
        Ok(AtomSpecies {
            name: name.into(),
            twice_nuclear_spin,
            hyperfine_splitting_hz,
            g_j,
            g_i,
        })
    }

    /// ⁸⁷Rb: I = 3/2, ΔE_hf = 6.835 GHz, g_J = 2.00233.
    pub fn rb87() -> Self {
        AtomSpecies {
            name: "Rb87".into(),
            twice_nuclear_spin: 3,
            hyperfine_splitting_hz: 6.835e9,
            g_j: 2.00233,
            g_i: 0.0,
        }
    }

    /// ⁷Li: I = 3/2, ΔE_hf = 803.5 MHz (literature value), g_J = 2.00230.
    pub fn li7() -> Self {
        AtomSpecies {
            name: "Li7".into(),
            twice_nuclear_spin: 3,
            hyperfine_splitting_hz: 803.5e6,
            g_j: 2.00230,
            g_i: 0.0,
        }
    }

    pub fn nuclear_spin(&self) -> f64 {
        f64::from(self.twice_nuclear_spin) / 2.0
    }

    /// The two hyperfine manifolds as doubled f values, lower first.
    fn twice_f_values(&self) -> [i32; 2] {
        let twice_i = self.twice_nuclear_spin as i32;
        [twice_i - 1, twice_i + 1]
    }

    /// Every |f, m⟩ sublevel, lower manifold first, m ascending.
    pub fn states(&self) -> Vec<HyperfineState> {
        let mut out = Vec::new();
        for twice_f in self.twice_f_values() {
            let mut twice_m = -twice_f;
            while twice_m <= twice_f {
                out.push(HyperfineState { twice_f, twice_m });
                twice_m += 2;
            }
        }
        out
    }

    pub fn validate(&self, state: HyperfineState) -> Result<()> {
        let ok = self.twice_f_values().contains(&state.twice_f)
            && state.twice_m.abs() <= state.twice_f
            && (state.twice_f - state.twice_m) % 2 == 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidState {
                species: self.name.clone(),
                state: format!("{state}"),
            })
        }
    }

    fn is_upper_manifold(&self, state: HyperfineState) -> bool {
        state.twice_f == self.twice_nuclear_spin as i32 + 1
    }
}

/// A hyperfine sublevel |f, m⟩, stored with doubled quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperfineState {
    pub twice_f: i32,
    pub twice_m: i32,
}

impl HyperfineState {
    /// Integer `f` and `m`, as for the alkali bosons.
    pub const fn new(f: i32, m: i32) -> Self {
        HyperfineState {
            twice_f: 2 * f,
            twice_m: 2 * m,
        }
    }

    pub fn f(&self) -> f64 {
        f64::from(self.twice_f) / 2.0
    }

    pub fn m(&self) -> f64 {
        f64::from(self.twice_m) / 2.0
    }
}

fn write_half_integer(f: &mut fmt::Formatter<'_>, twice: i32) -> fmt::Result {
    if twice % 2 == 0 {
        write!(f, "{}", twice / 2)
    } else {
        write!(f, "{twice}/2")
    }
}

impl fmt::Display for HyperfineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        write_half_integer(f, self.twice_f)?;
        f.write_str(",")?;
        write_half_integer(f, self.twice_m)?;
        f.write_str(">")
    }
}

/// One atom of a two-atom channel.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomInState {
    pub species: AtomSpecies,
    pub state: HyperfineState,
}

/// An ordered pair of atoms in definite hyperfine states: a two-atom
/// collision channel, which is also how the qubit basis states are encoded.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperfineChannel {
    pub atom_a: AtomInState,
    pub atom_b: AtomInState,
}

impl HyperfineChannel {
    pub fn new(
        species_a: AtomSpecies,
        state_a: HyperfineState,
        species_b: AtomSpecies,
        state_b: HyperfineState,
    ) -> Result<Self> {
        species_a.validate(state_a)?;
        species_b.validate(state_b)?;
        Ok(HyperfineChannel {
            atom_a: AtomInState {
                species: species_a,
                state: state_a,
            },
            atom_b: AtomInState {
                species: species_b,
                state: state_b,
            },
        })
    }

    /// Twice the total projection m_a + m_b.
    pub fn twice_m_total(&self) -> i32 {
        self.atom_a.state.twice_m + self.atom_b.state.twice_m
    }

    pub fn m_total(&self) -> f64 {
        f64::from(self.twice_m_total()) / 2.0
    }

    /// Sum of the two Breit-Rabi energies, Hz.
    pub fn internal_energy(&self, field_gauss: f64, mode: BreitRabiMode) -> Result<f64> {
        Ok(
            breit_rabi_energy(&self.atom_a.species, self.atom_a.state, field_gauss, mode)?
                + breit_rabi_energy(&self.atom_b.species, self.atom_b.state, field_gauss, mode)?,
        )
    }

    fn rb_li(rb: HyperfineState, li: HyperfineState) -> Self {
        HyperfineChannel {
            atom_a: AtomInState {
                species: AtomSpecies::rb87(),
                state: rb,
            },
            atom_b: AtomInState {
                species: AtomSpecies::li7(),
                state: li,
            },
        }
    }

    /// Storage qubit |0⟩ = |1,1⟩_Rb ⊗ |2,2⟩_Li.
    pub fn qubit_zero() -> Self {
        Self::rb_li(HyperfineState::new(1, 1), HyperfineState::new(2, 2))
    }

    /// Storage qubit |1⟩ = |2,2⟩_Rb ⊗ |2,2⟩_Li.
    pub fn qubit_one() -> Self {
        Self::rb_li(HyperfineState::new(2, 2), HyperfineState::new(2, 2))
    }

    /// Enabled qubit |0'⟩ = |1,1⟩_Rb ⊗ |1,1⟩_Li, the Feshbach channel.
    pub fn enabled_zero() -> Self {
        Self::rb_li(HyperfineState::new(1, 1), HyperfineState::new(1, 1))
    }

    /// Enabled qubit |1'⟩ = |2,2⟩_Rb ⊗ |1,1⟩_Li.
    pub fn enabled_one() -> Self {
        Self::rb_li(HyperfineState::new(2, 2), HyperfineState::new(1, 1))
    }
}

impl fmt::Display for HyperfineChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{} + {}{}",
            self.atom_a.state, self.atom_a.species.name, self.atom_b.state, self.atom_b.species.name
        )
    }
}

struct Radical {
    x: f64,
    /// Coefficient of m·x under the root.
    m_coefficient: f64,
    sign: f64,
    root: f64,
}

fn radical(species: &AtomSpecies, state: HyperfineState, field_gauss: f64, mode: BreitRabiMode) -> Result<Radical> {
    species.validate(state)?;
    if !(field_gauss >= 0.0 && field_gauss.is_finite()) {
        return Err(Error::domain("magnetic field", "must be finite and non-negative"));
    }
    let m = state.m();
    let sign = if species.is_upper_manifold(state) { 1.0 } else { -1.0 };
    let (x, m_coefficient) = match mode {
        BreitRabiMode::Paper => (
            species.g_j * BOHR_MAGNETON_HZ_PER_GAUSS * field_gauss / species.hyperfine_splitting_hz,
            1.0,
        ),
        BreitRabiMode::Standard => (
            (species.g_j - species.g_i) * BOHR_MAGNETON_HZ_PER_GAUSS * field_gauss / species.hyperfine_splitting_hz,
            4.0 / (f64::from(species.twice_nuclear_spin) + 1.0),
        ),
    };
    let stretched = state.twice_m.abs() == species.twice_nuclear_spin as i32 + 1;
    let root = if mode == BreitRabiMode::Standard && stretched {
        // (1 ± x) exactly, continued through x = 1
        1.0 + m.signum() * x
    } else {
        let radicand = 1.0 + m_coefficient * m * x + x * x;
        if radicand < 0.0 {
            return Err(Error::NegativeRadicand {
                species: species.name.clone(),
                state: format!("{state}"),
                radicand,
            });
        }
        radicand.sqrt()
    };
    Ok(Radical {
        x,
        m_coefficient,
        sign,
        root,
    })
}

/// Splits a level energy into the state-independent offset of its mode and
/// the field-dependent remainder, so differences cancel the offset exactly.
fn level_parts(
    species: &AtomSpecies,
    state: HyperfineState,
    field_gauss: f64,
    mode: BreitRabiMode,
) -> Result<(f64, f64)> {
    let r = radical(species, state, field_gauss, mode)?;
    let hfs = species.hyperfine_splitting_hz;
    let zeeman_root = r.sign * 0.5 * hfs * r.root;
    Ok(match mode {
        BreitRabiMode::Paper => (-hfs / 12.0, zeeman_root),
        BreitRabiMode::Standard => (
            -hfs / (f64::from(species.twice_nuclear_spin) + 1.0) / 2.0,
            species.g_i * BOHR_MAGNETON_HZ_PER_GAUSS * state.m() * field_gauss + zeeman_root,
        ),
    })
}

/// Energy of `state` at `field_gauss`, Hz, relative to the hyperfine
/// centroid convention of the chosen mode.
pub fn breit_rabi_energy(
    species: &AtomSpecies,
    state: HyperfineState,
    field_gauss: f64,
    mode: BreitRabiMode,
) -> Result<f64> {
    let (offset, variable) = level_parts(species, state, field_gauss, mode)?;
    Ok(offset + variable)
}

/// dE/dB of one level, Hz/G.
pub fn energy_field_derivative(
    species: &AtomSpecies,
    state: HyperfineState,
    field_gauss: f64,
    mode: BreitRabiMode,
) -> Result<f64> {
    let r = radical(species, state, field_gauss, mode)?;
    let m = state.m();
    let (dx_db, nuclear) = match mode {
        BreitRabiMode::Paper => (
            species.g_j * BOHR_MAGNETON_HZ_PER_GAUSS / species.hyperfine_splitting_hz,
            0.0,
        ),
        BreitRabiMode::Standard => (
            (species.g_j - species.g_i) * BOHR_MAGNETON_HZ_PER_GAUSS / species.hyperfine_splitting_hz,
            species.g_i * BOHR_MAGNETON_HZ_PER_GAUSS * m,
        ),
    };
    let stretched = state.twice_m.abs() == species.twice_nuclear_spin as i32 + 1;
    let droot_dx = if mode == BreitRabiMode::Standard && stretched {
        m.signum()
    } else {
        if r.root == 0.0 {
            return Err(Error::domain(
                "field sensitivity",
                "Breit-Rabi root vanishes; derivative is undefined",
            ));
        }
        (r.m_coefficient * m + 2.0 * r.x) / (2.0 * r.root)
    };
    Ok(nuclear + r.sign * 0.5 * species.hyperfine_splitting_hz * droot_dx * dx_db)
}

/// E(upper) - E(lower), Hz.
pub fn transition_frequency(
    species: &AtomSpecies,
    upper: HyperfineState,
    lower: HyperfineState,
    field_gauss: f64,
    mode: BreitRabiMode,
) -> Result<f64> {
    let (_, upper) = level_parts(species, upper, field_gauss, mode)?;
    let (_, lower) = level_parts(species, lower, field_gauss, mode)?;
    Ok(upper - lower)
}

/// Analytic d(transition frequency)/dB, Hz/G.
pub fn field_sensitivity(
    species: &AtomSpecies,
    upper: HyperfineState,
    lower: HyperfineState,
    field_gauss: f64,
    mode: BreitRabiMode,
) -> Result<f64> {
    Ok(energy_field_derivative(species, upper, field_gauss, mode)?
        - energy_field_derivative(species, lower, field_gauss, mode)?)
}

/// Qubit-frequency difference between neighbouring sites in a field
/// gradient: `sensitivity × gradient × spacing`, Hz.
pub fn site_frequency_resolution(
    sensitivity_hz_per_gauss: f64,
    gradient_gauss_per_cm: f64,
    spacing_cm: f64,
) -> Result<f64> {
    if sensitivity_hz_per_gauss < 0.0 || gradient_gauss_per_cm < 0.0 || spacing_cm < 0.0 {
        return Err(Error::domain("site resolution", "inputs must be non-negative"));
    }
    Ok(sensitivity_hz_per_gauss * gradient_gauss_per_cm * spacing_cm)
}

/// Number of lattice sites per dimension whose local field stays inside a
/// resonance of the given width: `floor(width / (gradient × spacing))`.
pub fn resonance_site_count(resonance_width_gauss: f64, gradient_gauss_per_cm: f64, spacing_cm: f64) -> Result<u64> {
    if !(gradient_gauss_per_cm > 0.0) || !(spacing_cm > 0.0) {
        return Err(Error::domain(
            "resonance site count",
            "gradient and spacing must be positive",
        ));
    }
    if !(resonance_width_gauss >= 0.0 && resonance_width_gauss.is_finite()) {
        return Err(Error::domain(
            "resonance site count",
            "resonance width must be finite and non-negative",
        ));
    }
    let ratio = resonance_width_gauss / (gradient_gauss_per_cm * spacing_cm);
    Ok(snapped_floor(ratio) as u64)
}

/// Channels of the same species pair reachable by a spin-conserving
/// collision: equal m_a + m_b and strictly lower internal energy.
///
/// Kinetic energy is taken as zero, so an empty result means the channel is
/// collisionally stable.
pub fn open_decay_channels(
    channel: &HyperfineChannel,
    field_gauss: f64,
    mode: BreitRabiMode,
) -> Result<Vec<HyperfineChannel>> {
    let energy = channel.internal_energy(field_gauss, mode)?;
    let twice_m_total = channel.twice_m_total();
    let species_a = &channel.atom_a.species;
    let species_b = &channel.atom_b.species;
    let mut open = Vec::new();
    for state_a in species_a.states() {
        for state_b in species_b.states() {
            if state_a.twice_m + state_b.twice_m != twice_m_total {
                continue;
            }
            let candidate = HyperfineChannel::new(species_a.clone(), state_a, species_b.clone(), state_b)?;
            if candidate.internal_energy(field_gauss, mode)? < energy {
                open.push(candidate);
            }
        }
    }
    Ok(open)
}
