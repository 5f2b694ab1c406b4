//! Physical constants and the handful of unit conversions the rest of the
//! crate needs.
//!
//! Values are fixed at compile time. Dynamics-facing quantities (Rabi
//! frequencies, detunings, interaction rates) are angular frequencies in
//! rad/s; spectroscopy-facing quantities (transition frequencies, hyperfine
//! splittings, field sensitivities) are linear frequencies in Hz.

use core::f64::consts::TAU;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// One debye in C·m, `1e-21 / c` (exact by definition).
pub const DEBYE: f64 = 3.335_640_951_981_52e-30;

/// Planck constant h, J·s (exact since the 2019 SI).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant ħ = h/2π, J·s.
pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;

/// Vacuum permittivity ε₀, F/m (CODATA 2018).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Coulomb factor 4πε₀ in SI units.
pub const COULOMB_FACTOR: f64 = 2.0 * TAU * VACUUM_PERMITTIVITY;

/// Bohr magneton expressed as a linear frequency per gauss, μ_B/h in Hz/G.
///
/// Golden value; changing it changes every Zeeman number in the crate.
pub const BOHR_MAGNETON_HZ_PER_GAUSS: f64 = 1.399_624_604e6;

/// Dipole moment in debye to C·m.
pub fn debye_to_si(debye: f64) -> f64 {
    debye * DEBYE
}

/// Linear frequency (Hz) to angular frequency (rad/s).
pub fn linear_to_angular(hz: f64) -> f64 {
    hz * TAU
}

/// Angular frequency (rad/s) to linear frequency (Hz).
pub fn angular_to_linear(rad_per_s: f64) -> f64 {
    rad_per_s / TAU
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn golden_values() {
        assert_eq!(BOHR_MAGNETON_HZ_PER_GAUSS, 1.399624604e6);
        // 1e-21 / c, to the printed digits
        assert_relative_eq!(DEBYE, 1e-21 / SPEED_OF_LIGHT, max_relative = 1e-15);
        assert_relative_eq!(REDUCED_PLANCK, PLANCK / TAU, max_relative = 1e-9);
        assert_relative_eq!(COULOMB_FACTOR, 1.112_650_055_45e-10, max_relative = 1e-11);
    }

    #[test]
    fn debye_conversion() {
        assert_relative_eq!(debye_to_si(1.0), 3.33564e-30, max_relative = 1e-6);
        assert_eq!(debye_to_si(0.0), 0.0);
        assert_relative_eq!(debye_to_si(4.2), 1.40097e-29, max_relative = 1e-5);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn frequency_conversion() {
        assert_eq!(linear_to_angular(0.0), 0.0);
        assert_relative_eq!(linear_to_angular(1.0), 6.283_185_307_179_586, max_relative = 1e-15);
        assert_relative_eq!(linear_to_angular(1e6 / TAU), 1e6, max_relative = 1e-15);
    }

    fn ulps_apart(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64).abs_diff(b.to_bits() as i64)
    }

    proptest! {
        #[test]
        fn round_trip_within_one_ulp(x in -1e300f64..1e300) {
            prop_assert!(ulps_apart(linear_to_angular(angular_to_linear(x)), x) <= 1);
            prop_assert!(ulps_apart(angular_to_linear(linear_to_angular(x)), x) <= 1);
        }
    }
}
