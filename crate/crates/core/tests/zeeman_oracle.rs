//! Breit-Rabi levels checked against direct diagonalization of
//! `A I·J + μ_B B (g_J J_z + g_I I_z)` in the uncoupled |m_J, m_I⟩ basis.

use hybridgate_core::constants::BOHR_MAGNETON_HZ_PER_GAUSS as MU_B;
use hybridgate_core::hyperfine::{
    breit_rabi_energy, field_sensitivity, open_decay_channels, transition_frequency, AtomSpecies, BreitRabiMode,
    HyperfineChannel, HyperfineState,
};

/// Eigenvalue of the hyperfine + Zeeman Hamiltonian (J = 1/2) that connects
/// to |f, m⟩ at zero field.
fn diagonalized(species: &AtomSpecies, state: HyperfineState, b: f64) -> f64 {
    let i = species.nuclear_spin();
    let a = species.hyperfine_splitting_hz / (i + 0.5);
    let m = state.m();
    let upper = state.f() > i;
    let zeeman = |mj: f64, mi: f64| MU_B * b * (species.g_j * mj + species.g_i * mi);
    if (m.abs() - (i + 0.5)).abs() < 1e-12 {
        let mj = 0.5 * m.signum();
        let mi = i * m.signum();
        return a * mj * mi + zeeman(mj, mi);
    }
    let h_aa = a * 0.5 * (m - 0.5) + zeeman(0.5, m - 0.5);
    let h_bb = -a * 0.5 * (m + 0.5) + zeeman(-0.5, m + 0.5);
    let h_ab = 0.5 * a * (i * (i + 1.0) - (m - 0.5) * (m + 0.5)).sqrt();
    let mean = 0.5 * (h_aa + h_bb);
    let half_gap = (0.25 * (h_aa - h_bb).powi(2) + h_ab * h_ab).sqrt();
    if upper {
        mean + half_gap
    } else {
        mean - half_gap
    }
}

fn with_nuclear_g(species: AtomSpecies, g_i: f64) -> AtomSpecies {
    AtomSpecies::new(
        species.name,
        species.twice_nuclear_spin,
        species.hyperfine_splitting_hz,
        species.g_j,
        g_i,
    )
    .unwrap()
}

fn test_species() -> Vec<AtomSpecies> {
    vec![
        AtomSpecies::rb87(),
        AtomSpecies::li7(),
        with_nuclear_g(AtomSpecies::rb87(), -0.000_995_141_4),
        AtomSpecies::new("Rb85", 5, 3.035_732_439e9, 2.002_331_13, -0.000_293_640_0).unwrap(),
        AtomSpecies::new("Li6", 2, 228.205_259_1e6, 2.002_301_0, -0.000_447_654_0).unwrap(),
        AtomSpecies::new("K40", 8, 1.285_790_8e9, 2.002_294_21, 0.000_176_490).unwrap(),
    ]
}

const FIELDS: [f64; 9] = [0.0, 0.1, 1.0, 50.0, 287.0, 649.0, 1200.0, 3000.0, 10_000.0];

#[test]
fn standard_mode_matches_diagonalization() {
    for species in test_species() {
        for state in species.states() {
            for b in FIELDS {
                let br = breit_rabi_energy(&species, state, b, BreitRabiMode::Standard).unwrap();
                let exact = diagonalized(&species, state, b);
                let scale = species.hyperfine_splitting_hz.max(MU_B * b);
                assert!(
                    (br - exact).abs() <= 1e-12 * scale,
                    "{} {state} at {b} G: {br} vs {exact}",
                    species.name
                );
            }
        }
    }
}

#[test]
fn paper_mode_is_shifted_standard_mode_for_spin_three_halves() {
    let shift = |s: &AtomSpecies| s.hyperfine_splitting_hz * (1.0 / 8.0 - 1.0 / 12.0);
    for species in [AtomSpecies::rb87(), AtomSpecies::li7()] {
        let x_per_gauss = species.g_j * MU_B / species.hyperfine_splitting_hz;
        for state in species.states() {
            for b in FIELDS {
                let x = x_per_gauss * b;
                let paper = breit_rabi_energy(&species, state, b, BreitRabiMode::Paper).unwrap();
                let stretched = state.m().abs() == 2.0;
                let expected = if stretched && x > 1.0 {
                    // sqrt((1 ± x)²) is |1 ± x|, which folds the low-field-seeking branch
                    let dhf = species.hyperfine_splitting_hz;
                    -dhf / 12.0 + 0.5 * dhf * (1.0 + state.m().signum() * x).abs()
                } else {
                    diagonalized(&species, state, b) + shift(&species)
                };
                assert!(
                    (paper - expected).abs() <= 1e-12 * species.hyperfine_splitting_hz.max(MU_B * b),
                    "{} {state} at {b} G",
                    species.name
                );
            }
        }
    }
}

#[test]
fn sensitivity_matches_diagonalization_slope() {
    let rb = AtomSpecies::rb87();
    let up = HyperfineState::new(2, 2);
    let down = HyperfineState::new(1, 1);
    for b in [10.0, 300.0, 649.0, 2000.0] {
        let h = 1e-3;
        let slope = ((diagonalized(&rb, up, b + h) - diagonalized(&rb, down, b + h))
            - (diagonalized(&rb, up, b - h) - diagonalized(&rb, down, b - h)))
            / (2.0 * h);
        for mode in [BreitRabiMode::Paper, BreitRabiMode::Standard] {
            let s = field_sensitivity(&rb, up, down, b, mode).unwrap();
            assert!((s / slope - 1.0).abs() < 1e-6, "{mode:?} at {b} G: {s} vs {slope}");
        }
    }
}

#[test]
fn qubit_splitting_at_the_feshbach_field() {
    let rb = AtomSpecies::rb87();
    let up = HyperfineState::new(2, 2);
    let down = HyperfineState::new(1, 1);
    let exact = diagonalized(&rb, up, 649.0) - diagonalized(&rb, down, 649.0);
    for mode in [BreitRabiMode::Paper, BreitRabiMode::Standard] {
        let f = transition_frequency(&rb, up, down, 649.0, mode).unwrap();
        assert!((f / exact - 1.0).abs() < 1e-13);
        assert!((f - 8.3e9).abs() < 0.1e9);
    }
}

#[test]
fn decay_channels_match_brute_force() {
    let rb = AtomSpecies::rb87();
    let li = AtomSpecies::li7();
    for b in [0.5, 100.0, 649.0, 1500.0] {
        for sa in rb.states() {
            for sb in li.states() {
                let channel = HyperfineChannel::new(rb.clone(), sa, li.clone(), sb).unwrap();
                let energy = diagonalized(&rb, sa, b) + diagonalized(&li, sb, b);
                let mut expected: Vec<(HyperfineState, HyperfineState)> = Vec::new();
                for ta in rb.states() {
                    for tb in li.states() {
                        let conserves = ta.m() + tb.m() == sa.m() + sb.m();
                        let lower = diagonalized(&rb, ta, b) + diagonalized(&li, tb, b) < energy;
                        if conserves && lower {
                            expected.push((ta, tb));
                        }
                    }
                }
                let got: Vec<(HyperfineState, HyperfineState)> =
                    open_decay_channels(&channel, b, BreitRabiMode::Standard)
                        .unwrap()
                        .into_iter()
                        .map(|c| (c.atom_a.state, c.atom_b.state))
                        .collect();
                assert_eq!(got, expected, "|{sa}, {sb}> at {b} G");
            }
        }
    }
}

#[test]
fn encoding_channels_are_collisionally_stable() {
    for channel in [
        HyperfineChannel::qubit_zero(),
        HyperfineChannel::qubit_one(),
        HyperfineChannel::enabled_zero(),
    ] {
        let open = open_decay_channels(&channel, 649.0, BreitRabiMode::Paper).unwrap();
        assert!(open.is_empty(), "{channel}: {} open channels", open.len());
    }
}
