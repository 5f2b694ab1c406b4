//! Numerics for an atom/molecule hybrid quantum-computing protocol.
//!
//! Qubits live in hyperfine states of one atom of a two-species pair; a
//! two-qubit phase gate is made by converting the pair into a polar
//! molecule, letting two molecules interact through their dipole-dipole
//! coupling and converting back. This crate holds the pure computational
//! pieces:
//!
//! * [`constants`]: pinned physical constants and unit conversions.
//! * [`hyperfine`]: Breit-Rabi levels, qubit transition frequencies,
//!   gradient addressing and collisional stability of two-atom channels.
//! * [`dynamics`]: two-level Rabi formulas, a fixed-step RK4 Schrödinger
//!   integrator, Raman pi pulses and STIRAP in a three-level Lambda system.
//! * [`gate`]: dipole-dipole rates, phase accumulation, gate schedules and
//!   the resulting two-qubit unitary.
//! * [`budget`]: magnetic dephasing, inelastic loss and timing budgets.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod budget;
pub mod constants;
pub mod dynamics;
mod error;
pub mod gate;
pub mod hyperfine;
pub(crate) mod numeric;

pub use error::{Error, Result};
