//! Shortcut-to-adiabaticity transport of a trapped particle through cubic and
//! quartic anharmonic traps.
//!
//! [`protocols`] designs the trajectory, [`trap`] turns it into a trap path,
//! [`classical`] and [`quantum`] check it, [`commands`] bundles the run modes
//! of the command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod classical;
pub mod commands;
pub mod config;
pub mod error;
pub mod numerics;
pub mod protocols;
pub mod quantum;
pub mod trap;

pub use error::{Error, Result};

/// Trap frequency of the reference setup, `2 pi x 1.41e5` rad/s.
pub const DEFAULT_OMEGA0: f64 = 2.0 * std::f64::consts::PI * 1.41e5;
/// Mass of a 40Ca+ ion, kg.
pub const DEFAULT_MASS: f64 = 40.0 * 1.667e-27;
/// Transport distance in units of the harmonic length.
pub const DEFAULT_D_OVER_A0: f64 = 20.2;
