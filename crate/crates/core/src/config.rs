//! Run configuration: a flat TOML file whose keys mirror the fields below.
//!
//! ```toml
//! protocol = "cosine"        # cosine | sine | sine2 | experimental
//! trap = "cubic"             # harmonic | cubic | quartic
//! u = 9.42477796076938
//! xi_over_d = 100.0
//! inversion = "perturbative" # perturbative | exact
//! sweep_target = "fig2"      # fig2 | fig3 | fig4
//! sweep_log10_min = 1.0
//! sweep_log10_max = 5.0
//! sweep_points = 41
//! ```
//!
//! Omitted keys take the defaults of [`RunConfig::default`]; unknown keys are
//! rejected.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classical::{self, SweepSettings};
use crate::error::{Error, Result};
use crate::protocols::{
    reference, solve_cosine_coefficients, solve_sine_coefficients, Anharmonicity, CoefficientSolution,
    ProtocolAnsatz,
};
use crate::quantum::GridSpec;
use crate::trap::{Inversion, TransportSchedule, TrapKind, TrapModel};

/// Protocol names accepted on the command line and in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolChoice {
    /// Odd-cosine series solved for the trap's anharmonicity.
    Cosine,
    /// Single-parameter sine.
    Sine,
    /// Two-parameter sine solved for the cubic correction.
    Sine2,
    /// The sine trajectory used in experiments, with non-zero end velocity.
    Experimental,
}

impl ProtocolChoice {
    pub const ALL: [ProtocolChoice; 4] =
        [ProtocolChoice::Cosine, ProtocolChoice::Sine, ProtocolChoice::Sine2, ProtocolChoice::Experimental];

    /// Builds the trajectory ansatz, solving for free coefficients where the
    /// family has any. The cosine family targets the quartic correction in a
    /// quartic trap and the cubic one otherwise.
    pub fn resolve(self, trap: TrapKind, u: f64) -> Result<(ProtocolAnsatz, Option<CoefficientSolution>)> {
        let solved = |s: CoefficientSolution| (s.ansatz.clone(), Some(s));
        Ok(match self {
            ProtocolChoice::Cosine => {
                let order = match trap {
                    TrapKind::Quartic => Anharmonicity::Quartic,
                    _ => Anharmonicity::Cubic,
                };
                solved(solve_cosine_coefficients(u, order)?)
            }
            ProtocolChoice::Sine => (ProtocolAnsatz::sine_single(), None),
            ProtocolChoice::Sine2 => solved(solve_sine_coefficients(u)?),
            ProtocolChoice::Experimental => (ProtocolAnsatz::experimental_sine(), None),
        })
    }
}

impl fmt::Display for ProtocolChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            ProtocolChoice::Cosine => "cosine",
            ProtocolChoice::Sine => "sine",
            ProtocolChoice::Sine2 => "sine2",
            ProtocolChoice::Experimental => "experimental",
        })
    }
}

impl FromStr for ProtocolChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown protocol {s:?}")))
    }
}

/// Figure-style sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepTarget {
    /// Residual energy in the cubic trap: cosine, sine, sine2.
    Fig2,
    /// Residual energy in the quartic trap: cosine, sine.
    Fig3,
    /// Fidelity in the cubic and quartic traps: cosine, sine.
    Fig4,
}

impl fmt::Display for SweepTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            SweepTarget::Fig2 => "fig2",
            SweepTarget::Fig3 => "fig3",
            SweepTarget::Fig4 => "fig4",
        })
    }
}

impl FromStr for SweepTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(SweepTarget::Fig2),
            "fig3" => Ok(SweepTarget::Fig3),
            "fig4" => Ok(SweepTarget::Fig4),
            other => Err(Error::Config(format!("unknown sweep target {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub protocol: ProtocolChoice,
    pub trap: TrapKind,
    /// `omega0 * t_f`
    pub u: f64,
    pub xi_over_d: f64,
    pub inversion: Inversion,

    /// rad/s
    pub omega0: f64,
    /// kg
    pub mass: f64,
    pub d_over_a0: f64,

    pub ode_steps: usize,
    pub schedule_samples: usize,
    pub grid_points: usize,
    pub time_steps: usize,
    /// Grid margin beyond `[0, d]`, in `a0`.
    pub grid_margin: f64,

    pub sweep_target: Option<SweepTarget>,
    pub sweep_log10_min: f64,
    pub sweep_log10_max: f64,
    pub sweep_points: usize,

    /// Values of `s` at which `quantum` records the density.
    pub snapshots: Vec<f64>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            protocol: ProtocolChoice::Cosine,
            trap: TrapKind::Cubic,
            u: reference::U_CUBIC,
            xi_over_d: 100.0,
            inversion: Inversion::Perturbative,
            omega0: crate::DEFAULT_OMEGA0,
            mass: crate::DEFAULT_MASS,
            d_over_a0: crate::DEFAULT_D_OVER_A0,
            ode_steps: classical::DEFAULT_STEPS,
            schedule_samples: TransportSchedule::DEFAULT_SAMPLES,
            grid_points: GridSpec::DEFAULT_POINTS,
            time_steps: GridSpec::DEFAULT_TIME_STEPS,
            grid_margin: GridSpec::DEFAULT_MARGIN,
            sweep_target: None,
            sweep_log10_min: 1.0,
            sweep_log10_max: 5.0,
            sweep_points: 41,
            snapshots: Vec::new(),
            output: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("u", self.u),
            ("xi_over_d", self.xi_over_d),
            ("omega0", self.omega0),
            ("mass", self.mass),
            ("d_over_a0", self.d_over_a0),
            ("grid_margin", self.grid_margin),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {value}")));
            }
        }
        for (name, value) in [
            ("ode_steps", self.ode_steps),
            ("schedule_samples", self.schedule_samples),
            ("time_steps", self.time_steps),
            ("sweep_points", self.sweep_points),
        ] {
            if value == 0 {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if !(self.sweep_log10_max >= self.sweep_log10_min) {
            return Err(Error::Config("sweep_log10_max must not be below sweep_log10_min".into()));
        }
        if let Some(s) = self.snapshots.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::Config(format!("snapshot s = {s} outside [0, 1]")));
        }
        Ok(())
    }

    pub fn model(&self) -> Result<TrapModel> {
        TrapModel::from_ratios(self.trap, self.omega0, self.mass, self.d_over_a0, self.xi_over_d)
    }

    pub fn sweep_settings(&self) -> SweepSettings {
        SweepSettings {
            omega0: self.omega0,
            mass: self.mass,
            d_over_a0: self.d_over_a0,
            steps: self.ode_steps,
            samples: self.schedule_samples,
            inversion: self.inversion,
        }
    }

    pub fn grid(&self) -> Result<GridSpec> {
        let grid = GridSpec::new(
            -self.grid_margin,
            self.d_over_a0 + self.grid_margin,
            self.grid_points,
            self.time_steps,
        )?;
        grid.check_covers(self.d_over_a0)?;
        Ok(grid)
    }

    pub fn sweep_grid(&self) -> Vec<f64> {
        classical::log_grid(self.sweep_log10_min, self.sweep_log10_max, self.sweep_points)
    }
}
