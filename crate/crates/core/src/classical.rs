//! Classical transport in the moving trap and the final residual energy.
//!
//! The equation of motion is integrated in dimensionless form,
//! `x'' = -u^2 * restoring(x - x0(s))`, with `x` in units of `d` and primes
//! denoting `d/ds`. The particle starts at rest at the origin.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::protocols::ProtocolAnsatz;
use crate::trap::{build_schedule, Inversion, TransportSchedule, TrapKind, TrapModel};

/// Escape threshold for the cubic trap, in units of `xi`.
pub const ESCAPE_FACTOR: f64 = 1.5;
pub const DEFAULT_STEPS: usize = 20_000;
const MIN_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub s: f64,
    pub x: f64,
    /// `dx/ds`
    pub v: f64,
    pub x0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTrajectory {
    pub model: TrapModel,
    pub u: f64,
    pub steps: usize,
    pub samples: Vec<TrajectorySample>,
}

impl ClassicalTrajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory has at least one sample")
    }

    /// Energy above the trap bottom in units of `hbar omega0` at every sample.
    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|p| self.bracket(p) * self.model.energy_scale())
    }

    fn bracket(&self, p: &TrajectorySample) -> f64 {
        p.v * p.v / (2.0 * self.u * self.u) + self.model.scaled_potential(p.x - p.x0)
    }
}

/// Fixed-step fourth-order Runge-Kutta integration over `s in [0, 1]`.
pub fn integrate(
    model: &TrapModel,
    schedule: &TransportSchedule,
    steps: usize,
) -> Result<ClassicalTrajectory> {
    if steps < MIN_STEPS {
        return Err(Error::Spec(format!("need at least {MIN_STEPS} steps, got {steps}")));
    }
    let u2 = schedule.u() * schedule.u();
    let h = 1.0 / steps as f64;
    let escape = match model.kind {
        TrapKind::Cubic => ESCAPE_FACTOR / model.d_over_xi(),
        _ => f64::INFINITY,
    };
    let accel = |s: f64, x: f64| -u2 * model.scaled_restoring(x - schedule.at(s));

    let mut samples = Vec::with_capacity(steps + 1);
    let (mut x, mut v) = (0.0f64, 0.0f64);
    samples.push(TrajectorySample { s: 0.0, x, v, x0: schedule.at(0.0) });
    for k in 0..steps {
        let s = k as f64 * h;
        let k1x = v;
        let k1v = accel(s, x);
        let k2x = v + 0.5 * h * k1v;
        let k2v = accel(s + 0.5 * h, x + 0.5 * h * k1x);
        let k3x = v + 0.5 * h * k2v;
        let k3v = accel(s + 0.5 * h, x + 0.5 * h * k2x);
        let k4x = v + h * k3v;
        let k4v = accel(s + h, x + h * k3x);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

        let s_next = if k + 1 == steps { 1.0 } else { (k + 1) as f64 * h };
        if !x.is_finite() || !v.is_finite() {
            return Err(Error::Divergence { s: s_next });
        }
        let x0 = schedule.at(s_next);
        let excursion = (x - x0).abs();
        if excursion > escape {
            return Err(Error::Escape { s: s_next, excursion });
        }
        samples.push(TrajectorySample { s: s_next, x, v, x0 });
    }
    Ok(ClassicalTrajectory { model: *model, u: schedule.u(), steps, samples })
}

/// Final residual energy in units of `hbar omega0`, measured from the final
/// trap bottom. Can be negative in the cubic trap.
pub fn residual_energy(trajectory: &ClassicalTrajectory) -> f64 {
    trajectory.bracket(trajectory.last()) * trajectory.model.energy_scale()
}

/// Physical parameters and numerics shared by every point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub omega0: f64,
    pub mass: f64,
    pub d_over_a0: f64,
    pub steps: usize,
    pub samples: usize,
    pub inversion: Inversion,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            omega0: crate::DEFAULT_OMEGA0,
            mass: crate::DEFAULT_MASS,
            d_over_a0: crate::DEFAULT_D_OVER_A0,
            steps: DEFAULT_STEPS,
            samples: TransportSchedule::DEFAULT_SAMPLES,
            inversion: Inversion::Perturbative,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointStatus {
    Ok,
    Escaped { s: f64 },
    Diverged { s: f64 },
    Failed(String),
}

impl PointStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, PointStatus::Ok)
    }

    pub(crate) fn from_error(err: &Error) -> Self {
        match err {
            Error::Escape { s, .. } => PointStatus::Escaped { s: *s },
            Error::Divergence { s } => PointStatus::Diverged { s: *s },
            other => PointStatus::Failed(other.to_string()),
        }
    }
}

impl fmt::Display for PointStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointStatus::Ok => f.write_str("ok"),
            PointStatus::Escaped { s } => write!(f, "escaped at s={s:.6}"),
            PointStatus::Diverged { s } => write!(f, "diverged at s={s:.6}"),
            PointStatus::Failed(msg) => write!(f, "failed: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub xi_over_d: f64,
    /// `None` when the point failed; see `status`.
    pub value: Option<f64>,
    pub status: PointStatus,
}

impl SweepPoint {
    pub fn log10_xi_over_d(&self) -> f64 {
        self.xi_over_d.log10()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergySweepResult {
    pub protocol: String,
    pub kind: TrapKind,
    pub u: f64,
    pub points: Vec<SweepPoint>,
}

impl EnergySweepResult {
    /// `(xi/d, dE)` for every successful point.
    pub fn valid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().filter_map(|p| p.value.map(|v| (p.xi_over_d, v)))
    }
}

/// `n` values of `xi/d` evenly spaced in `log10` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![10f64.powf(lo)],
        _ => (0..n).map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (n - 1) as f64)).collect(),
    }
}

pub(crate) fn validate_grid(xi_over_d: &[f64]) -> Result<()> {
    if xi_over_d.is_empty() {
        return Err(Error::Spec("sweep grid is empty".into()));
    }
    if xi_over_d.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::Spec("sweep grid values must be positive".into()));
    }
    if xi_over_d.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Spec("sweep grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Residual energy for each `xi/d` with the protocol held fixed.
///
/// Points run in parallel; failures are recorded per point.
pub fn sweep_xi(
    kind: TrapKind,
    protocol: &ProtocolAnsatz,
    u: f64,
    xi_over_d: &[f64],
    settings: &SweepSettings,
) -> Result<EnergySweepResult> {
    validate_grid(xi_over_d)?;
    let points = xi_over_d
        .par_iter()
        .map(|&ratio| {
            let run = || -> Result<f64> {
                let model =
                    TrapModel::from_ratios(kind, settings.omega0, settings.mass, settings.d_over_a0, ratio)?;
                let schedule = build_schedule(protocol, &model, u, settings.samples, settings.inversion)?;
                let trajectory = integrate(&model, &schedule, settings.steps)?;
                Ok(residual_energy(&trajectory))
            };
            match run() {
                Ok(value) => SweepPoint { xi_over_d: ratio, value: Some(value), status: PointStatus::Ok },
                Err(e) => SweepPoint { xi_over_d: ratio, value: None, status: PointStatus::from_error(&e) },
            }
        })
        .collect();
    Ok(EnergySweepResult { protocol: protocol.to_string(), kind, u, points })
}
