//! Wave-packet transport by second-order split-operator propagation.
//!
//! All quantities are in harmonic-oscillator units of the unperturbed trap:
//! lengths in `a0 = sqrt(hbar / (m omega0))`, times in `1 / omega0`, energies
//! in `hbar omega0`. The transport duration `t_f` is therefore `u` itself.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::classical::{validate_grid, PointStatus, SweepSettings};
use crate::error::{Error, Result};
use crate::protocols::ProtocolAnsatz;
use crate::trap::{build_schedule, TransportSchedule, TrapKind, TrapModel};

/// Minimum distance, in `a0`, between a packet center and the grid edge.
pub const PADDING: f64 = 12.0;
/// Probability beyond which a run carries a leakage warning.
pub const LEAKAGE_THRESHOLD: f64 = 1e-3;
/// Width of the edge band counted as leaked probability.
const EDGE_BAND: f64 = 3.0;

/// Periodic spatial grid plus the number of propagation steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub time_steps: usize,
}

impl GridSpec {
    pub const DEFAULT_POINTS: usize = 4096;
    pub const DEFAULT_TIME_STEPS: usize = 20_000;
    pub const DEFAULT_MARGIN: f64 = 15.0;

    pub fn new(x_min: f64, x_max: f64, points: usize, time_steps: usize) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Spec(format!("bad grid extent [{x_min}, {x_max}]")));
        }
        if points < 512 || !points.is_power_of_two() {
            return Err(Error::Spec(format!("grid points must be a power of two >= 512, got {points}")));
        }
        if time_steps == 0 {
            return Err(Error::Spec("time steps must be positive".into()));
        }
        Ok(Self { x_min, x_max, points, time_steps })
    }

    /// `[-15, d + 15]` with default resolution.
    pub fn for_transport(d_over_a0: f64) -> Self {
        Self {
            x_min: -Self::DEFAULT_MARGIN,
            x_max: d_over_a0 + Self::DEFAULT_MARGIN,
            points: Self::DEFAULT_POINTS,
            time_steps: Self::DEFAULT_TIME_STEPS,
        }
    }

    pub fn with_points(self, points: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, points, self.time_steps)
    }

    pub fn with_time_steps(self, time_steps: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, self.points, time_steps)
    }

    /// Checks that `[0, d]` plus padding on both sides fits on the grid.
    pub fn check_covers(&self, d_over_a0: f64) -> Result<()> {
        if self.x_min > -PADDING || self.x_max < d_over_a0 + PADDING {
            return Err(Error::Spec(format!(
                "grid [{}, {}] does not cover [0, {d_over_a0}] with {PADDING} a0 padding",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|j| self.x(j))
    }

    fn same_space(&self, other: &GridSpec) -> bool {
        self.x_min == other.x_min && self.x_max == other.x_max && self.points == other.points
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    grid: GridSpec,
    amplitudes: Vec<Complex64>,
}

impl WavePacket {
    pub fn new(grid: GridSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.points {
            return Err(Error::Spec(format!(
                "{} amplitudes for a grid of {} points",
                amplitudes.len(),
                grid.points
            )));
        }
        Ok(Self { grid, amplitudes })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|psi|^2` at every grid point.
    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Squared norm; on the periodic grid the trapezoid rule is a plain sum.
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn normalize(&mut self) {
        let scale = 1.0 / self.norm().sqrt();
        self.amplitudes.iter_mut().for_each(|a| *a *= scale);
    }

    pub fn mean_position(&self) -> f64 {
        let dx = self.grid.dx();
        let weighted: f64 =
            self.amplitudes.iter().enumerate().map(|(j, a)| self.grid.x(j) * a.norm_sqr()).sum();
        weighted * dx / self.norm()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean_position();
        let dx = self.grid.dx();
        let spread: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(j, a)| (self.grid.x(j) - mean).powi(2) * a.norm_sqr())
            .sum();
        spread * dx / self.norm()
    }

    /// Probability within `width` of either grid edge.
    pub fn edge_probability(&self, width: f64) -> f64 {
        let dx = self.grid.dx();
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(j, _)| {
                let x = self.grid.x(*j);
                x < self.grid.x_min + width || x > self.grid.x_max - width
            })
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            * dx
    }
}

/// Ground state of the unperturbed harmonic trap centered at `center`.
pub fn harmonic_ground_state(grid: &GridSpec, center: f64) -> Result<WavePacket> {
    if center < grid.x_min + PADDING || center > grid.x_max - PADDING {
        return Err(Error::Padding { center, padding: PADDING, x_min: grid.x_min, x_max: grid.x_max });
    }
    let norm = PI.powf(-0.25);
    let amplitudes =
        grid.positions().map(|x| Complex64::new(norm * (-0.5 * (x - center).powi(2)).exp(), 0.0)).collect();
    let mut psi = WavePacket { grid: *grid, amplitudes };
    psi.normalize();
    Ok(psi)
}

/// `|<psi|phi>|^2 / (<psi|psi> <phi|phi>)`, clamped to `[0, 1]`.
///
/// Dividing by the norms keeps round-off accumulated over a long propagation
/// from pushing the value past one.
pub fn fidelity(psi: &WavePacket, phi: &WavePacket) -> Result<f64> {
    if !psi.grid.same_space(&phi.grid) {
        return Err(Error::GridMismatch);
    }
    let overlap: Complex64 = psi.amplitudes.iter().zip(&phi.amplitudes).map(|(a, b)| a.conj() * b).sum();
    let dx = psi.grid.dx();
    let value = (overlap * dx).norm_sqr() / (psi.norm() * phi.norm());
    Ok(value.min(1.0))
}

/// Time-dependent potential in units of `hbar omega0`, as a function of
/// position (in `a0`) and `s = t / t_f`.
pub trait Potential: Sync {
    fn value(&self, x: f64, s: f64) -> f64;

    /// Probability mass sitting where the potential is modified for
    /// stability (e.g. beyond a clamp).
    fn clamped_probability(&self, _psi: &WavePacket, _s: f64) -> f64 {
        0.0
    }
}

impl<F> Potential for F
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    fn value(&self, x: f64, s: f64) -> f64 {
        self(x, s)
    }
}

/// The anharmonic trap moving along a schedule.
///
/// Beyond the saddle of the cubic trap (`x - x0 < -xi`) the potential is held
/// at the saddle value `xi^2 / 6`; the probability there is reported as
/// leakage.
#[derive(Debug, Clone)]
pub struct MovingTrap<'a> {
    kind: TrapKind,
    /// `xi` in `a0`
    xi: f64,
    /// `d` in `a0`
    d: f64,
    schedule: &'a TransportSchedule,
}

impl<'a> MovingTrap<'a> {
    pub fn new(model: &TrapModel, schedule: &'a TransportSchedule) -> Self {
        let a0 = model.harmonic_length();
        Self { kind: model.kind, xi: model.xi / a0, d: model.d / a0, schedule }
    }

    /// Trap bottom in `a0`.
    pub fn center(&self, s: f64) -> f64 {
        self.d * self.schedule.at(s)
    }
}

impl Potential for MovingTrap<'_> {
    fn value(&self, x: f64, s: f64) -> f64 {
        let z = x - self.center(s);
        match self.kind {
            TrapKind::Harmonic => 0.5 * z * z,
            TrapKind::Cubic if z < -self.xi => self.xi * self.xi / 6.0,
            TrapKind::Cubic => 0.5 * z * z + z.powi(3) / (3.0 * self.xi),
            TrapKind::Quartic => 0.5 * z * z + z.powi(4) / (4.0 * self.xi * self.xi),
        }
    }

    fn clamped_probability(&self, psi: &WavePacket, s: f64) -> f64 {
        if self.kind != TrapKind::Cubic {
            return 0.0;
        }
        let edge = self.center(s) - self.xi;
        let dx = psi.grid.dx();
        psi.amplitudes
            .iter()
            .enumerate()
            .filter(|(j, _)| psi.grid.x(*j) < edge)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            * dx
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub psi: WavePacket,
    /// `|norm(t_f) - norm(0)|`
    pub norm_drift: f64,
    /// Largest norm change over a single step.
    pub max_step_drift: f64,
    /// Largest probability seen near the grid edges or in clamped regions.
    pub leakage: f64,
}

impl Evolution {
    pub fn warning(&self) -> Option<String> {
        let lost = self.leakage.max(self.norm_drift);
        (lost > LEAKAGE_THRESHOLD).then(|| format!("leakage {lost:.3e} exceeds {LEAKAGE_THRESHOLD:e}"))
    }
}

/// Reusable split-operator stepper for one grid.
pub struct SplitOperator {
    grid: GridSpec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    wavenumbers: Vec<f64>,
}

impl SplitOperator {
    pub fn new(grid: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.points);
        let inverse = planner.plan_fft_inverse(grid.points);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        let n = grid.points;
        let dk = 2.0 * PI / (grid.x_max - grid.x_min);
        let wavenumbers =
            (0..n).map(|j| if j < n / 2 { j as f64 * dk } else { (j as f64 - n as f64) * dk }).collect();
        Self { grid: *grid, forward, inverse, scratch: vec![Complex64::default(); scratch_len], wavenumbers }
    }

    /// Propagates over `[0, t_f]` in `grid.time_steps` symmetric steps.
    pub fn evolve(&mut self, psi: &WavePacket, potential: &impl Potential, t_f: f64) -> Result<Evolution> {
        self.evolve_observed(psi, potential, t_f, |_, _| {})
    }

    /// As [`evolve`](Self::evolve), calling `observer(s, psi)` at `s = 0` and
    /// after every step.
    pub fn evolve_observed(
        &mut self,
        psi: &WavePacket,
        potential: &impl Potential,
        t_f: f64,
        mut observer: impl FnMut(f64, &WavePacket),
    ) -> Result<Evolution> {
        if !psi.grid.same_space(&self.grid) {
            return Err(Error::GridMismatch);
        }
        if !(t_f > 0.0) {
            return Err(Error::Spec(format!("propagation time must be positive, got {t_f}")));
        }
        let steps = self.grid.time_steps;
        let dt = t_f / steps as f64;
        let n = self.grid.points;
        let scale = 1.0 / n as f64;
        let kinetic: Vec<Complex64> =
            self.wavenumbers.iter().map(|k| Complex64::from_polar(scale, -0.5 * k * k * dt)).collect();
        let positions: Vec<f64> = self.grid.positions().collect();

        let mut state = psi.clone();
        let initial_norm = state.norm();
        let mut previous_norm = initial_norm;
        let mut max_step_drift = 0.0f64;
        let mut leakage = state.edge_probability(EDGE_BAND) + potential.clamped_probability(&state, 0.0);
        let mut half = vec![Complex64::default(); n];
        observer(0.0, &state);

        for step in 0..steps {
            let s_mid = (step as f64 + 0.5) / steps as f64;
            for (h, &x) in half.iter_mut().zip(&positions) {
                *h = Complex64::from_polar(1.0, -0.5 * potential.value(x, s_mid) * dt);
            }
            let amps = &mut state.amplitudes;
            amps.iter_mut().zip(&half).for_each(|(a, h)| *a *= h);
            self.forward.process_with_scratch(amps, &mut self.scratch);
            amps.iter_mut().zip(&kinetic).for_each(|(a, k)| *a *= k);
            self.inverse.process_with_scratch(amps, &mut self.scratch);
            amps.iter_mut().zip(&half).for_each(|(a, h)| *a *= h);

            let s = (step + 1) as f64 / steps as f64;
            let norm = state.norm();
            if !norm.is_finite() {
                return Err(Error::Divergence { s });
            }
            max_step_drift = max_step_drift.max((norm - previous_norm).abs());
            previous_norm = norm;
            if step % 64 == 63 || step + 1 == steps {
                let lost = state.edge_probability(EDGE_BAND) + potential.clamped_probability(&state, s);
                leakage = leakage.max(lost);
            }
            observer(s, &state);
        }
        Ok(Evolution {
            norm_drift: (previous_norm - initial_norm).abs(),
            max_step_drift,
            leakage,
            psi: state,
        })
    }
}

/// Propagates `psi` through the trap following `schedule` for `t_f = u`.
pub fn evolve(
    psi: &WavePacket,
    model: &TrapModel,
    schedule: &TransportSchedule,
    t_f: f64,
) -> Result<Evolution> {
    SplitOperator::new(psi.grid()).evolve(psi, &MovingTrap::new(model, schedule), t_f)
}

/// Outcome of one transport simulation.
#[derive(Debug, Clone)]
pub struct TransportRun {
    pub fidelity: f64,
    pub evolution: Evolution,
}

/// Ground state at 0, transported through `model` along `schedule`, compared
/// with the harmonic ground state at `d`.
pub fn transport_fidelity(
    model: &TrapModel,
    schedule: &TransportSchedule,
    grid: &GridSpec,
) -> Result<TransportRun> {
    let d = model.d_over_a0();
    grid.check_covers(d)?;
    let start = harmonic_ground_state(grid, 0.0)?;
    let target = harmonic_ground_state(grid, d)?;
    let evolution = evolve(&start, model, schedule, schedule.u())?;
    Ok(TransportRun { fidelity: fidelity(&target, &evolution.psi)?, evolution })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityPoint {
    pub xi_over_d: f64,
    pub fidelity: Option<f64>,
    pub status: PointStatus,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySweepResult {
    pub protocol: String,
    pub kind: TrapKind,
    pub u: f64,
    pub points: Vec<FidelityPoint>,
}

/// Transport fidelity for each `xi/d` with the protocol held fixed.
pub fn sweep_fidelity(
    kind: TrapKind,
    protocol: &ProtocolAnsatz,
    u: f64,
    xi_over_d: &[f64],
    grid: &GridSpec,
    settings: &SweepSettings,
) -> Result<FidelitySweepResult> {
    validate_grid(xi_over_d)?;
    grid.check_covers(settings.d_over_a0)?;
    let points = xi_over_d
        .par_iter()
        .map(|&ratio| {
            let run = || -> Result<TransportRun> {
                let model =
                    TrapModel::from_ratios(kind, settings.omega0, settings.mass, settings.d_over_a0, ratio)?;
                let schedule = build_schedule(protocol, &model, u, settings.samples, settings.inversion)?;
                transport_fidelity(&model, &schedule, grid)
            };
            match run() {
                Ok(r) => FidelityPoint {
                    xi_over_d: ratio,
                    fidelity: Some(r.fidelity),
                    status: PointStatus::Ok,
                    warning: r.evolution.warning(),
                },
                Err(e) => FidelityPoint {
                    xi_over_d: ratio,
                    fidelity: None,
                    status: PointStatus::from_error(&e),
                    warning: None,
                },
            }
        })
        .collect();
    Ok(FidelitySweepResult { protocol: protocol.to_string(), kind, u, points })
}
