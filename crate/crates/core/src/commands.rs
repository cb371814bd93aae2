//! The four run modes behind the command-line tool, as library functions.
//!
//! Each writes its CSV to the given writer and returns a report whose
//! `Display` is the human-readable summary. Floats in CSV output carry 17
//! significant digits; rows come out in a fixed order.

use std::fmt;
use std::io::Write;

use crate::classical::{self, PointStatus};
use crate::config::{ProtocolChoice, RunConfig, SweepTarget};
use crate::error::Result;
use crate::protocols::{
    check_boundary_conditions, f1_integral, f2_integral, f_derivative_at_end, reference, Anharmonicity,
    BoundaryReport, CoefficientSolution, ProtocolAnsatz,
};
use crate::quantum::{self, harmonic_ground_state, MovingTrap, SplitOperator};
use crate::trap::{build_schedule, TrapKind};

/// Tolerance of the boundary report printed by `design`.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_owned()
    }
}

/// `u` used for quartic sweeps: the cosine solve is resonant at exactly
/// `3 pi`, so that value is nudged to `3.00001 pi`.
pub fn quartic_duration(u: f64) -> f64 {
    if (u - reference::U_CUBIC).abs() < 1e-9 {
        reference::U_QUARTIC
    } else {
        u
    }
}

#[derive(Debug, Clone)]
pub struct DesignReport {
    pub protocol: ProtocolChoice,
    pub trap: TrapKind,
    pub u: f64,
    pub ansatz: ProtocolAnsatz,
    pub solution: Option<CoefficientSolution>,
    pub boundary: BoundaryReport,
    /// `f1(1)` and `df1/ds(1)`
    pub f1_end: (f64, f64),
    /// `f2(1)` and `df2/ds(1)`
    pub f2_end: (f64, f64),
}

impl DesignReport {
    pub fn warnings(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .boundary
            .failures()
            .map(|r| format!("boundary condition {} violated: {:.6}", r.name, r.value))
            .collect();
        out.extend(self.solution.as_ref().and_then(|s| s.warning()));
        out
    }
}

impl fmt::Display for DesignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "protocol {} ({}), trap {}, u = {:.8}",
            self.protocol,
            self.ansatz.family(),
            self.trap,
            self.u
        )?;
        let coefficients: Vec<String> =
            self.ansatz.coefficients().iter().map(|c| format!("{c:.9}")).collect();
        writeln!(f, "coefficients [{}]", coefficients.join(", "))?;
        if let Some(s) = &self.solution {
            let roots: Vec<String> = s.candidates.iter().map(|c| format!("{c:.6}")).collect();
            writeln!(f, "solved {} (a1 candidates: {})", s.condition, roots.join(", "))?;
        }
        write!(f, "{}", self.boundary)?;
        writeln!(f, "f1(1) = {:.6e}, df1/ds(1) = {:.6e}", self.f1_end.0, self.f1_end.1)?;
        write!(f, "f2(1) = {:.6e}, df2/ds(1) = {:.6e}", self.f2_end.0, self.f2_end.1)
    }
}

/// Solves the protocol, reports its end conditions and writes the trajectory
/// `s, x1, dx1_ds, ddx1_ds2, x0`.
pub fn design(config: &RunConfig, csv: &mut dyn Write) -> Result<DesignReport> {
    config.validate()?;
    let (ansatz, solution) = config.protocol.resolve(config.trap, config.u)?;
    let model = config.model()?;
    let schedule = build_schedule(&ansatz, &model, config.u, config.schedule_samples, config.inversion)?;

    writeln!(csv, "s,x1,dx1_ds,ddx1_ds2,x0")?;
    for (s, x0) in schedule.samples() {
        writeln!(
            csv,
            "{},{},{},{},{}",
            num(s),
            num(ansatz.x1(s)),
            num(ansatz.dx1(s)),
            num(ansatz.ddx1(s)),
            num(x0)
        )?;
    }
    let u = config.u;
    Ok(DesignReport {
        protocol: config.protocol,
        trap: config.trap,
        u,
        boundary: check_boundary_conditions(&ansatz, BOUNDARY_TOLERANCE),
        f1_end: (f1_integral(&ansatz, u, 1.0)?, f_derivative_at_end(&ansatz, u, Anharmonicity::Cubic)?),
        f2_end: (f2_integral(&ansatz, u, 1.0)?, f_derivative_at_end(&ansatz, u, Anharmonicity::Quartic)?),
        ansatz,
        solution,
    })
}

#[derive(Debug, Clone)]
pub struct ClassicalReport {
    pub protocol: ProtocolChoice,
    pub trap: TrapKind,
    pub xi_over_d: f64,
    /// `Delta E / (hbar omega0)`
    pub residual_energy: f64,
    pub final_x: f64,
}

impl fmt::Display for ClassicalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "protocol {}, trap {}, xi/d = {:e}: final x/d = {:.12}, residual energy dE/(hbar omega0) = {:.6e}",
            self.protocol, self.trap, self.xi_over_d, self.final_x, self.residual_energy
        )
    }
}

/// Integrates the classical motion and writes `s, x, v, x0,
/// instantaneous_energy` (positions in units of `d`, `v = dx/ds`, energy in
/// `hbar omega0`).
pub fn classical(config: &RunConfig, csv: &mut dyn Write) -> Result<ClassicalReport> {
    config.validate()?;
    let (ansatz, _) = config.protocol.resolve(config.trap, config.u)?;
    let model = config.model()?;
    let schedule = build_schedule(&ansatz, &model, config.u, config.schedule_samples, config.inversion)?;
    let trajectory = classical::integrate(&model, &schedule, config.ode_steps)?;

    writeln!(csv, "s,x,v,x0,instantaneous_energy")?;
    for (p, e) in trajectory.samples.iter().zip(trajectory.energies()) {
        writeln!(csv, "{},{},{},{},{}", num(p.s), num(p.x), num(p.v), num(p.x0), num(e))?;
    }
    Ok(ClassicalReport {
        protocol: config.protocol,
        trap: config.trap,
        xi_over_d: config.xi_over_d,
        residual_energy: classical::residual_energy(&trajectory),
        final_x: trajectory.last().x,
    })
}

#[derive(Debug, Clone)]
pub struct QuantumReport {
    pub protocol: ProtocolChoice,
    pub trap: TrapKind,
    pub xi_over_d: f64,
    pub fidelity: f64,
    pub norm_drift: f64,
    pub max_step_drift: f64,
    pub leakage: f64,
    /// `(s, <x>/a0)` for each recorded snapshot.
    pub centroids: Vec<(f64, f64)>,
    pub warning: Option<String>,
}

impl fmt::Display for QuantumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "protocol {}, trap {}, xi/d = {:e}: fidelity = {:.12}, norm drift = {:.3e} (max per step {:.3e}), leakage = {:.3e}",
            self.protocol, self.trap, self.xi_over_d, self.fidelity, self.norm_drift, self.max_step_drift, self.leakage
        )?;
        for (s, c) in &self.centroids {
            write!(f, "\nsnapshot s = {s}: <x>/a0 = {c:.9}")?;
        }
        Ok(())
    }
}

/// Transports the harmonic ground state and reports the fidelity with the
/// displaced ground state. Densities at `config.snapshots` are written as
/// `s, x_over_a0, abs_psi_squared`; nothing is written without snapshots.
pub fn quantum(config: &RunConfig, csv: &mut dyn Write) -> Result<QuantumReport> {
    config.validate()?;
    let (ansatz, _) = config.protocol.resolve(config.trap, config.u)?;
    let model = config.model()?;
    let schedule = build_schedule(&ansatz, &model, config.u, config.schedule_samples, config.inversion)?;
    let grid = config.grid()?;
    let start = harmonic_ground_state(&grid, 0.0)?;
    let target = harmonic_ground_state(&grid, config.d_over_a0)?;

    let steps = grid.time_steps;
    let wanted: Vec<usize> = config.snapshots.iter().map(|s| (s * steps as f64).round() as usize).collect();
    let mut captured: Vec<Option<(Vec<f64>, f64)>> = vec![None; wanted.len()];
    let mut step = 0usize;
    let evolution = SplitOperator::new(&grid).evolve_observed(
        &start,
        &MovingTrap::new(&model, &schedule),
        schedule.u(),
        |_, psi| {
            for (slot, &k) in captured.iter_mut().zip(&wanted) {
                if k == step {
                    *slot = Some((psi.density(), psi.mean_position()));
                }
            }
            step += 1;
        },
    )?;

    let mut centroids = Vec::with_capacity(wanted.len());
    if !wanted.is_empty() {
        writeln!(csv, "s,x_over_a0,abs_psi_squared")?;
    }
    for (&s, slot) in config.snapshots.iter().zip(&captured) {
        let (density, centroid) = slot.as_ref().expect("every snapshot step is visited");
        for (x, rho) in grid.positions().zip(density) {
            writeln!(csv, "{},{},{}", num(s), num(x), num(*rho))?;
        }
        centroids.push((s, *centroid));
    }
    Ok(QuantumReport {
        protocol: config.protocol,
        trap: config.trap,
        xi_over_d: config.xi_over_d,
        fidelity: quantum::fidelity(&target, &evolution.psi)?,
        norm_drift: evolution.norm_drift,
        max_step_drift: evolution.max_step_drift,
        leakage: evolution.leakage,
        warning: evolution.warning(),
        centroids,
    })
}

/// One curve of a sweep.
#[derive(Debug, Clone)]
pub struct SweepSeries {
    pub protocol: ProtocolChoice,
    pub trap: TrapKind,
    pub u: f64,
    /// `(xi/d, value, status, warning)`
    pub points: Vec<(f64, Option<f64>, PointStatus, Option<String>)>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub target: SweepTarget,
    pub series: Vec<SweepSeries>,
}

impl SweepReport {
    pub fn series(&self, protocol: ProtocolChoice, trap: TrapKind) -> Option<&SweepSeries> {
        self.series.iter().find(|s| s.protocol == protocol && s.trap == trap)
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for series in &self.series {
            for (ratio, _, status, warning) in &series.points {
                if !status.is_ok() {
                    out.push(format!("{} {} xi/d = {ratio:e}: {status}", series.protocol, series.trap));
                }
                if let Some(w) = warning {
                    out.push(format!("{} {} xi/d = {ratio:e}: {w}", series.protocol, series.trap));
                }
            }
        }
        out
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} sweep", self.target)?;
        for s in &self.series {
            let values: Vec<f64> = s.points.iter().filter_map(|p| p.1).collect();
            let lo = values.iter().copied().fold(f64::INFINITY, |a, b| a.min(b.abs()));
            let hi = values.iter().copied().fold(0.0f64, |a, b| a.max(b.abs()));
            write!(
                f,
                "\n  {} in {} trap, u = {:.6} pi: {}/{} points ok, |value| in [{lo:.3e}, {hi:.3e}]",
                s.protocol,
                s.trap,
                s.u / std::f64::consts::PI,
                values.len(),
                s.points.len()
            )?;
        }
        Ok(())
    }
}

/// Curves making up each sweep target.
pub fn sweep_plan(target: SweepTarget, u: f64) -> Vec<(ProtocolChoice, TrapKind, f64)> {
    use ProtocolChoice::{Cosine, Sine, Sine2};
    let uq = quartic_duration(u);
    match target {
        SweepTarget::Fig2 => {
            vec![(Cosine, TrapKind::Cubic, u), (Sine, TrapKind::Cubic, u), (Sine2, TrapKind::Cubic, u)]
        }
        SweepTarget::Fig3 => vec![(Cosine, TrapKind::Quartic, uq), (Sine, TrapKind::Quartic, uq)],
        SweepTarget::Fig4 => vec![
            (Cosine, TrapKind::Cubic, u),
            (Sine, TrapKind::Cubic, u),
            (Cosine, TrapKind::Quartic, uq),
            (Sine, TrapKind::Quartic, uq),
        ],
    }
}

/// Runs a figure sweep over the configured `xi/d` grid. Residual-energy
/// sweeps write `protocol, trap, log10_xi_over_d, value, sign, status` with
/// `value = |dE|/(hbar omega0)`; the fidelity sweep writes the same columns
/// without `sign`.
pub fn sweep(config: &RunConfig, target: SweepTarget, csv: &mut dyn Write) -> Result<SweepReport> {
    config.validate()?;
    let grid = config.sweep_grid();
    let settings = config.sweep_settings();
    let quantum_grid = match target {
        SweepTarget::Fig4 => Some(config.grid()?),
        _ => None,
    };

    let mut series = Vec::new();
    for (protocol, trap, u) in sweep_plan(target, config.u) {
        let (ansatz, _) = protocol.resolve(trap, u)?;
        let points = match &quantum_grid {
            None => classical::sweep_xi(trap, &ansatz, u, &grid, &settings)?
                .points
                .into_iter()
                .map(|p| (p.xi_over_d, p.value, p.status, None))
                .collect(),
            Some(qgrid) => quantum::sweep_fidelity(trap, &ansatz, u, &grid, qgrid, &settings)?
                .points
                .into_iter()
                .map(|p| (p.xi_over_d, p.fidelity, p.status, p.warning))
                .collect(),
        };
        series.push(SweepSeries { protocol, trap, u, points });
    }

    let with_sign = quantum_grid.is_none();
    if with_sign {
        writeln!(csv, "protocol,trap,log10_xi_over_d,value,sign,status")?;
    } else {
        writeln!(csv, "protocol,trap,log10_xi_over_d,value,status")?;
    }
    for s in &series {
        for (ratio, value, status, _) in &s.points {
            let shown = value.map(|v| num(v.abs())).unwrap_or_default();
            let sign = match value {
                Some(v) if *v < 0.0 => "-",
                Some(_) => "+",
                None => "",
            };
            let status = field(&status.to_string());
            if with_sign {
                writeln!(csv, "{},{},{},{shown},{sign},{status}", s.protocol, s.trap, num(ratio.log10()))?;
            } else {
                writeln!(csv, "{},{},{},{shown},{status}", s.protocol, s.trap, num(ratio.log10()))?;
            }
        }
    }
    Ok(SweepReport { target, series })
}
