//! Harmonic, cubic and quartic traps, and the inverse problem: which trap
//! trajectory `x0(s)` makes the particle follow a prescribed `x1(s)`.
//!
//! `TrapModel` works in SI units. Schedules are dimensionless: positions in
//! units of the transport distance `d`, time as `s = t / t_f`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::real_cubic_root;
use crate::protocols::{Anharmonicity, ProtocolAnsatz};

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrapKind {
    Harmonic,
    Cubic,
    Quartic,
}

impl TrapKind {
    pub fn anharmonicity(self) -> Option<Anharmonicity> {
        match self {
            TrapKind::Harmonic => None,
            TrapKind::Cubic => Some(Anharmonicity::Cubic),
            TrapKind::Quartic => Some(Anharmonicity::Quartic),
        }
    }
}

impl fmt::Display for TrapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            TrapKind::Harmonic => "harmonic",
            TrapKind::Cubic => "cubic",
            TrapKind::Quartic => "quartic",
        })
    }
}

impl FromStr for TrapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "harmonic" => Ok(TrapKind::Harmonic),
            "cubic" => Ok(TrapKind::Cubic),
            "quartic" => Ok(TrapKind::Quartic),
            other => Err(Error::Config(format!("unknown trap kind {other:?}"))),
        }
    }
}

/// A moving trap `V(x - x0(t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapModel {
    pub kind: TrapKind,
    /// rad/s
    pub omega0: f64,
    /// kg
    pub mass: f64,
    /// m; infinite for the harmonic kind
    pub xi: f64,
    /// m
    pub d: f64,
}

impl TrapModel {
    pub fn new(kind: TrapKind, omega0: f64, mass: f64, xi: f64, d: f64) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Spec(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("omega0", omega0)?;
        positive("mass", mass)?;
        positive("d", d)?;
        let xi = match kind {
            TrapKind::Harmonic => f64::INFINITY,
            _ => {
                positive("xi", xi)?;
                xi
            }
        };
        Ok(Self { kind, omega0, mass, xi, d })
    }

    /// Builds a trap from the dimensionless ratios `d / a0` and `xi / d`.
    pub fn from_ratios(
        kind: TrapKind,
        omega0: f64,
        mass: f64,
        d_over_a0: f64,
        xi_over_d: f64,
    ) -> Result<Self> {
        if !(d_over_a0 > 0.0) {
            return Err(Error::Spec(format!("d/a0 must be positive, got {d_over_a0}")));
        }
        let a0 = (HBAR / (mass * omega0)).sqrt();
        let d = d_over_a0 * a0;
        Self::new(kind, omega0, mass, xi_over_d * d, d)
    }

    /// Ground-state width `a0 = sqrt(hbar / (m omega0))`.
    pub fn harmonic_length(&self) -> f64 {
        (HBAR / (self.mass * self.omega0)).sqrt()
    }

    pub fn d_over_a0(&self) -> f64 {
        self.d / self.harmonic_length()
    }

    /// `d / xi`; zero for the harmonic kind.
    pub fn d_over_xi(&self) -> f64 {
        match self.kind {
            TrapKind::Harmonic => 0.0,
            _ => self.d / self.xi,
        }
    }

    /// `m omega0 d^2 / hbar`, converting the dimensionless energy bracket to
    /// units of `hbar omega0`.
    pub fn energy_scale(&self) -> f64 {
        self.mass * self.omega0 * self.d * self.d / HBAR
    }

    /// Potential energy in J at position `x` with the trap bottom at `x0`.
    pub fn potential(&self, x: f64, x0: f64) -> f64 {
        let z = x - x0;
        let k = self.mass * self.omega0 * self.omega0;
        let harmonic = 0.5 * k * z * z;
        match self.kind {
            TrapKind::Harmonic => harmonic,
            TrapKind::Cubic => harmonic + k * z.powi(3) / (3.0 * self.xi),
            TrapKind::Quartic => harmonic + k * z.powi(4) / (4.0 * self.xi * self.xi),
        }
    }

    /// Acceleration in m/s^2 of a particle at `x` with the trap bottom at `x0`.
    pub fn acceleration(&self, x: f64, x0: f64) -> f64 {
        let z = x - x0;
        let w2 = self.omega0 * self.omega0;
        match self.kind {
            TrapKind::Harmonic => -w2 * z,
            TrapKind::Cubic => -w2 * z - w2 * z * z / self.xi,
            TrapKind::Quartic => -w2 * z - w2 * z.powi(3) / (self.xi * self.xi),
        }
    }

    /// Trap position that gives acceleration `xddot` at `x` in the cubic trap,
    /// on the branch continuous with `x0 = x` at rest.
    pub fn invert_exact_cubic(&self, x: f64, xddot: f64) -> Result<f64> {
        let radicand = 1.0 - 4.0 * xddot / (self.xi * self.omega0 * self.omega0);
        if radicand < 0.0 {
            return Err(Error::TrapDepthExceeded { radicand });
        }
        Ok(x + 0.5 * self.xi * (1.0 - radicand.sqrt()))
    }

    /// Trap position that gives acceleration `xddot` at `x` in the quartic trap.
    pub fn invert_exact_quartic(&self, x: f64, xddot: f64) -> Result<f64> {
        // x - x0 = xi * eta with eta^3 + eta + xddot / (omega0^2 xi) = 0
        let eta = real_cubic_root(1.0, xddot / (self.omega0 * self.omega0 * self.xi))?;
        Ok(x - self.xi * eta)
    }

    /// Exact inversion for any kind.
    pub fn invert_exact(&self, x: f64, xddot: f64) -> Result<f64> {
        match self.kind {
            TrapKind::Harmonic => Ok(x + xddot / (self.omega0 * self.omega0)),
            TrapKind::Cubic => self.invert_exact_cubic(x, xddot),
            TrapKind::Quartic => self.invert_exact_quartic(x, xddot),
        }
    }

    /// Dimensionless restoring term: `z + (d/xi) z^2` or `z + (d/xi)^2 z^3`,
    /// with `z = (x - x0)/d`. The equation of motion is `x'' = -u^2 * restoring(z)`.
    pub fn scaled_restoring(&self, z: f64) -> f64 {
        let r = self.d_over_xi();
        match self.kind {
            TrapKind::Harmonic => z,
            TrapKind::Cubic => z + r * z * z,
            TrapKind::Quartic => z + r * r * z.powi(3),
        }
    }

    /// Dimensionless potential `z^2/2 + (d/xi) z^3/3` or `z^2/2 + (d/xi)^2 z^4/4`.
    pub fn scaled_potential(&self, z: f64) -> f64 {
        let r = self.d_over_xi();
        let harmonic = 0.5 * z * z;
        match self.kind {
            TrapKind::Harmonic => harmonic,
            TrapKind::Cubic => harmonic + r * z.powi(3) / 3.0,
            TrapKind::Quartic => harmonic + r * r * z.powi(4) / 4.0,
        }
    }
}

/// Trap-center trajectory `x0(s)` sampled on a uniform grid over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportSchedule {
    u: f64,
    values: Vec<f64>,
}

impl TransportSchedule {
    pub const DEFAULT_SAMPLES: usize = 2001;

    pub fn new(u: f64, values: Vec<f64>) -> Result<Self> {
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::Spec(format!("u must be positive, got {u}")));
        }
        if values.len() < 2 {
            return Err(Error::Spec(format!("schedule needs at least 2 samples, got {}", values.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Spec(format!("schedule sample {k} is not finite")));
        }
        Ok(Self { u, values })
    }

    pub fn from_fn(u: f64, samples: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if samples < 2 {
            return Err(Error::Spec(format!("schedule needs at least 2 samples, got {samples}")));
        }
        let step = 1.0 / (samples - 1) as f64;
        Self::new(u, (0..samples).map(|k| f(k as f64 * step)).collect())
    }

    /// Trap at rest at `x0`.
    pub fn stationary(u: f64, x0: f64) -> Result<Self> {
        Self::new(u, vec![x0, x0])
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(s, x0)` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let step = 1.0 / (self.values.len() - 1) as f64;
        self.values.iter().enumerate().map(move |(k, &v)| (k as f64 * step, v))
    }

    /// `x0(s)` by local four-point cubic interpolation, `s` clamped to `[0, 1]`.
    pub fn at(&self, s: f64) -> f64 {
        let n = self.values.len();
        let pos = s.clamp(0.0, 1.0) * (n - 1) as f64;
        if n < 4 {
            let k = (pos.floor() as usize).min(n - 2);
            let t = pos - k as f64;
            return self.values[k] * (1.0 - t) + self.values[k + 1] * t;
        }
        let k = (pos.floor() as usize).clamp(1, n - 3) - 1;
        let t = pos - k as f64;
        let [y0, y1, y2, y3] = [self.values[k], self.values[k + 1], self.values[k + 2], self.values[k + 3]];
        // Lagrange basis on nodes 0, 1, 2, 3
        let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
        let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
        let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
        let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
        y0 * l0 + y1 * l1 + y2 * l2 + y3 * l3
    }
}

/// How the trap trajectory is derived from the designed `x1(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inversion {
    /// Harmonic equation of motion; anharmonicity is handled by the design.
    #[default]
    Perturbative,
    /// Full anharmonic equation of motion.
    Exact,
}

impl FromStr for Inversion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perturbative" => Ok(Inversion::Perturbative),
            "exact" => Ok(Inversion::Exact),
            other => Err(Error::Config(format!("unknown inversion mode {other:?}"))),
        }
    }
}

pub fn build_schedule(
    ansatz: &ProtocolAnsatz,
    model: &TrapModel,
    u: f64,
    samples: usize,
    inversion: Inversion,
) -> Result<TransportSchedule> {
    match inversion {
        Inversion::Perturbative => invert_harmonic(ansatz, u, samples),
        Inversion::Exact => invert_exact(ansatz, model, u, samples),
    }
}

/// Trap trajectory from the harmonic equation of motion,
/// `x0 = x1 + x1'' / u^2`.
pub fn invert_harmonic(ansatz: &ProtocolAnsatz, u: f64, samples: usize) -> Result<TransportSchedule> {
    TransportSchedule::from_fn(u, samples, |s| ansatz.x1(s) + ansatz.ddx1(s) / (u * u))
}

/// Trap trajectory that makes the full anharmonic trap reproduce `x1` exactly.
pub fn invert_exact(
    ansatz: &ProtocolAnsatz,
    model: &TrapModel,
    u: f64,
    samples: usize,
) -> Result<TransportSchedule> {
    if samples < 2 {
        return Err(Error::Spec(format!("schedule needs at least 2 samples, got {samples}")));
    }
    let accel_scale = model.d * model.omega0 * model.omega0 / (u * u);
    let step = 1.0 / (samples - 1) as f64;
    let values = (0..samples)
        .map(|k| {
            let s = k as f64 * step;
            let x = model.d * ansatz.x1(s);
            model.invert_exact(x, accel_scale * ansatz.ddx1(s)).map(|x0| x0 / model.d)
        })
        .collect::<Result<Vec<_>>>()?;
    TransportSchedule::new(u, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn model(kind: TrapKind) -> TrapModel {
        TrapModel::new(kind, 2.0 * PI * 1.41e5, 40.0 * 1.667e-27, 2.0e-6, 1.0e-7).unwrap()
    }

    #[test]
    fn validation() {
        assert!(TrapModel::new(TrapKind::Cubic, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(TrapModel::new(TrapKind::Harmonic, 1.0, 1.0, 0.0, 1.0).is_ok());
        assert!(TrapModel::new(TrapKind::Quartic, -1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn potential_values() {
        for kind in [TrapKind::Harmonic, TrapKind::Cubic, TrapKind::Quartic] {
            assert_eq!(model(kind).potential(3e-7, 3e-7), 0.0);
        }
        let m = model(TrapKind::Cubic);
        let v = m.potential(-1.5 * m.xi, 0.0);
        assert!(v.abs() < 1e-12 * m.mass * m.omega0.powi(2) * m.xi.powi(2));

        let m = model(TrapKind::Quartic);
        let expected = 0.75 * m.mass * m.omega0.powi(2) * m.xi.powi(2);
        assert!((m.potential(m.xi, 0.0) / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn acceleration_values() {
        let m = model(TrapKind::Cubic);
        assert_eq!(m.acceleration(1e-7, 1e-7), 0.0);
        let a = m.acceleration(-m.xi, 0.0);
        assert!(a.abs() < 1e-12 * m.omega0.powi(2) * m.xi);
        let h = model(TrapKind::Harmonic);
        assert!((h.acceleration(1e-8, 0.0) + h.omega0.powi(2) * 1e-8).abs() < 1e-20 * h.omega0.powi(2));
    }

    #[test]
    fn exact_cubic_inversion() {
        let m = model(TrapKind::Cubic);
        let w2 = m.omega0 * m.omega0;
        assert_eq!(m.invert_exact_cubic(1e-7, 0.0).unwrap(), 1e-7);
        // zero radicand: rounding in it is amplified by the square root
        let edge = m.invert_exact_cubic(0.0, m.xi * w2 / 4.0).unwrap();
        assert!((edge - 0.5 * m.xi).abs() < 1e-7 * m.xi);
        let quarter = m.invert_exact_cubic(0.0, 3.0 * m.xi * w2 / 16.0).unwrap();
        assert!((quarter - 0.25 * m.xi).abs() < 1e-15 * m.xi);
        assert!((m.acceleration(0.0, quarter) / (3.0 * m.xi * w2 / 16.0) - 1.0).abs() < 1e-12);
        assert!(matches!(m.invert_exact_cubic(0.0, m.xi * w2), Err(Error::TrapDepthExceeded { .. })));
    }

    #[test]
    fn exact_quartic_inversion() {
        let m = model(TrapKind::Quartic);
        let w2 = m.omega0 * m.omega0;
        assert_eq!(m.invert_exact_quartic(2e-7, 0.0).unwrap(), 2e-7);
        let x0 = m.invert_exact_quartic(0.0, -2.0 * w2 * m.xi).unwrap();
        assert!((x0 + m.xi).abs() < 1e-12 * m.xi);
    }

    #[test]
    fn harmonic_schedules() {
        let u = 3.0 * PI;
        let single = invert_harmonic(&ProtocolAnsatz::sine_single(), u, 201).unwrap();
        for (s, x0) in single.samples() {
            let expected = s - (5.0 / 9.0) * (2.0 * PI * s).sin() / (2.0 * PI);
            assert!((x0 - expected).abs() < 1e-14, "s = {s}");
        }
        let exp = invert_harmonic(&ProtocolAnsatz::experimental_sine(), u, 201).unwrap();
        for (s, x0) in exp.samples() {
            let expected = s - (2.0 * PI * s).sin() / (2.0 * PI);
            assert!((x0 - expected).abs() < 1e-14, "s = {s}");
        }
        let cos = invert_harmonic(&ProtocolAnsatz::cosine_from_a1(-0.579), u, 11).unwrap();
        assert!(cos.values()[0].abs() < 1e-12);
        assert!((cos.values()[10] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_inversion_in_harmonic_trap_matches_perturbative() {
        let u = 3.0 * PI;
        let ansatz = ProtocolAnsatz::cosine_from_a1(-0.579);
        let m = model(TrapKind::Harmonic);
        let a = invert_harmonic(&ansatz, u, 101).unwrap();
        let b = invert_exact(&ansatz, &m, u, 101).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolation_is_cubic_exact() {
        let s = TransportSchedule::from_fn(1.0, 11, |s| 1.0 + s - 2.0 * s * s + 0.5 * s.powi(3)).unwrap();
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let exact = 1.0 + t - 2.0 * t * t + 0.5 * t.powi(3);
            assert!((s.at(t) - exact).abs() < 1e-13, "t = {t}");
        }
        assert_eq!(s.at(-1.0), s.values()[0]);
        assert_eq!(s.at(2.0), *s.values().last().unwrap());
        let short = TransportSchedule::new(1.0, vec![0.0, 1.0]).unwrap();
        assert!((short.at(0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn schedule_validation() {
        assert!(TransportSchedule::new(1.0, vec![0.0]).is_err());
        assert!(TransportSchedule::new(0.0, vec![0.0, 1.0]).is_err());
        assert!(TransportSchedule::new(1.0, vec![0.0, f64::NAN]).is_err());
    }
}
