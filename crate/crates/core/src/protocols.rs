//! Trigonometric ansatz families for the dimensionless mass-center trajectory
//! `x1(s)`, `s = t / t_f`, and the first-order anharmonic corrections they
//! induce.
//!
//! Every family satisfies `x1(0) = 0` and `x1(1) = 1`. The shortcut families
//! additionally have zero velocity and acceleration at both ends, so the
//! particle starts and finishes at rest in the trap bottom.
//!
//! Derivatives are taken term by term; nothing here differentiates numerically.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate, QuadratureSpec, RootFindSpec};

/// Rounded reference coefficients. Kept apart from solver output and only
/// used for comparisons.
pub mod reference {
    /// `(a1, a2, a3)` of the cosine protocol for the cubic trap at `u = 3 pi`.
    pub const CUBIC_COSINE: [f64; 3] = [-0.579, 0.08725, -0.00825];
    /// `(a1, a2, a3)` of the cosine protocol for the quartic trap at `u = 3.00001 pi`.
    pub const QUARTIC_COSINE: [f64; 3] = [-0.513628, -0.0108075, 0.0244358];
    /// `(a1, a2)` of the two-parameter sine protocol at `u = 3 pi`.
    pub const SINE_TWO_PARAM: [f64; 2] = [0.3135, -0.236348];
    /// Transport duration used for the cubic designs.
    pub const U_CUBIC: f64 = 3.0 * std::f64::consts::PI;
    /// Quartic designs step off `3 pi`, where the end value of the quartic
    /// correction vanishes for every symmetric protocol.
    pub const U_QUARTIC: f64 = 3.00001 * std::f64::consts::PI;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `a0 + a1 cos(pi s) + a2 cos(3 pi s) + a3 cos(5 pi s)`
    CosineOdd,
    /// `s - sin(2 pi s) / (2 pi)`
    SineSingle,
    /// `s + a1 sin(2 pi s) + a2 sin(4 pi s)`
    SineTwoParam,
    /// `s - 9 sin(2 pi s) / (10 pi)`: the trajectory followed when the trap
    /// itself moves as `s - sin(2 pi s) / (2 pi)` at `u = 3 pi`.
    ExperimentalSine,
    /// `c0 + sum_j c_j cos((2j - 1) pi s)` with any number of terms.
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::CosineOdd => "cosine_odd",
            Family::SineSingle => "sine_single",
            Family::SineTwoParam => "sine_two_param",
            Family::ExperimentalSine => "experimental_sine",
            Family::Custom => "custom",
        };
        f.write_str(name)
    }
}

/// Which anharmonic correction is being nullified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Anharmonicity {
    Cubic,
    Quartic,
}

impl Anharmonicity {
    /// Power of the acceleration in the correction integrand.
    fn power(self) -> i32 {
        match self {
            Anharmonicity::Cubic => 2,
            Anharmonicity::Quartic => 3,
        }
    }

    /// Prefactor of the correction: `-1/u^3` (cubic) or `+1/u^5` (quartic).
    fn prefactor(self, u: f64) -> f64 {
        match self {
            Anharmonicity::Cubic => -u.powi(-3),
            Anharmonicity::Quartic => u.powi(-5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Harmonic {
    amplitude: f64,
    /// angular frequency in units of `s`
    frequency: f64,
}

/// A trajectory `x1(s)` from one of the trigonometric families.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolAnsatz {
    family: Family,
    coefficients: Vec<f64>,
    constant: f64,
    linear: f64,
    cosines: Vec<Harmonic>,
    sines: Vec<Harmonic>,
}

impl ProtocolAnsatz {
    /// Cosine protocol with explicit `a1, a2, a3` and `a0 = 1/2`.
    pub fn cosine_odd(a1: f64, a2: f64, a3: f64) -> Self {
        Self::cosine_series(Family::CosineOdd, vec![0.5, a1, a2, a3])
    }

    /// Cosine protocol with `a2` and `a3` eliminated by the boundary conditions.
    pub fn cosine_from_a1(a1: f64) -> Self {
        let (a2, a3) = cosine_constrained(a1);
        Self::cosine_odd(a1, a2, a3)
    }

    pub fn sine_single() -> Self {
        Self::sine_series(Family::SineSingle, vec![], -1.0 / (2.0 * PI), 0.0)
    }

    pub fn experimental_sine() -> Self {
        Self::sine_series(Family::ExperimentalSine, vec![], -9.0 / (10.0 * PI), 0.0)
    }

    pub fn sine_two_param(a1: f64, a2: f64) -> Self {
        Self::sine_series(Family::SineTwoParam, vec![a1, a2], a1, a2)
    }

    /// Two-parameter sine protocol with `a2` fixed by the velocity conditions.
    pub fn sine_from_a1(a1: f64) -> Self {
        Self::sine_two_param(a1, sine_constrained(a1))
    }

    /// Odd cosine series `c0 + sum_j c_j cos((2j - 1) pi s)`.
    pub fn custom(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Spec("custom ansatz needs at least one coefficient".into()));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Spec("custom ansatz coefficients must be finite".into()));
        }
        Ok(Self::cosine_series(Family::Custom, coefficients))
    }

    fn cosine_series(family: Family, coefficients: Vec<f64>) -> Self {
        let cosines = coefficients[1..]
            .iter()
            .enumerate()
            .map(|(j, &amplitude)| Harmonic { amplitude, frequency: (2 * j + 1) as f64 * PI })
            .collect();
        Self { family, constant: coefficients[0], linear: 0.0, cosines, sines: Vec::new(), coefficients }
    }

    fn sine_series(family: Family, coefficients: Vec<f64>, first: f64, second: f64) -> Self {
        let mut sines = vec![Harmonic { amplitude: first, frequency: 2.0 * PI }];
        if second != 0.0 {
            sines.push(Harmonic { amplitude: second, frequency: 4.0 * PI });
        }
        Self { family, coefficients, constant: 0.0, linear: 1.0, cosines: Vec::new(), sines }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Free coefficients in family order; empty for the fixed-form families.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Dimensionless position `x1(s)`.
    pub fn x1(&self, s: f64) -> f64 {
        let c: f64 = self.cosines.iter().map(|h| h.amplitude * (h.frequency * s).cos()).sum();
        let n: f64 = self.sines.iter().map(|h| h.amplitude * (h.frequency * s).sin()).sum();
        self.constant + self.linear * s + c + n
    }

    /// `dx1/ds`.
    pub fn dx1(&self, s: f64) -> f64 {
        let c: f64 = self.cosines.iter().map(|h| -h.amplitude * h.frequency * (h.frequency * s).sin()).sum();
        let n: f64 = self.sines.iter().map(|h| h.amplitude * h.frequency * (h.frequency * s).cos()).sum();
        self.linear + c + n
    }

    /// `d^2 x1/ds^2`.
    pub fn ddx1(&self, s: f64) -> f64 {
        let c: f64 =
            self.cosines.iter().map(|h| -h.amplitude * h.frequency.powi(2) * (h.frequency * s).cos()).sum();
        let n: f64 =
            self.sines.iter().map(|h| -h.amplitude * h.frequency.powi(2) * (h.frequency * s).sin()).sum();
        c + n
    }

    /// Largest `|d^2 x1/ds^2|` on a uniform grid of `n` intervals.
    pub fn peak_acceleration(&self, n: usize) -> f64 {
        (0..=n).map(|k| self.ddx1(k as f64 / n as f64).abs()).fold(0.0, f64::max)
    }

    /// True when `x1` never moves backwards (sampled on `n` intervals).
    pub fn is_monotone(&self, n: usize) -> bool {
        (0..=n).all(|k| self.dx1(k as f64 / n as f64) >= -1e-9)
    }

    /// True when `x1` never leaves the segment `[0, 1]` between start and
    /// target (sampled on `n` intervals).
    pub fn stays_within_segment(&self, n: usize) -> bool {
        (0..=n).all(|k| (-1e-9..=1.0 + 1e-9).contains(&self.x1(k as f64 / n as f64)))
    }
}

impl fmt::Display for ProtocolAnsatz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if !self.coefficients.is_empty() {
            let list: Vec<String> = self.coefficients.iter().map(|c| format!("{c:.9}")).collect();
            write!(f, "[{}]", list.join(", "))?;
        }
        Ok(())
    }
}

/// `(a2, a3)` from `a1` such that `a0 = 1/2` satisfies `x1(0) = 0` and
/// `x1''(0) = 0`:
/// `a1 + a2 + a3 = -1/2` and `a1 + 9 a2 + 25 a3 = 0`.
pub fn cosine_constrained(a1: f64) -> (f64, f64) {
    (-25.0 / 32.0 - 1.5 * a1, 0.5 * a1 + 9.0 / 32.0)
}

/// `a2` from `a1` such that `1 + 2 pi a1 + 4 pi a2 = 0`.
pub fn sine_constrained(a1: f64) -> f64 {
    -(1.0 + 2.0 * PI * a1) / (4.0 * PI)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryResidual {
    pub name: &'static str,
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryReport {
    pub tolerance: f64,
    pub residuals: [BoundaryResidual; 6],
}

impl BoundaryReport {
    pub fn all_pass(&self) -> bool {
        self.residuals.iter().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&BoundaryResidual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundaryResidual> {
        self.residuals.iter().filter(|r| !r.pass)
    }
}

impl fmt::Display for BoundaryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "boundary conditions (tolerance {:e}):", self.tolerance)?;
        for r in &self.residuals {
            let flag = if r.pass { "ok" } else { "FAIL" };
            writeln!(f, "  {:<12} {:>+.6e}  {flag}", r.name, r.value)?;
        }
        Ok(())
    }
}

/// Evaluates the six endpoint residuals.
pub fn check_boundary_conditions(ansatz: &ProtocolAnsatz, tolerance: f64) -> BoundaryReport {
    let entry = |name, value: f64| BoundaryResidual { name, value, pass: value.abs() <= tolerance };
    BoundaryReport {
        tolerance,
        residuals: [
            entry("x1(0)", ansatz.x1(0.0)),
            entry("x1(1)-1", ansatz.x1(1.0) - 1.0),
            entry("dx1(0)", ansatz.dx1(0.0)),
            entry("dx1(1)", ansatz.dx1(1.0)),
            entry("ddx1(0)", ansatz.ddx1(0.0)),
            entry("ddx1(1)", ansatz.ddx1(1.0)),
        ],
    }
}

fn check_u(u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::Spec(format!("dimensionless duration u must be positive, got {u}")))
    }
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::Spec(format!("dimensionless time s must lie in [0, 1], got {s}")))
    }
}

/// First-order correction `f(s)` for the given anharmonicity.
pub fn correction(
    ansatz: &ProtocolAnsatz,
    u: f64,
    s: f64,
    order: Anharmonicity,
    quadrature: &QuadratureSpec,
) -> Result<f64> {
    check_u(u)?;
    check_s(s)?;
    let p = order.power();
    let integral = integrate(|t| ansatz.ddx1(t).powi(p) * (u * (s - t)).sin(), 0.0, s, quadrature)?;
    Ok(order.prefactor(u) * integral)
}

/// `f1(s) = -(1/u^3) int_0^s x1''(t)^2 sin(u (s - t)) dt`.
pub fn f1_integral(ansatz: &ProtocolAnsatz, u: f64, s: f64) -> Result<f64> {
    correction(ansatz, u, s, Anharmonicity::Cubic, &QuadratureSpec::default())
}

/// `f2(s) = (1/u^5) int_0^s x1''(t)^3 sin(u (s - t)) dt`.
pub fn f2_integral(ansatz: &ProtocolAnsatz, u: f64, s: f64) -> Result<f64> {
    correction(ansatz, u, s, Anharmonicity::Quartic, &QuadratureSpec::default())
}

/// `df/ds` at `s = 1`.
pub fn f_derivative_at_end(ansatz: &ProtocolAnsatz, u: f64, order: Anharmonicity) -> Result<f64> {
    correction_rate_at_end(ansatz, u, order, &QuadratureSpec::default())
}

pub fn correction_rate_at_end(
    ansatz: &ProtocolAnsatz,
    u: f64,
    order: Anharmonicity,
    quadrature: &QuadratureSpec,
) -> Result<f64> {
    check_u(u)?;
    let p = order.power();
    let integral = integrate(|t| ansatz.ddx1(t).powi(p) * (u * (1.0 - t)).cos(), 0.0, 1.0, quadrature)?;
    Ok(u * order.prefactor(u) * integral)
}

/// Which end condition a coefficient solve drove to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndCondition {
    /// `f(1) = 0`
    Value,
    /// `df/ds(1) = 0`
    Rate,
}

impl fmt::Display for EndCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            EndCondition::Value => "f(1) = 0",
            EndCondition::Rate => "df/ds(1) = 0",
        })
    }
}

/// Outcome of a coefficient solve.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSolution {
    pub ansatz: ProtocolAnsatz,
    pub order: Anharmonicity,
    pub u: f64,
    pub condition: EndCondition,
    /// `f(1)` at the solution.
    pub end_value: f64,
    /// `df/ds(1)` at the solution.
    pub end_rate: f64,
    /// Every root of the driven condition found in the scan, ascending.
    pub candidates: Vec<f64>,
    /// Set when the other end condition is not nullified as well: one free
    /// parameter cannot cancel both at this `u`.
    pub degenerate: bool,
}

impl CoefficientSolution {
    pub fn warning(&self) -> Option<String> {
        self.degenerate.then(|| {
            format!(
                "u = {:.6} pi: {} solved but f(1) = {:.3e}, df/ds(1) = {:.3e}; one free parameter \
                 cannot nullify both",
                self.u / PI,
                self.condition,
                self.end_value,
                self.end_rate
            )
        })
    }
}

const SCAN_RANGE: (f64, f64) = (-2.0, 2.0);
const SCAN_POINTS: usize = 161;
/// The non-driven condition must stay below this fraction of the driven
/// condition's scanned magnitude.
const DEGENERACY_RATIO: f64 = 1e-6;
/// Below this the scanned corrections are quadrature noise.
const VANISHING_SCALE: f64 = 1e-12;

/// Solves for `a1` of the cosine family (with `a2`, `a3` eliminated) so that
/// the first-order final excitation of the given anharmonicity vanishes.
pub fn solve_cosine_coefficients(u: f64, order: Anharmonicity) -> Result<CoefficientSolution> {
    solve_one_parameter(u, order, "cosine_odd", ProtocolAnsatz::cosine_from_a1)
}

/// Solves for `a1` of the two-parameter sine family (`a2` eliminated) so that
/// the first-order cubic excitation vanishes.
pub fn solve_sine_coefficients(u: f64) -> Result<CoefficientSolution> {
    solve_one_parameter(u, Anharmonicity::Cubic, "sine_two_param", ProtocolAnsatz::sine_from_a1)
}

fn solve_one_parameter(
    u: f64,
    order: Anharmonicity,
    label: &str,
    build: fn(f64) -> ProtocolAnsatz,
) -> Result<CoefficientSolution> {
    check_u(u)?;
    let quad = QuadratureSpec::default();
    let value = |a1: f64| correction(&build(a1), u, 1.0, order, &quad);
    // rate is scaled by 1/u so both conditions measure a displacement
    let rate = |a1: f64| correction_rate_at_end(&build(a1), u, order, &quad).map(|r| r / u);

    let (lo, hi) = SCAN_RANGE;
    let grid: Vec<f64> =
        (0..SCAN_POINTS).map(|k| lo + (hi - lo) * k as f64 / (SCAN_POINTS - 1) as f64).collect();
    let values = grid.iter().map(|&a| value(a)).collect::<Result<Vec<_>>>()?;
    let rates = grid.iter().map(|&a| rate(a)).collect::<Result<Vec<_>>>()?;
    let value_scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let rate_scale = rates.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    if value_scale.max(rate_scale) < VANISHING_SCALE {
        return Err(Error::NoSolution {
            objective: format!("{label} ({order:?}, u = {u}): corrections vanish identically"),
            lo,
            hi,
            scanned: grid.into_iter().zip(values).collect(),
        });
    }
    let (condition, scanned, scale) = if value_scale >= rate_scale {
        (EndCondition::Value, values, value_scale)
    } else {
        (EndCondition::Rate, rates, rate_scale)
    };
    let objective = |a1: f64| match condition {
        EndCondition::Value => value(a1),
        EndCondition::Rate => rate(a1),
    };

    let tolerance = 1e-13 * scale.max(f64::MIN_POSITIVE);
    let mut candidates = Vec::new();
    for k in 0..grid.len() - 1 {
        let (g0, g1) = (scanned[k], scanned[k + 1]);
        if g0 == 0.0 {
            candidates.push(grid[k]);
            continue;
        }
        if g0.signum() == g1.signum() || g1 == 0.0 {
            continue;
        }
        let spec = RootFindSpec::new((grid[k], grid[k + 1]), tolerance);
        // objective evaluation cannot fail inside the scanned range
        let root = find_root(|a| objective(a).unwrap_or(f64::NAN), &spec)?;
        candidates.push(root);
    }
    if scanned.last() == Some(&0.0) {
        candidates.push(hi);
    }
    if candidates.is_empty() {
        return Err(Error::NoSolution {
            objective: format!("{label} {condition} ({order:?}, u = {u})"),
            lo,
            hi,
            scanned: grid.into_iter().zip(scanned).collect(),
        });
    }

    // Prefer trajectories that never overshoot the segment, then the gentlest one.
    let chosen = candidates
        .iter()
        .copied()
        .map(|a| {
            let ansatz = build(a);
            (a, !ansatz.stays_within_segment(2000), ansatz.peak_acceleration(2000))
        })
        .min_by(|x, y| (x.1, x.2).partial_cmp(&(y.1, y.2)).unwrap())
        .map(|(a, _, _)| a)
        .expect("non-empty candidate list");

    let ansatz = build(chosen);
    let end_value = correction(&ansatz, u, 1.0, order, &quad)?;
    let end_rate = correction_rate_at_end(&ansatz, u, order, &quad)?;
    let other = match condition {
        EndCondition::Value => end_rate / u,
        EndCondition::Rate => end_value,
    };
    Ok(CoefficientSolution {
        ansatz,
        order,
        u,
        condition,
        end_value,
        end_rate,
        candidates,
        degenerate: other.abs() > DEGENERACY_RATIO * scale,
    })
}
