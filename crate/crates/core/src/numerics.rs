//! Scalar numerical kernels shared by the rest of the crate: composite
//! Gauss-Legendre quadrature, a bracketing root finder and a closed-form
//! real root of the depressed cubic.
//!
//! Everything here is a pure function of its arguments.

use crate::error::{Error, Result};

/// Fixed-order Gauss-Legendre rule applied on every panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    GaussLegendre3,
    GaussLegendre5,
}

impl Scheme {
    /// Highest polynomial degree integrated exactly on a single panel.
    pub fn exactness_degree(self) -> usize {
        match self {
            Scheme::GaussLegendre3 => 5,
            Scheme::GaussLegendre5 => 9,
        }
    }

    /// Convergence order in the panel width for smooth integrands.
    pub fn order(self) -> usize {
        self.exactness_degree() + 1
    }

    fn rule(self) -> &'static [(f64, f64)] {
        // (node, weight) on [-1, 1]
        const GL3: [(f64, f64); 3] = [
            (-0.774_596_669_241_483_4, 0.555_555_555_555_555_6),
            (0.0, 8.0 / 9.0),
            (0.774_596_669_241_483_4, 0.555_555_555_555_555_6),
        ];
        const GL5: [(f64, f64); 5] = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.0, 0.568_888_888_888_888_9),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        match self {
            Scheme::GaussLegendre3 => &GL3,
            Scheme::GaussLegendre5 => &GL5,
        }
    }
}

/// Composite quadrature: `panels` equal sub-intervals, each integrated with `scheme`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub panels: usize,
    pub scheme: Scheme,
}

impl QuadratureSpec {
    pub const DEFAULT_PANELS: usize = 2000;

    pub fn new(panels: usize, scheme: Scheme) -> Result<Self> {
        if panels < 2 {
            return Err(Error::Spec(format!("quadrature needs at least 2 panels, got {panels}")));
        }
        Ok(Self { panels, scheme })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { panels: Self::DEFAULT_PANELS, scheme: Scheme::GaussLegendre5 }
    }
}

/// Integrates `f` over `[a, b]`.
///
/// A non-finite integrand value aborts with [`Error::NonFinite`] carrying the
/// offending abscissa.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a <= b) {
        return Err(Error::Spec(format!("integration bounds out of order: [{a}, {b}]")));
    }
    if spec.panels < 2 {
        return Err(Error::Spec(format!("quadrature needs at least 2 panels, got {}", spec.panels)));
    }
    if a == b {
        return Ok(0.0);
    }
    let width = (b - a) / spec.panels as f64;
    let half = 0.5 * width;
    let rule = spec.scheme.rule();
    let mut total = 0.0;
    for panel in 0..spec.panels {
        let mid = a + (panel as f64 + 0.5) * width;
        let mut acc = 0.0;
        for &(node, weight) in rule {
            let x = mid + half * node;
            let value = f(x);
            if !value.is_finite() {
                return Err(Error::NonFinite { abscissa: x });
            }
            acc += weight * value;
        }
        total += half * acc;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootFindSpec {
    pub abs_tolerance: f64,
    pub max_iterations: usize,
    pub bracket: (f64, f64),
}

impl RootFindSpec {
    pub fn new(bracket: (f64, f64), abs_tolerance: f64) -> Self {
        Self { abs_tolerance, max_iterations: 200, bracket }
    }
}

/// Finds `x` in `spec.bracket` with `|g(x)| <= spec.abs_tolerance`.
///
/// Illinois-modified false position, falling back to bisection whenever the
/// interpolated point stalls or leaves the bracket.
pub fn find_root<G>(g: G, spec: &RootFindSpec) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if !(spec.abs_tolerance > 0.0) {
        return Err(Error::Spec("root tolerance must be positive".into()));
    }
    let (mut lo, mut hi) = spec.bracket;
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut g_lo = g(lo);
    let mut g_hi = g(hi);
    if !g_lo.is_finite() {
        return Err(Error::NonFinite { abscissa: lo });
    }
    if !g_hi.is_finite() {
        return Err(Error::NonFinite { abscissa: hi });
    }
    if g_lo.abs() <= spec.abs_tolerance {
        return Ok(lo);
    }
    if g_hi.abs() <= spec.abs_tolerance {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Bracket { lo, hi, g_lo, g_hi });
    }

    // side of the last retained endpoint: -1 lo, +1 hi
    let mut last_side = 0i8;
    for _ in 0..spec.max_iterations {
        let mut x = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        let width = hi - lo;
        if !(x > lo + 0.01 * width && x < hi - 0.01 * width) {
            x = 0.5 * (lo + hi);
        }
        if x <= lo || x >= hi {
            // bracket collapsed to adjacent floats
            let (best, residual) = if g_lo.abs() < g_hi.abs() { (lo, g_lo.abs()) } else { (hi, g_hi.abs()) };
            if residual <= spec.abs_tolerance {
                return Ok(best);
            }
            return Err(Error::Convergence { iterations: spec.max_iterations, residual });
        }
        let gx = g(x);
        if !gx.is_finite() {
            return Err(Error::NonFinite { abscissa: x });
        }
        if gx.abs() <= spec.abs_tolerance {
            return Ok(x);
        }
        if gx.signum() == g_lo.signum() {
            lo = x;
            g_lo = gx;
            if last_side == -1 {
                g_hi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = x;
            g_hi = gx;
            if last_side == 1 {
                g_lo *= 0.5;
            }
            last_side = 1;
        }
    }
    let residual = g_lo.abs().min(g_hi.abs());
    Err(Error::Convergence { iterations: spec.max_iterations, residual })
}

/// Unique real root of `y^3 + p*y + q = 0`.
///
/// Closed form (hyperbolic branch when `p > 0`, Cardano otherwise) followed
/// by one Newton correction. Cubics with three real roots are rejected.
pub fn real_cubic_root(p: f64, q: f64) -> Result<f64> {
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::Spec(format!("non-finite cubic coefficients p = {p}, q = {q}")));
    }
    let y = if p > 0.0 {
        let scale = (p / 3.0).sqrt();
        let arg = 1.5 * q / (p * scale);
        -2.0 * scale * (arg.asinh() / 3.0).sinh()
    } else if p == 0.0 {
        (-q).cbrt()
    } else {
        let disc = 0.25 * q * q + (p / 3.0).powi(3);
        if disc <= 0.0 {
            return Err(Error::AmbiguousCubic { p, q });
        }
        let sq = disc.sqrt();
        (-0.5 * q + sq).cbrt() + (-0.5 * q - sq).cbrt()
    };
    let slope = 3.0 * y * y + p;
    if slope != 0.0 {
        Ok(y - (y * y * y + p * y + q) / slope)
    } else {
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_monomial() {
        let spec = QuadratureSpec::default();
        assert!((integrate(|_| 1.0, 0.0, 1.0, &spec).unwrap() - 1.0).abs() < 1e-12);
        assert!((integrate(|x| x.powi(5), 0.0, 1.0, &spec).unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn exactness_degree_on_coarsest_grid() {
        for scheme in [Scheme::GaussLegendre3, Scheme::GaussLegendre5] {
            let spec = QuadratureSpec::new(2, scheme).unwrap();
            let k = scheme.exactness_degree() as i32;
            let got = integrate(|x| x.powi(k), 0.0, 1.0, &spec).unwrap();
            let exact = 1.0 / (k as f64 + 1.0);
            assert!(((got - exact) / exact).abs() < 1e-12, "{scheme:?}: {got}");
        }
    }

    #[test]
    fn oscillatory_integrand() {
        // antiderivative -cos(3 pi x) / (3 pi)
        let exact = 2.0 / (3.0 * PI);
        let got = integrate(|x| (3.0 * PI * x).sin(), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!(((got - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn refinement_follows_scheme_order() {
        let exact = 2.0 / (3.0 * PI);
        let err = |panels| {
            let spec = QuadratureSpec::new(panels, Scheme::GaussLegendre3).unwrap();
            (integrate(|x| (3.0 * PI * x).sin(), 0.0, 1.0, &spec).unwrap() - exact).abs()
        };
        let ratio = err(4) / err(8);
        // sixth order: 2^6 = 64
        assert!(ratio > 48.0 && ratio < 80.0, "ratio {ratio}");
    }

    #[test]
    fn non_finite_integrand_reports_abscissa() {
        let spec = QuadratureSpec::new(4, Scheme::GaussLegendre3).unwrap();
        match integrate(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, &spec) {
            Err(Error::NonFinite { abscissa }) => assert!(abscissa > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reversed_bounds_rejected() {
        assert!(matches!(integrate(|x| x, 1.0, 0.0, &QuadratureSpec::default()), Err(Error::Spec(_))));
    }

    #[test]
    fn roots_of_simple_functions() {
        let spec = RootFindSpec::new((0.0, 1.0), 1e-13);
        assert!((find_root(|x| x - 0.25, &spec).unwrap() - 0.25).abs() < 1e-12);
        assert!((find_root(|x| (PI * x).cos(), &spec).unwrap() - 0.5).abs() < 1e-12);
        let spec = RootFindSpec::new((1.0, 2.0), 1e-13);
        let r = find_root(|x| x * x * x - 2.0, &spec).unwrap();
        assert!((r * r * r - 2.0).abs() <= 1e-13);
        assert!((r - 1.259_921_049_894_873).abs() < 1e-12);
    }

    #[test]
    fn missing_sign_change() {
        let spec = RootFindSpec::new((0.0, 1.0), 1e-12);
        assert!(matches!(find_root(|x| x * x + 1.0, &spec), Err(Error::Bracket { .. })));
    }

    #[test]
    fn iteration_budget_exhausted() {
        let spec = RootFindSpec { abs_tolerance: 1e-300, max_iterations: 3, bracket: (0.0, 3.0) };
        assert!(matches!(find_root(|x| x.powi(3) - 2.0, &spec), Err(Error::Convergence { .. })));
    }

    #[test]
    fn cubic_examples() {
        assert_eq!(real_cubic_root(1.0, 0.0).unwrap(), 0.0);
        assert!((real_cubic_root(1.0, -2.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((real_cubic_root(3.0, -4.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((real_cubic_root(0.0, -8.0).unwrap() - 2.0).abs() < 1e-12);
        // p < 0 with one real root: (y - 3)(y^2 + 3y + 6) = y^3 - 3y - 18
        assert!((real_cubic_root(-3.0, -18.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn three_real_roots_rejected() {
        // y^3 - y = y (y - 1)(y + 1)
        assert!(matches!(real_cubic_root(-1.0, 0.0), Err(Error::AmbiguousCubic { .. })));
    }
}
