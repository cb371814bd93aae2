use proptest::prelude::*;
use sta_transport::numerics::{integrate, QuadratureSpec};
use sta_transport::protocols::*;

proptest! {
    #[test]
    fn cosine_family_is_point_symmetric(a1 in -2.0..2.0f64, s in 0.0..=1.0f64) {
        let p = ProtocolAnsatz::cosine_from_a1(a1);
        prop_assert!((p.x1(s) + p.x1(1.0 - s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constrained_families_meet_every_boundary_condition(a1 in -2.0..2.0f64) {
        let (a2, a3) = cosine_constrained(a1);
        prop_assert!(check_boundary_conditions(&ProtocolAnsatz::cosine_odd(a1, a2, a3), 1e-12).all_pass());
        let b2 = sine_constrained(a1);
        prop_assert!((1.0 + 2.0 * std::f64::consts::PI * a1 + 4.0 * std::f64::consts::PI * b2).abs() < 1e-12);
        prop_assert!(check_boundary_conditions(&ProtocolAnsatz::sine_from_a1(a1), 1e-12).all_pass());
    }

    #[test]
    fn derivatives_match_finite_differences(a1 in -1.0..1.0f64, s in 0.05..0.95f64) {
        let p = ProtocolAnsatz::cosine_from_a1(a1);
        let h = 1e-5;
        let dx = (p.x1(s + h) - p.x1(s - h)) / (2.0 * h);
        let ddx = (p.dx1(s + h) - p.dx1(s - h)) / (2.0 * h);
        prop_assert!((dx - p.dx1(s)).abs() < 1e-6);
        prop_assert!((ddx - p.ddx1(s)).abs() < 1e-5);
    }

    #[test]
    fn end_rate_matches_finite_difference_of_correction(u in 6.0..14.0f64, quartic in any::<bool>()) {
        let order = if quartic { Anharmonicity::Quartic } else { Anharmonicity::Cubic };
        let p = ProtocolAnsatz::sine_single();
        let q = QuadratureSpec::default();
        let h = 1e-4;
        let fd = (3.0 * correction(&p, u, 1.0, order, &q)? - 4.0 * correction(&p, u, 1.0 - h, order, &q)?
            + correction(&p, u, 1.0 - 2.0 * h, order, &q)?) / (2.0 * h);
        let exact = f_derivative_at_end(&p, u, order)?;
        prop_assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1e-3), "{fd} vs {exact}");
    }

    #[test]
    fn quadrature_is_exact_for_low_degree(c in prop::array::uniform4(-3.0..3.0f64)) {
        let f = |x: f64| c[0] + c[1] * x + c[2] * x.powi(5) + c[3] * x.powi(9);
        let exact = c[0] + c[1] / 2.0 + c[2] / 6.0 + c[3] / 10.0;
        prop_assert!((integrate(f, 0.0, 1.0, &QuadratureSpec::default())? - exact).abs() < 1e-12);
    }
}

#[test]
fn solver_is_reproducible() {
    let a = solve_cosine_coefficients(reference::U_CUBIC, Anharmonicity::Cubic).unwrap();
    let b = solve_cosine_coefficients(reference::U_CUBIC, Anharmonicity::Cubic).unwrap();
    assert_eq!(a, b);
    let s = solve_sine_coefficients(reference::U_CUBIC).unwrap();
    assert_eq!(s, solve_sine_coefficients(reference::U_CUBIC).unwrap());
}

#[test]
fn solutions_nullify_both_end_conditions() {
    for u in [2.5, 3.0, 3.5, 4.0].map(|k| k * std::f64::consts::PI) {
        for order in [Anharmonicity::Cubic, Anharmonicity::Quartic] {
            let Ok(sol) = solve_cosine_coefficients(u, order) else { continue };
            assert!(!sol.degenerate, "u = {u}");
            assert!(sol.end_value.abs() < 1e-10 && sol.end_rate.abs() < 1e-9, "{sol:?}");
            assert!(check_boundary_conditions(&sol.ansatz, 1e-12).all_pass());
        }
    }
}

#[test]
fn custom_series_reduces_to_cosine_family() {
    let (a2, a3) = cosine_constrained(-0.579);
    let c = ProtocolAnsatz::custom(vec![0.5, -0.579, a2, a3]).unwrap();
    let p = ProtocolAnsatz::cosine_odd(-0.579, a2, a3);
    for k in 0..=20 {
        let s = k as f64 / 20.0;
        assert!((c.x1(s) - p.x1(s)).abs() < 1e-15);
    }
    assert!(ProtocolAnsatz::custom(Vec::new()).is_err());
}
