// Transport the harmonic ground state through a harmonic and a cubic trap and
// compare with the displaced ground state.

use sta_transport::protocols::{reference, solve_cosine_coefficients, Anharmonicity};
use sta_transport::quantum::{
    harmonic_ground_state, transport_fidelity, GridSpec, MovingTrap, SplitOperator,
};
use sta_transport::trap::{build_schedule, Inversion, TrapKind, TrapModel};
use sta_transport::{DEFAULT_D_OVER_A0, DEFAULT_MASS, DEFAULT_OMEGA0};

pub fn main() -> sta_transport::Result<()> {
    let u = reference::U_CUBIC;
    let ansatz = solve_cosine_coefficients(u, Anharmonicity::Cubic)?.ansatz;
    let grid = GridSpec::for_transport(DEFAULT_D_OVER_A0);

    for (kind, xi_over_d) in [(TrapKind::Harmonic, 1.0), (TrapKind::Cubic, 10.0)] {
        let model = TrapModel::from_ratios(kind, DEFAULT_OMEGA0, DEFAULT_MASS, DEFAULT_D_OVER_A0, xi_over_d)?;
        let schedule = build_schedule(&ansatz, &model, u, 2001, Inversion::Perturbative)?;
        let run = transport_fidelity(&model, &schedule, &grid)?;
        println!(
            "{kind:>8}: F = {:.12}, <x> = {:.6} a0, norm drift {:.1e}",
            run.fidelity,
            run.evolution.psi.mean_position(),
            run.evolution.norm_drift
        );
    }

    // Follow the centroid along the way with an observer.
    let model =
        TrapModel::from_ratios(TrapKind::Harmonic, DEFAULT_OMEGA0, DEFAULT_MASS, DEFAULT_D_OVER_A0, 1.0)?;
    let schedule = build_schedule(&ansatz, &model, u, 2001, Inversion::Perturbative)?;
    let start = harmonic_ground_state(&grid, 0.0)?;
    let mut step = 0;
    SplitOperator::new(&grid).evolve_observed(&start, &MovingTrap::new(&model, &schedule), u, |s, psi| {
        if step % 4000 == 0 {
            println!(
                "  s = {s:.1}: <x> = {:8.4} a0, trap at {:8.4} a0",
                psi.mean_position(),
                schedule.at(s) * DEFAULT_D_OVER_A0
            );
        }
        step += 1;
    })?;
    Ok(())
}
