// Classical transport of a particle through a cubic trap with each protocol,
// and the residual energy left at the end.

use sta_transport::classical::{integrate, residual_energy, DEFAULT_STEPS};
use sta_transport::config::ProtocolChoice;
use sta_transport::protocols::reference;
use sta_transport::trap::{build_schedule, Inversion, TrapKind, TrapModel};
use sta_transport::{DEFAULT_D_OVER_A0, DEFAULT_MASS, DEFAULT_OMEGA0};

pub fn main() -> sta_transport::Result<()> {
    let u = reference::U_CUBIC;
    for xi_over_d in [10.0, 100.0] {
        let model = TrapModel::from_ratios(
            TrapKind::Cubic,
            DEFAULT_OMEGA0,
            DEFAULT_MASS,
            DEFAULT_D_OVER_A0,
            xi_over_d,
        )?;
        println!("xi/d = {xi_over_d}");
        for choice in ProtocolChoice::ALL {
            let (ansatz, _) = choice.resolve(model.kind, u)?;
            let schedule = build_schedule(&ansatz, &model, u, 2001, Inversion::Perturbative)?;
            let trajectory = integrate(&model, &schedule, DEFAULT_STEPS)?;
            let peak = trajectory.energies().fold(0.0f64, f64::max);
            println!(
                "  {choice:>12}: dE = {:+.4e} hbar omega0 (peak energy {peak:.1})",
                residual_energy(&trajectory)
            );
        }
    }
    Ok(())
}
