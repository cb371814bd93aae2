// Fidelity against xi/d for cosine and sine in the cubic trap. A coarser grid
// than the default keeps this to seconds; see recipes/fig4.cfg for the full
// sweep.

use sta_transport::classical::{log_grid, SweepSettings};
use sta_transport::protocols::{reference, solve_cosine_coefficients, Anharmonicity, ProtocolAnsatz};
use sta_transport::quantum::{sweep_fidelity, GridSpec};
use sta_transport::trap::TrapKind;
use sta_transport::DEFAULT_D_OVER_A0;

pub fn main() -> sta_transport::Result<()> {
    let u = reference::U_CUBIC;
    let grid = GridSpec::for_transport(DEFAULT_D_OVER_A0).with_points(1024)?.with_time_steps(5000)?;
    let xi = log_grid(1.0, 3.0, 5);
    let settings = SweepSettings::default();
    let cosine = solve_cosine_coefficients(u, Anharmonicity::Cubic)?.ansatz;

    let a = sweep_fidelity(TrapKind::Cubic, &cosine, u, &xi, &grid, &settings)?;
    let b = sweep_fidelity(TrapKind::Cubic, &ProtocolAnsatz::sine_single(), u, &xi, &grid, &settings)?;
    println!("{:>10} {:>16} {:>16}", "log10 xi/d", "1 - F cosine", "1 - F sine");
    for (p, q) in a.points.iter().zip(&b.points) {
        let infidelity = |f: Option<f64>| f.map_or(f64::NAN, |f| 1.0 - f);
        println!(
            "{:10.1} {:16.4e} {:16.4e}",
            p.xi_over_d.log10(),
            infidelity(p.fidelity),
            infidelity(q.fidelity)
        );
    }
    Ok(())
}
