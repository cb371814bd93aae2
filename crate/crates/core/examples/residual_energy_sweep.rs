// Residual energy against xi/d for the cosine and sine protocols in the
// cubic trap, and how far apart they sit.

use sta_transport::classical::{log_grid, sweep_xi, SweepSettings};
use sta_transport::protocols::{reference, solve_cosine_coefficients, Anharmonicity, ProtocolAnsatz};
use sta_transport::trap::TrapKind;

pub fn main() -> sta_transport::Result<()> {
    let u = reference::U_CUBIC;
    let grid = log_grid(1.0, 5.0, 9);
    let settings = SweepSettings::default();
    let cosine = solve_cosine_coefficients(u, Anharmonicity::Cubic)?.ansatz;
    let a = sweep_xi(TrapKind::Cubic, &cosine, u, &grid, &settings)?;
    let b = sweep_xi(TrapKind::Cubic, &ProtocolAnsatz::sine_single(), u, &grid, &settings)?;

    println!("{:>10} {:>12} {:>12} {:>10}", "log10 xi/d", "cosine", "sine", "ratio");
    for (p, q) in a.points.iter().zip(&b.points) {
        match (p.value, q.value) {
            (Some(c), Some(s)) => {
                println!("{:10.1} {c:12.4e} {s:12.4e} {:10.3e}", p.log10_xi_over_d(), s.abs() / c.abs())
            }
            _ => println!("{:10.1} {} / {}", p.log10_xi_over_d(), p.status, q.status),
        }
    }
    Ok(())
}
