// Derive the trap trajectory x0(s) from a designed mass-center trajectory,
// first with the harmonic equation of motion, then with the full cubic one.

use sta_transport::protocols::{reference, solve_cosine_coefficients, Anharmonicity};
use sta_transport::trap::{build_schedule, Inversion, TrapKind, TrapModel};
use sta_transport::{DEFAULT_D_OVER_A0, DEFAULT_MASS, DEFAULT_OMEGA0};

pub fn main() -> sta_transport::Result<()> {
    let u = reference::U_CUBIC;
    let ansatz = solve_cosine_coefficients(u, Anharmonicity::Cubic)?.ansatz;
    let model =
        TrapModel::from_ratios(TrapKind::Cubic, DEFAULT_OMEGA0, DEFAULT_MASS, DEFAULT_D_OVER_A0, 10.0)?;

    let harmonic = build_schedule(&ansatz, &model, u, 2001, Inversion::Perturbative)?;
    let exact = build_schedule(&ansatz, &model, u, 2001, Inversion::Exact)?;

    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "s", "x1", "x0 harm", "x0 exact", "diff");
    for k in (0..=2000).step_by(200) {
        let s = k as f64 / 2000.0;
        let (a, b) = (harmonic.at(s), exact.at(s));
        println!("{s:6.2} {:12.8} {a:12.8} {b:12.8} {:12.3e}", ansatz.x1(s), b - a);
    }

    // Round trip: the trap's own force law maps x0 back onto x1''.
    let s = 0.3;
    let x = ansatz.x1(s) * model.d;
    let xddot = ansatz.ddx1(s) * model.d * (model.omega0 / u).powi(2);
    let x0 = model.invert_exact(x, xddot)?;
    println!(
        "round trip at s = {s}: {:.3e} relative",
        (model.acceleration(x, x0) - xddot).abs() / xddot.abs()
    );
    Ok(())
}
