// Solve the free coefficients of each protocol family and show how well the
// boundary conditions and the first-order corrections are met.
//
//     cargo run --example design_protocols

use sta_transport::protocols::{
    check_boundary_conditions, f1_integral, f_derivative_at_end, reference, solve_cosine_coefficients,
    solve_sine_coefficients, Anharmonicity, ProtocolAnsatz,
};

pub fn main() -> sta_transport::Result<()> {
    let cubic = solve_cosine_coefficients(reference::U_CUBIC, Anharmonicity::Cubic)?;
    let quartic = solve_cosine_coefficients(reference::U_QUARTIC, Anharmonicity::Quartic)?;
    let sine2 = solve_sine_coefficients(reference::U_CUBIC)?;

    for (label, solution) in [("cubic cosine", &cubic), ("quartic cosine", &quartic), ("sine2", &sine2)] {
        println!(
            "{label:>14}: {}  [{:?}, {}, roots {:?}]",
            solution.ansatz, solution.order, solution.condition, solution.candidates
        );
        println!("{:>14}  f(1) = {:.2e}, df/ds(1) = {:.2e}", "", solution.end_value, solution.end_rate);
    }

    // The single sine needs no solve, but leaves a cubic correction behind.
    let sine = ProtocolAnsatz::sine_single();
    let u = reference::U_CUBIC;
    println!(
        "sine_single: f1(1) = {:.6e}, df2/ds(1) = {:.6e}",
        f1_integral(&sine, u, 1.0)?,
        f_derivative_at_end(&sine, u, Anharmonicity::Quartic)?
    );

    // The sine used in experiments starts and stops with a finite velocity.
    let report = check_boundary_conditions(&ProtocolAnsatz::experimental_sine(), 1e-12);
    print!("experimental sine\n{report}");
    Ok(())
}
