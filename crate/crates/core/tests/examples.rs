// Runs the quick examples so they stay in step with the library.

mod design_protocols {
    include!("../examples/design_protocols.rs");
}
mod trap_inversion {
    include!("../examples/trap_inversion.rs");
}
mod classical_transport {
    include!("../examples/classical_transport.rs");
}
mod residual_energy_sweep {
    include!("../examples/residual_energy_sweep.rs");
}

#[test]
fn examples_run() {
    design_protocols::main().unwrap();
    trap_inversion::main().unwrap();
    classical_transport::main().unwrap();
    residual_energy_sweep::main().unwrap();
}
