//! Teleportation simulation of CNOT from its Choi state, with the diamond
//! distance to the original channel.
//!
//! cargo run --example teleport_simulation

use biqap::channels::{product_output_reps, BidirectionalChannel, GroupRep};
use biqap::conic::SolverSettings;
use biqap::protocols::{simulation_report, teleport_simulate};
use biqap::qcore::{cnot, swap_gate};

fn main() -> biqap::Result<()> {
    let pauli = GroupRep::pauli();
    for (name, gate) in [("CNOT", cnot()), ("SWAP", swap_gate(2))] {
        let n = BidirectionalChannel::from_unitary(&gate, 2, 2)?;
        let reps = product_output_reps(&gate, &pauli, &pauli)?;
        let rep = simulation_report(&n, &reps, &SolverSettings::default())?;
        println!("{name}: {}", serde_json::to_string(&rep).unwrap());
    }

    // a non-bicovariant channel is refused
    let t = biqap::qcore::c(0.0, std::f64::consts::FRAC_PI_4).exp();
    let mut phase = biqap::qcore::identity(4);
    phase[(3, 3)] = t;
    let n = BidirectionalChannel::from_unitary(&phase, 2, 2)?;
    let reps = biqap::channels::BiReps { u: pauli.clone(), v: pauli.clone(), w: vec![pauli.elements.clone(); 4], t: vec![pauli.elements.clone(); 4] };
    match teleport_simulate(&n, &reps) {
        Ok(_) => println!("controlled-T: simulated"),
        Err(e) => println!("controlled-T: {e}"),
    }
    Ok(())
}
