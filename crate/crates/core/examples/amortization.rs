//! Amortization check: R_max gain through a gate never exceeds R_max^(2->2).
//!
//! cargo run --example amortization

use biqap::channels::BidirectionalChannel;
use biqap::conic::SolverSettings;
use biqap::measures::amortization_check_rains;
use biqap::qcore::{cnot, swap_gate};

fn main() -> biqap::Result<()> {
    for (name, gate) in [("CNOT", cnot()), ("SWAP", swap_gate(2))] {
        let n = BidirectionalChannel::from_unitary(&gate, 2, 2)?;
        let rep = amortization_check_rains(&n, 20, 3, &SolverSettings::default())?;
        let best = rep.differences.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{name}: bound {:.4}, largest gain {best:.4} over {} states, violations {}",
            rep.bound,
            rep.differences.len(),
            rep.violations
        );
    }
    Ok(())
}
