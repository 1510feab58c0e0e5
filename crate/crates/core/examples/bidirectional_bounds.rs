//! Max-Rains bounds of two-qubit gates, both SDP forms, plus the E_max search.
//!
//! cargo run --example bidirectional_bounds

use biqap::channels::BidirectionalChannel;
use biqap::conic::SolverSettings;
use biqap::measures::{e_max_bidirectional_lower, gamma_bidirectional_both};
use biqap::qcore::{cnot, identity, swap_gate};

fn main() -> biqap::Result<()> {
    let st = SolverSettings::default();
    for (name, gate) in [("id", identity(4)), ("CNOT", cnot()), ("SWAP", swap_gate(2))] {
        let n = BidirectionalChannel::from_unitary(&gate, 2, 2)?;
        let pair = gamma_bidirectional_both(&n, &st)?;
        let search = e_max_bidirectional_lower(&n, 3, 20, 1, &st)?;
        println!(
            "{name:>4}: R_max^(2->2) primal {:.6}  dual {:.6}  (rel. gap {:.1e})  E_max search >= {:.6}",
            pair.primal.value_bits, pair.dual.value_bits, pair.relative_gap, search.report.value_bits
        );
    }
    Ok(())
}
