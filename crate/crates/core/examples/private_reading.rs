//! Private reading of erasure memory cells: fixed ensemble, optimized
//! ensemble and the bidirectional upper bound.
//!
//! cargo run --example private_reading

use biqap::channels::erasure_wiretap_cell;
use biqap::conic::SolverSettings;
use biqap::reading::{
    bidirectional_upper_bound_for_cell, erasure_private_capacity, nonadaptive_rate, optimize_rate, OptimizeConfig, ReadingEnsemble,
};

fn main() -> biqap::Result<()> {
    println!("   q  capacity  uniform-Φ  I(X;E)   optimized  bound");
    for q in [0.0, 0.25, 0.5, 0.75] {
        let cell = erasure_wiretap_cell(2, q)?;
        let fixed = nonadaptive_rate(&cell, &ReadingEnsemble::uniform_max_entangled(&cell))?;
        let best = optimize_rate(&cell, 4, &OptimizeConfig::default())?;
        let bound = bidirectional_upper_bound_for_cell(&cell, 0, 1, &SolverSettings::default())?;
        println!(
            "{q:4.2}  {:8.4}  {:9.4}  {:7.1e}  {:9.4}  {:.4}",
            erasure_private_capacity(2, q)?,
            fixed.rate_bits,
            fixed.components.eavesdropper,
            best.rate_bits,
            bound.rains.value_bits
        );
    }
    Ok(())
}
