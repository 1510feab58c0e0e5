//! Rains relative entropy and the PPT relative entropy of entanglement by
//! Frank-Wolfe over an isotropic family.
//!
//! cargo run --example rains_frank_wolfe

use biqap::measures::{rains_relative_entropy, relative_entropy_of_entanglement_ppt, sandwiched_rains, BipartiteCut, FwConfig};
use biqap::qcore::{max_entangled, maximally_mixed, C64};

fn main() -> biqap::Result<()> {
    let cut = BipartiteCut::two(2, 2);
    let cfg = FwConfig::default();
    println!("   p   Rains    E_PPT    R~_2     FW iters");
    for k in 0..=5 {
        let p = k as f64 / 5.0;
        let rho = max_entangled(2) * C64::from(p) + maximally_mixed(4) * C64::from(1.0 - p);
        let (r, trace) = rains_relative_entropy(&rho, &cut, &cfg)?;
        let (e, _) = relative_entropy_of_entanglement_ppt(&rho, &cut, &cfg)?;
        let (r2, _, _) = sandwiched_rains(&rho, &cut, 2.0, &cfg)?;
        println!("{p:4.1}  {:.5}  {:.5}  {:.5}  {}", r.value_bits, e.value_bits, r2.value_bits, trace.values.len());
    }
    Ok(())
}
