//! Relative entropy, sandwiched Rényi, max- and hypothesis-testing divergences.
//!
//! cargo run --example divergences

use biqap::conic::SolverSettings;
use biqap::divergences::{d_max_eigen, d_max_sdp, hypothesis_testing, relative_entropy, sandwiched_renyi};
use biqap::qcore::{random_density, seeded_rng};

fn main() -> biqap::Result<()> {
    let mut rng = seeded_rng(2);
    let rho = random_density(3, &mut rng);
    let sigma = random_density(3, &mut rng);
    let st = SolverSettings::default();
    println!("D      = {:.6}", relative_entropy(&rho, &sigma)?.value);
    for a in [0.5, 0.9, 1.1, 2.0, 5.0] {
        println!("D~_{a:<4} = {:.6}", sandwiched_renyi(&rho, &sigma, a)?.value);
    }
    println!("D_max  = {:.6} (eigen)  {:.6} (SDP)", d_max_eigen(&rho, &sigma)?, d_max_sdp(&rho, &sigma, &st)?.value);
    for eps in [0.01, 0.1, 0.3] {
        println!("D_h^{eps:<4} = {:.6}", hypothesis_testing(&rho, &sigma, eps, &st)?.value);
    }
    Ok(())
}
