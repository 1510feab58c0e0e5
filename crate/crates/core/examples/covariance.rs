//! Covariance of the erasure channel and its environment representation,
//! plus the bicovariance candidates of the erasure memory cell.
//!
//! cargo run --example covariance

use biqap::channels::{bicovariance_candidates_for_cell, choi_from_kraus, environment_rep, erasure_kraus, verify_covariance, GroupRep};
use biqap::qcore::{hw_group, CMat, C64};

fn main() -> biqap::Result<()> {
    for d in [2, 3] {
        let out = GroupRep::new(
            hw_group(d)
                .into_iter()
                .map(|s| {
                    let mut m = CMat::zeros(d + 1, d + 1);
                    m.view_mut((0, 0), (d, d)).copy_from(&s);
                    m[(d, d)] = C64::from(1.0);
                    m
                })
                .collect(),
            vec![],
        )?;
        let ks = erasure_kraus(d, 0.4);
        let cov = verify_covariance(&choi_from_kraus(&ks)?, &GroupRep::heisenberg_weyl(d), &out)?;
        let env = environment_rep(&ks, &GroupRep::heisenberg_weyl(d), &out)?;
        println!("erasure d={d}: covariance residual {:.1e}, W_g residual {:.1e}, unitarity {:.1e}", cov.residual, env.residual, env.unitarity);
    }
    for (label, r) in bicovariance_candidates_for_cell(2) {
        println!("cell d=2, {label}: {}", if r.is_ok() { "bicovariant" } else { "does not factorize" });
    }
    Ok(())
}
