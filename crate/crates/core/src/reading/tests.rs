use proptest::prelude::*;

use super::*;
use crate::channels::{erasure_wiretap_cell, IsometricExtension};
use crate::qcore::{haar_unitary, seeded_rng, shannon};

fn random_cell(seed: u64, nx: usize, d: usize, de: usize) -> WiretapMemoryCell {
    let mut rng = seeded_rng(seed);
    let isos = (0..nx)
        .map(|_| {
            let u = haar_unitary(d * de, &mut rng);
            IsometricExtension::new(u.columns(0, d).into_owned(), d, d, de).unwrap()
        })
        .collect();
    WiretapMemoryCell::new(isos).unwrap()
}

#[test]
fn erasure_rate_matches_capacity() {
    for d in [2, 3] {
        for q in [0.0, 0.3, 1.0] {
            let cell = erasure_wiretap_cell(d, q).unwrap();
            let r = nonadaptive_rate(&cell, &ReadingEnsemble::uniform_max_entangled(&cell)).unwrap();
            assert!((r.rate_bits - erasure_private_capacity(d, q).unwrap()).abs() < 1e-6);
            assert!(r.components.eavesdropper.abs() < 1e-9);
        }
    }
}

#[test]
fn capacity_formula_values() {
    assert_eq!(erasure_private_capacity(2, 0.0).unwrap(), 2.0);
    assert_eq!(erasure_private_capacity(4, 1.0).unwrap(), 0.0);
    assert!((erasure_private_capacity(3, 0.5).unwrap() - 3f64.log2()).abs() < 1e-12);
    assert!(erasure_private_capacity(1, 0.5).is_err());
    assert!(erasure_private_capacity(2, 1.5).is_err());
}

#[test]
fn fully_erased_cell_gives_no_positive_rate() {
    let cell = erasure_wiretap_cell(2, 1.0).unwrap();
    let mut rng = seeded_rng(4);
    // with Φ input the reader sees nothing and E sees the maximally mixed state
    let ens = ReadingEnsemble::new(random_simplex(4, &mut rng), max_entangled_ket(2)).unwrap();
    assert!(nonadaptive_rate(&cell, &ens).unwrap().rate_bits.abs() < 1e-10);
    assert!(coherent_rate(&cell, &ens).unwrap().rate_bits.abs() < 1e-10);
    // other inputs leak x to E: the rate is −I(X;E) ≤ 0
    let ens = ReadingEnsemble::new(random_simplex(4, &mut rng), haar_ket(4, &mut rng)).unwrap();
    let r = nonadaptive_rate(&cell, &ens).unwrap();
    assert!(r.components.reader.abs() < 1e-10);
    assert!(r.rate_bits <= 1e-12);
    assert!(optimize_rate(&cell, 3, &OptimizeConfig::default()).unwrap().rate_bits.abs() < 1e-9);
}

#[test]
fn coherent_rate_at_zero_erasure_is_two() {
    let cell = erasure_wiretap_cell(2, 0.0).unwrap();
    let r = coherent_rate(&cell, &ReadingEnsemble::uniform_max_entangled(&cell)).unwrap();
    assert!((r.rate_bits - 2.0).abs() < 1e-9);
}

#[test]
fn classical_cell_oracle() {
    // U^x|i⟩ = |i⟩_B|x⟩_E leaks x entirely: I(X;E) = H(p) and I(X;B) = 0
    let (d, nx) = (2, 2);
    let isos = (0..nx)
        .map(|x| {
            let mut v = CMat::zeros(d * nx, d);
            for i in 0..d {
                v[(i * nx + x, i)] = C64::from(1.0);
            }
            IsometricExtension::new(v, d, d, nx).unwrap()
        })
        .collect();
    let cell = WiretapMemoryCell::new(isos).unwrap();
    let p = vec![0.3, 0.7];
    let ens = ReadingEnsemble::new(p.clone(), max_entangled_ket(d)).unwrap();
    let r = nonadaptive_rate(&cell, &ens).unwrap();
    assert!(r.components.reader.abs() < 1e-10);
    assert!((r.components.eavesdropper - shannon(&p)).abs() < 1e-10);
    assert!((r.rate_bits + shannon(&p)).abs() < 1e-10);
}

#[test]
fn optimizer_reaches_erasure_capacity() {
    let cell = erasure_wiretap_cell(2, 0.3).unwrap();
    let r = optimize_rate(&cell, 8, &OptimizeConfig::default()).unwrap();
    assert!(r.rate_bits >= 1.4 - 1e-3, "{} {:?}", r.rate_bits, r.trace);
    assert!(r.trace.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn single_letter_cell_has_zero_rate() {
    let full = erasure_wiretap_cell(2, 0.2).unwrap();
    let cell = WiretapMemoryCell::new(vec![full.isometries[0].clone()]).unwrap();
    let r = optimize_rate(&cell, 3, &OptimizeConfig::default()).unwrap();
    assert!(r.rate_bits.abs() < 1e-12);
}

#[test]
fn optimized_rate_below_bidirectional_bound() {
    for q in [0.0, 0.7] {
        let cell = erasure_wiretap_cell(2, q).unwrap();
        let rate = optimize_rate(&cell, 4, &OptimizeConfig::default()).unwrap().rate_bits;
        let b = bidirectional_upper_bound_for_cell(&cell, 0, 1, &SolverSettings::default()).unwrap();
        assert!(rate <= b.rains.value_bits + 1e-3, "q = {q}: {rate} > {}", b.rains.value_bits);
    }
}

#[test]
fn dimension_mismatch_is_rejected() {
    let cell = erasure_wiretap_cell(2, 0.2).unwrap();
    let ens = ReadingEnsemble::new(vec![0.5, 0.5], max_entangled_ket(2)).unwrap();
    assert!(nonadaptive_rate(&cell, &ens).is_err());
    assert!(ReadingEnsemble::new(vec![0.6, 0.6], max_entangled_ket(2)).is_err());
}

#[test]
fn simplex_projection_oracle() {
    assert_eq!(project_simplex(&[0.2, 0.3, 0.5]), vec![0.2, 0.3, 0.5]);
    let p = project_simplex(&[2.0, 0.0]);
    assert_eq!(p, vec![1.0, 0.0]);
    let p = project_simplex(&[0.5, 0.5, 0.5]);
    assert!(p.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coherent_identity_holds_on_random_cells(seed in 0u64..10_000) {
        let cell = random_cell(seed, 3, 2, 3);
        let mut rng = seeded_rng(seed ^ 0xabc);
        let ens = ReadingEnsemble::new(random_simplex(3, &mut rng), haar_ket(4, &mut rng)).unwrap();
        let a = nonadaptive_rate(&cell, &ens).unwrap();
        let b = coherent_rate(&cell, &ens).unwrap();
        prop_assert!((a.rate_bits - b.rate_bits).abs() < 1e-9);
        prop_assert!((a.rate_bits - (a.components.reader - a.components.eavesdropper)).abs() < 1e-10);
    }

    #[test]
    fn rate_is_invariant_under_relabeling(seed in 0u64..10_000) {
        let cell = random_cell(seed, 3, 2, 2);
        let mut rng = seeded_rng(seed + 1);
        let ens = ReadingEnsemble::new(random_simplex(3, &mut rng), haar_ket(4, &mut rng)).unwrap();
        let perm = [2, 0, 1];
        let cell2 = WiretapMemoryCell::new(perm.iter().map(|&k| cell.isometries[k].clone()).collect()).unwrap();
        let ens2 = ReadingEnsemble::new(perm.iter().map(|&k| ens.p[k]).collect(), ens.input.clone()).unwrap();
        let a = nonadaptive_rate(&cell, &ens).unwrap().rate_bits;
        let b = nonadaptive_rate(&cell2, &ens2).unwrap().rate_bits;
        prop_assert!((a - b).abs() < 1e-10);
    }
}
