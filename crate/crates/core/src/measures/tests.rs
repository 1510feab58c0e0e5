use proptest::prelude::*;

use super::*;
use crate::channels::{choi_from_kraus, depolarizing_kraus, erasure_kraus, BidirectionalChannel, ChannelChoi};
use crate::qcore::{
    cnot, haar_unitary, identity, kron, max_entangled, maximally_mixed, partial_transpose, random_density, seeded_rng,
    swap_gate, C64,
};

fn tight() -> SolverSettings {
    SolverSettings::default()
}

fn isotropic(d: usize, f: f64) -> CMat {
    let phi = max_entangled(d);
    let n = d * d;
    &phi * C64::from(f) + (identity(n) - &phi) * C64::from((1.0 - f) / (n as f64 - 1.0))
}

fn werner(p: f64) -> CMat {
    // p Φ₂ + (1 − p) I/4
    max_entangled(2) * C64::from(p) + maximally_mixed(4) * C64::from(1.0 - p)
}

#[test]
fn w_state_of_product_is_one() {
    let mut rng = seeded_rng(3);
    let rho = kron(&random_density(2, &mut rng), &random_density(3, &mut rng));
    let r = w_state(&rho, &BipartiteCut::two(2, 3), &tight()).unwrap();
    assert!(r.value_bits.abs() < 1e-6, "{}", r.value_bits);
}

#[test]
fn w_state_of_maximally_entangled_is_log_d() {
    for d in 2..=3 {
        let r = w_state(&max_entangled(d), &BipartiteCut::two(d, d), &tight()).unwrap();
        assert!((r.value_bits - (d as f64).log2()).abs() < 1e-6);
    }
}

#[test]
fn w_state_isotropic_matches_closed_form() {
    // isotropic states: W = max(1, d F)
    let d = 2;
    for f in [0.3, 0.5, 0.7, 0.95] {
        let r = w_state(&isotropic(d, f), &BipartiteCut::two(d, d), &tight()).unwrap();
        let expect = (d as f64 * f).max(1.0);
        assert!((r.linear.unwrap() - expect).abs() < 1e-6, "F = {f}: {} vs {expect}", r.linear.unwrap());
    }
}

#[test]
fn gamma_channel_identity_and_depolarizing() {
    let id = ChannelChoi::identity(3);
    let r = gamma_channel(&id, &tight()).unwrap();
    assert!((r.linear.unwrap() - 3.0).abs() < 1e-6);
    let dep = choi_from_kraus(&depolarizing_kraus(2, 1.0)).unwrap();
    let r = gamma_channel(&dep, &tight()).unwrap();
    assert!((r.linear.unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn erasure_gamma_agrees_with_one_sided_form() {
    for q in [0.0, 0.4, 1.0] {
        let ch = choi_from_kraus(&erasure_kraus(2, q)).unwrap();
        let g1 = gamma_channel(&ch, &tight()).unwrap().linear.unwrap();
        let n = BidirectionalChannel::one_sided(&ch).unwrap();
        let g2 = gamma_bidirectional(&n, Form::Dual, &tight()).unwrap().linear.unwrap();
        assert!((g1 - g2).abs() < 1e-6, "q = {q}: {g1} vs {g2}");
        // flag block and identity block are orthogonal on the output: Γ = (1 − q) d + q
        assert!((g1 - (2.0 * (1.0 - q) + q)).abs() < 1e-6, "q = {q}: {g1}");
    }
}

#[test]
fn gamma_bidirectional_of_identity_is_one() {
    let n = BidirectionalChannel::from_unitary(&identity(4), 2, 2).unwrap();
    let pair = gamma_bidirectional_both(&n, &tight()).unwrap();
    assert!((pair.dual.linear.unwrap() - 1.0).abs() < 1e-6);
    assert!(pair.relative_gap < 1e-6);
}

#[test]
fn gamma_bidirectional_of_swap_is_four() {
    let n = BidirectionalChannel::from_unitary(&swap_gate(2), 2, 2).unwrap();
    let pair = gamma_bidirectional_both(&n, &tight()).unwrap();
    assert!((pair.primal.linear.unwrap() - 4.0).abs() < 1e-6);
    assert!((pair.dual.linear.unwrap() - 4.0).abs() < 1e-6);
}

#[test]
fn cnot_primal_and_dual_agree() {
    let n = BidirectionalChannel::from_unitary(&cnot(), 2, 2).unwrap();
    let pair = gamma_bidirectional_both(&n, &tight()).unwrap();
    assert!(pair.relative_gap < 1e-6, "{pair:?}");
    // CNOT creates at most one ebit from product inputs and can double one
    assert!(pair.dual.value_bits > 1.0 - 1e-6 && pair.dual.value_bits < 2.0 + 1e-6);
}

#[test]
fn local_channels_have_zero_bidirectional_rains() {
    let mut rng = seeded_rng(8);
    let ma = ChannelChoi::from_unitary(&haar_unitary(2, &mut rng));
    let mb = choi_from_kraus(&depolarizing_kraus(2, 0.3)).unwrap();
    let n = BidirectionalChannel::local(&ma, &mb).unwrap();
    let r = gamma_bidirectional(&n, Form::Dual, &tight()).unwrap();
    assert!(r.value_bits.abs() < 1e-6);
}

#[test]
fn one_sided_reduces_to_channel_gamma() {
    let ch = choi_from_kraus(&depolarizing_kraus(2, 0.4)).unwrap();
    let g = gamma_channel(&ch, &tight()).unwrap().value_bits;
    let n = BidirectionalChannel::one_sided(&ch).unwrap();
    let pair = gamma_bidirectional_both(&n, &tight()).unwrap();
    assert!((pair.dual.value_bits - g).abs() < 1e-6);
    assert!((pair.primal.value_bits - g).abs() < 1e-6);
}

#[test]
fn e_max_of_bell_state_is_one() {
    let r = e_max_ppt(&max_entangled(2), &BipartiteCut::two(2, 2), &tight()).unwrap();
    assert!((r.value_bits - 1.0).abs() < 1e-6);
}

#[test]
fn e_max_dominates_r_max() {
    let mut rng = seeded_rng(12);
    for _ in 0..4 {
        let rho = random_density(4, &mut rng);
        let cut = BipartiteCut::two(2, 2);
        let e = e_max_ppt(&rho, &cut, &tight()).unwrap().value_bits;
        let r = w_state(&rho, &cut, &tight()).unwrap().value_bits;
        assert!(e >= r - 1e-6, "{e} < {r}");
    }
}

#[test]
fn rains_of_bell_state_is_one() {
    let (r, trace) = rains_relative_entropy(&max_entangled(2), &BipartiteCut::two(2, 2), &FwConfig::default()).unwrap();
    assert!((r.value_bits - 1.0).abs() < 1e-3, "{}", r.value_bits);
    assert!(trace.gaps.last().unwrap() <= &1e-3);
}

#[test]
fn rains_of_ppt_state_is_zero() {
    let (r, _) = rains_relative_entropy(&werner(0.2), &BipartiteCut::two(2, 2), &FwConfig::default()).unwrap();
    assert_eq!(r.value_bits, 0.0);
}

#[test]
fn werner_rains_matches_closed_form() {
    // two qubits: R = E_R = 1 − h((1 + 3p)/4) above the PPT threshold p = 1/3
    let h = |x: f64| -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
    for p in [0.5, 0.8] {
        let cut = BipartiteCut::two(2, 2);
        let (r, _) = rains_relative_entropy(&werner(p), &cut, &FwConfig::default()).unwrap();
        let (e, _) = relative_entropy_of_entanglement_ppt(&werner(p), &cut, &FwConfig::default()).unwrap();
        let expect = 1.0 - h((1.0 + 3.0 * p) / 4.0);
        assert!((r.value_bits - expect).abs() < 2e-3, "p = {p}: {} vs {expect}", r.value_bits);
        assert!(e.value_bits >= r.value_bits - 2e-3);
    }
}

#[test]
fn sandwiched_rains_approaches_rains_near_one() {
    let rho = werner(0.8);
    let cut = BipartiteCut::two(2, 2);
    let (r, _) = rains_relative_entropy(&rho, &cut, &FwConfig::default()).unwrap();
    let cfg = FwConfig { max_iter: 200, tol: 1e-5, ..FwConfig::default() };
    let (s, _, _) = sandwiched_rains(&rho, &cut, 1.01, &cfg).unwrap();
    assert!(s.value_bits >= r.value_bits - 2e-3);
    assert!((s.value_bits - r.value_bits).abs() < 0.05, "{} vs {}", s.value_bits, r.value_bits);
}

#[test]
fn bidirectional_search_on_swap_finds_two_ebits() {
    let n = BidirectionalChannel::from_unitary(&swap_gate(2), 2, 2).unwrap();
    let s = e_max_bidirectional_lower(&n, 3, 10, 5, &tight()).unwrap();
    assert!((s.report.value_bits - 2.0).abs() < 1e-4, "{:?}", s.restart_values);
    assert!(s.running_max.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn swap_amortization_is_tight_on_bell_inputs() {
    // Φ_{L_A A′} ⊗ Φ_{B′ L_B} → SWAP makes both pairs cross the cut
    let n = BidirectionalChannel::from_unitary(&swap_gate(2), 2, 2).unwrap();
    let phi = max_entangled(2);
    let rho = kron(&phi, &phi);
    let diff = bidirectional::amortization_difference(&n, &rho, 2, 2, &tight()).unwrap();
    assert!((diff - 2.0).abs() < 1e-6);
}

#[test]
fn amortization_holds_for_cnot() {
    let n = BidirectionalChannel::from_unitary(&cnot(), 2, 2).unwrap();
    let rep = amortization_check_rains(&n, 6, 21, &tight()).unwrap();
    assert_eq!(rep.violations, 0, "{rep:?}");
    assert!(rep.holds(1e-6));
}

#[test]
fn flipped_cut_gives_same_w() {
    let mut rng = seeded_rng(30);
    let rho = random_density(6, &mut rng);
    let cut = BipartiteCut::two(2, 3);
    let a = w_state(&rho, &cut, &tight()).unwrap().value_bits;
    let b = w_state(&rho, &cut.flipped(), &tight()).unwrap().value_bits;
    assert!((a - b).abs() < 1e-6);
}

#[test]
fn cut_must_partition_systems() {
    assert!(BipartiteCut::new(&[2, 2, 2], &[0], &[2]).is_err());
    assert!(BipartiteCut::new(&[2, 2, 2], &[0, 2], &[1]).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn w_state_local_unitary_invariant(seed in 0u64..1000) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(4, &mut rng);
        let u = kron(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
        let cut = BipartiteCut::two(2, 2);
        let a = w_state(&rho, &cut, &tight()).unwrap().value_bits;
        let b = w_state(&(&u * &rho * u.adjoint()), &cut, &tight()).unwrap().value_bits;
        prop_assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn w_state_nonnegative_and_below_log_d(seed in 0u64..1000) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(6, &mut rng);
        let r = w_state(&rho, &BipartiteCut::two(2, 3), &tight()).unwrap().value_bits;
        prop_assert!(r >= -1e-7 && r <= 1.0 + 1e-7);
    }

    #[test]
    fn gamma_bidirectional_invariant_under_local_unitaries(seed in 0u64..1000) {
        let mut rng = seeded_rng(seed);
        let pre = kron(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
        let post = kron(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
        let a = gamma_bidirectional(&BidirectionalChannel::from_unitary(&cnot(), 2, 2).unwrap(), Form::Dual, &tight()).unwrap().value_bits;
        let g = &post * cnot() * &pre;
        let b = gamma_bidirectional(&BidirectionalChannel::from_unitary(&g, 2, 2).unwrap(), Form::Dual, &tight()).unwrap().value_bits;
        prop_assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn rains_bounded_by_ppt_relative_entropy(seed in 0u64..1000) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(4, &mut rng);
        let cut = BipartiteCut::two(2, 2);
        let cfg = FwConfig::default();
        let (r, _) = rains_relative_entropy(&rho, &cut, &cfg).unwrap();
        let (e, _) = relative_entropy_of_entanglement_ppt(&rho, &cut, &cfg).unwrap();
        // both are upper estimates within their Frank–Wolfe gaps
        prop_assert!(r.value_bits <= e.value_bits + r.gap + e.gap + 1e-6);
        let pt = partial_transpose(&rho, &[2, 2], &[1]);
        let log_neg = crate::qcore::trace_norm(&pt).log2();
        prop_assert!(r.value_bits >= log_neg.min(0.0) - 1e-6);
    }
}

#[test]
fn coherent_cell_bound_covers_erasure_capacity() {
    let (d, q) = (2, 0.3);
    let cell = crate::channels::erasure_wiretap_cell(d, q).unwrap();
    let n = crate::channels::coherent_bidirectional(&cell).unwrap();
    let pair = gamma_bidirectional_both(&n, &tight()).unwrap();
    assert!(pair.relative_gap < 1e-6);
    assert!(pair.dual.value_bits >= 2.0 * (1.0 - q) * (d as f64).log2() - 1e-6);
}
