use proptest::prelude::*;

use super::*;
use crate::channels::{choi_from_kraus, depolarizing_kraus, product_output_reps, GroupRep};
use crate::qcore::{cnot, fidelity, maximally_mixed, seeded_rng, swap_gate, trace_norm, unit};

fn settings() -> SolverSettings {
    SolverSettings::default()
}

fn pauli_reps(gate: &CMat) -> BiReps {
    product_output_reps(gate, &GroupRep::pauli(), &GroupRep::pauli()).unwrap()
}

#[test]
fn trivial_twist_gives_product_private_state() {
    let mut rng = seeded_rng(1);
    let psi = haar_ket(4, &mut rng);
    let theta = &psi * psi.adjoint();
    let twists = vec![identity(4); 4];
    let g = build_private_state(2, twists, theta.clone(), [2, 2]).unwrap();
    let expect = kron(&max_entangled(2), &theta);
    assert!((&g.gamma - expect).iter().all(|z| z.norm() < 1e-14));
    let t = privacy_test(&g);
    assert!((t.pass_probability(&g.gamma) - 1.0).abs() < 1e-12);
}

#[test]
fn random_private_states_pass_their_test() {
    let mut rng = seeded_rng(2);
    for _ in 0..10 {
        let g = random_private_state(2, [2, 2], &mut rng).unwrap();
        let t = privacy_test(&g);
        assert!((t.pass_probability(&g.gamma) - 1.0).abs() < 1e-10);
        assert!(t.idempotency_residual() < 1e-10);
    }
}

#[test]
fn separable_states_pass_with_at_most_one_over_k() {
    let mut rng = seeded_rng(3);
    let g = random_private_state(2, [2, 2], &mut rng).unwrap();
    let t = privacy_test(&g);
    for _ in 0..100 {
        let s = sample_separable(g.dims(), 8, &mut rng);
        assert!(t.pass_probability(&s) <= 0.5 + 1e-9);
    }
}

#[test]
fn noisy_private_state_passes_with_fidelity() {
    let mut rng = seeded_rng(4);
    let g = random_private_state(2, [2, 2], &mut rng).unwrap();
    let t = privacy_test(&g);
    for eps in [0.01, 0.1, 0.3] {
        let noisy = &g.gamma * C64::from(1.0 - eps) + maximally_mixed(16) * C64::from(eps);
        let f = fidelity(&noisy, &g.gamma);
        assert!(t.pass_probability(&noisy) >= f - 1e-9);
    }
}

#[test]
fn non_unitary_twist_is_rejected() {
    let mut twists = vec![identity(4); 4];
    twists[3] = identity(4) * C64::from(0.5);
    assert!(build_private_state(2, twists, maximally_mixed(4), [2, 2]).is_err());
}

#[test]
fn povm_completeness_for_hw_groups() {
    for d in 2..=3 {
        assert!(povm_completeness(&GroupRep::heisenberg_weyl(d)) < 1e-10);
    }
}

#[test]
fn cnot_simulation_is_exact() {
    let n = BidirectionalChannel::from_unitary(&cnot(), 2, 2).unwrap();
    let sim = teleport_simulate(&n, &pauli_reps(&cnot())).unwrap();
    assert!(trace_norm(&(&sim.j - &n.j)) / 4.0 <= 1e-8);
    assert!(sim.tp_residual() < 1e-8);
    assert!(diamond_distance_bidirectional(&n, &sim, &settings()).unwrap() <= 1e-6);
}

#[test]
fn identity_simulation_reproduces_identity() {
    let n = BidirectionalChannel::from_unitary(&identity(4), 2, 2).unwrap();
    let sim = teleport_simulate(&n, &pauli_reps(&identity(4))).unwrap();
    assert!((&sim.j - &n.j).iter().all(|z| z.norm() < 1e-12));
}

#[test]
fn non_bicovariant_channel_is_refused() {
    let mut rng = seeded_rng(5);
    let u = haar_unitary(4, &mut rng);
    let n = BidirectionalChannel::from_unitary(&u, 2, 2).unwrap();
    // borrow CNOT's output reps: they do not fit a random gate
    assert!(teleport_simulate(&n, &pauli_reps(&cnot())).is_err());
}

#[test]
fn diamond_distance_identity_vs_depolarizing() {
    let id = ChannelChoi::identity(2);
    let dep = choi_from_kraus(&depolarizing_kraus(2, 1.0)).unwrap();
    let d = diamond_distance(&id, &dep, &settings()).unwrap();
    assert!((d - 0.75).abs() < 1e-6, "{d}");
    assert!(diamond_distance(&dep, &dep, &settings()).unwrap() < 1e-7);
}

#[test]
fn diamond_distance_sits_between_choi_bounds() {
    let mut rng = seeded_rng(6);
    for _ in 0..3 {
        let a = ChannelChoi::from_unitary(&haar_unitary(2, &mut rng));
        let b = choi_from_kraus(&depolarizing_kraus(2, 0.3)).unwrap();
        let dd = diamond_distance(&a, &b, &settings()).unwrap();
        // ½‖J_a − J_b‖₁ / d ≤ ½‖·‖_⋄ ≤ ½‖J_a − J_b‖₁
        let choi = trace_norm(&(&a.j - &b.j)) / 2.0;
        assert!(dd >= choi / 2.0 - 1e-7 && dd <= choi + 1e-7);
    }
}

#[test]
fn swap_resource_state_has_two_ebits() {
    let n = BidirectionalChannel::from_unitary(&swap_gate(2), 2, 2).unwrap();
    let reps = pauli_reps(&swap_gate(2));
    let (r, e) = resource_state_bounds(&n, &reps, &FwConfig::default()).unwrap();
    // θ is two Bell pairs across the cut; a single pair has Rains relative entropy 1
    assert!((r.value_bits - 2.0).abs() < 2e-3, "{}", r.value_bits);
    assert!(e.value_bits >= r.value_bits - 2e-3);
}

#[test]
fn identity_resource_state_bounds_vanish() {
    let n = BidirectionalChannel::from_unitary(&identity(4), 2, 2).unwrap();
    let (r, e) = resource_state_bounds(&n, &pauli_reps(&identity(4)), &FwConfig::default()).unwrap();
    assert!(r.value_bits.abs() < 1e-6 && e.value_bits.abs() < 1e-6);
}

#[test]
fn rains_of_resource_state_is_transpose_side_symmetric() {
    let n = BidirectionalChannel::from_unitary(&cnot(), 2, 2).unwrap();
    let cut = BipartiteCut::four(n.dims);
    let cfg = FwConfig::default();
    let (a, _) = rains_relative_entropy(&resource_state(&n), &cut, &cfg).unwrap();
    let (b, _) = rains_relative_entropy(&resource_state(&n), &cut.flipped(), &cfg).unwrap();
    assert!((a.value_bits - b.value_bits).abs() < a.gap + b.gap + 1e-4);
    let [da, x, y, db] = n.dims;
    let (c, _) = rains_relative_entropy(&resource_state_mirrored(&n), &BipartiteCut::four([db, y, x, da]), &cfg).unwrap();
    assert!((a.value_bits - c.value_bits).abs() < a.gap + c.gap + 1e-4);
}

#[test]
fn simulated_choi_basis_action_matches_channel() {
    // independent check on basis inputs |i⟩⟨j| ⊗ |k⟩⟨l|
    let n = BidirectionalChannel::from_unitary(&cnot(), 2, 2).unwrap();
    let sim = teleport_simulate(&n, &pauli_reps(&cnot())).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let x = unit(4, i, j);
            let a = n.apply(&x).unwrap();
            let b = sim.apply(&x).unwrap();
            assert!((a - b).iter().all(|z| z.norm() < 1e-10));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn simulation_of_pauli_covariant_gates_is_cptp(ia in 0usize..4, ib in 0usize..4) {
        // local Pauli frames around CNOT keep it bicovariant
        let ps = crate::qcore::paulis();
        let (a, b) = (&ps[ia], &ps[ib]);
        let g = kron(a, b) * cnot();
        let n = BidirectionalChannel::from_unitary(&g, 2, 2).unwrap();
        let sim = teleport_simulate(&n, &pauli_reps(&g)).unwrap();
        prop_assert!(sim.tp_residual() < 1e-8);
        prop_assert!(crate::qcore::min_eig(&sim.j) > -1e-8);
        prop_assert!(trace_norm(&(&sim.j - &n.j)) < 1e-8);
    }
}
