use proptest::prelude::*;

use super::*;
use crate::qcore::*;

fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
    (a - b).iter().all(|z| z.norm() <= tol)
}

fn random_kraus(rng: &mut QRng, din: usize, dout: usize, k: usize) -> Vec<CMat> {
    let v = haar_unitary(dout * k, rng);
    (0..k).map(|j| CMat::from_fn(dout, din, |o, i| v[(o * k + j, i)])).collect()
}

#[test]
fn identity_choi_is_upsilon() {
    let ch = choi_from_kraus(&[identity(3)]).unwrap();
    assert!(close(&ch.j, &upsilon(3), 1e-15));
    let mut rng = seeded_rng(1);
    let r = random_density(3, &mut rng);
    assert!(close(&ch.apply(&r).unwrap(), &r, 1e-14));
}

#[test]
fn dephasing_choi_keeps_diagonal_blocks() {
    let s = C64::from(0.5f64.sqrt());
    let ch = choi_from_kraus(&[identity(2) * s, pauli_z() * s]).unwrap();
    // basis oracle: N(|i⟩⟨j|) = δ_ij |i⟩⟨i|
    for i in 0..2 {
        for j in 0..2 {
            let out = ch.apply(&unit(2, i, j)).unwrap();
            let expect = if i == j { unit(2, i, i) } else { CMat::zeros(2, 2) };
            assert!(close(&out, &expect, 1e-15));
        }
    }
}

#[test]
fn non_tp_input_is_rejected() {
    assert!(choi_from_kraus(&[identity(2) * C64::from(0.9)]).is_err());
    let j = upsilon(2) * C64::from(2.0);
    assert!(ChannelChoi::new(j, 2, 2).is_err());
}

#[test]
fn choi_and_kraus_agree_on_random_inputs() {
    let mut rng = seeded_rng(2);
    let ks = random_kraus(&mut rng, 2, 3, 3);
    let ch = choi_from_kraus(&ks).unwrap();
    let back = kraus_from_choi(&ch);
    for _ in 0..100 {
        let r = random_density(2, &mut rng);
        let a = apply_kraus(&ks, &r);
        assert!(close(&ch.apply(&r).unwrap(), &a, 1e-12));
        assert!(close(&apply_kraus(&back, &r), &a, 1e-9));
    }
    // Choi-state teleportation identity ⟨Υ| ρ_{S} ⊗ J_{S'B} |Υ⟩_{SS'} = N(ρ)
    let r = random_density(2, &mut rng);
    let big = kron(&r, &ch.j);
    let ups = upsilon_ket(2);
    let mut out = CMat::zeros(3, 3);
    for b1 in 0..3 {
        for b2 in 0..3 {
            let mut s = ZERO;
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            let row = (i * 2 + k) * 3 + b1;
                            let col = (j * 2 + l) * 3 + b2;
                            s += ups[i * 2 + k].conj() * big[(row, col)] * ups[j * 2 + l];
                        }
                    }
                }
            }
            out[(b1, b2)] = s;
        }
    }
    assert!(close(&out, &apply_kraus(&ks, &r), 1e-12));
}

#[test]
fn erasure_q1_outputs_flag() {
    let ch = choi_from_kraus(&erasure_kraus(2, 1.0)).unwrap();
    let mut rng = seeded_rng(3);
    let r = random_density(2, &mut rng);
    assert!(close(&ch.apply(&r).unwrap(), &proj(&ket(3, 2)), 1e-14));
}

#[test]
fn unitary_complement_is_constant() {
    let mut rng = seeded_rng(4);
    let u = haar_unitary(3, &mut rng);
    let v = canonical_isometric_extension(&[u]).unwrap();
    let comp = complementary_channel(&v);
    let a = comp.apply(&random_density(3, &mut rng)).unwrap();
    let b = comp.apply(&random_density(3, &mut rng)).unwrap();
    assert!(close(&a, &b, 1e-12));
}

#[test]
fn erasure_complement_is_erasure() {
    for d in [2, 3] {
        let q = 0.3;
        let v = canonical_isometric_extension(&erasure_kraus(d, q)).unwrap();
        // canonical extension coincides with U^q
        assert!(close(&v.v, &erasure_isometry(d, q), 1e-15));
        let comp = complementary_channel(&v);
        let direct = choi_from_kraus(&erasure_kraus(d, 1.0 - q)).unwrap();
        let mut rng = seeded_rng(5);
        for _ in 0..10 {
            let r = random_density(d, &mut rng);
            assert!(close(&comp.apply(&r).unwrap(), &direct.apply(&r).unwrap(), 1e-12));
        }
        assert!(close(&(v.v.adjoint() * &v.v), &identity(d), 1e-14));
    }
}

#[test]
fn erasure_cell_marginals() {
    let mut rng = seeded_rng(6);
    for d in [2, 3] {
        let c0 = erasure_wiretap_cell(d, 0.0).unwrap();
        let c1 = erasure_wiretap_cell(d, 1.0).unwrap();
        assert_eq!(c0.len(), d * d);
        let psi = haar_ket(d, &mut rng);
        let r = proj(&psi);
        for x in 0..d * d {
            let s = hw_sigma(d, x);
            let mut expect = CMat::zeros(d + 1, d + 1);
            expect.view_mut((0, 0), (d, d)).copy_from(&(&s * &r * s.adjoint()));
            assert!(close(&c0.channel(x).apply(&r).unwrap(), &expect, 1e-12));
            assert!(close(&c1.channel(x).apply(&r).unwrap(), &proj(&ket(d + 1, d)), 1e-12));
        }
        let c = erasure_wiretap_cell(d, 0.3).unwrap();
        for v in &c.isometries {
            assert!(close(&(v.v.adjoint() * &v.v), &identity(d), 1e-14));
        }
    }
    assert!(erasure_wiretap_cell(1, 0.5).is_err());
    assert!(erasure_wiretap_cell(2, 1.5).is_err());
}

#[test]
fn erasure_cell_b_e_symmetry() {
    // E-marginal at q equals the B-marginal at 1−q
    let mut rng = seeded_rng(7);
    let a = erasure_wiretap_cell(2, 0.3).unwrap();
    let b = erasure_wiretap_cell(2, 0.7).unwrap();
    for x in 0..4 {
        let r = random_density(2, &mut rng);
        let e = a.isometries[x].complementary().apply(&r).unwrap();
        let bb = b.isometries[x].channel().apply(&r).unwrap();
        assert!(close(&e, &bb, 1e-12));
    }
}

#[test]
fn controlled_cell_acts_blockwise() {
    let cell = erasure_wiretap_cell(2, 0.4).unwrap();
    let (n, u) = controlled_bidirectional(&cell).unwrap();
    assert!(n.tp_residual() < 1e-12);
    assert!(is_psd(&n.j, 1e-12));
    assert!(close(&(u.adjoint() * &u), &identity(8), 1e-14));
    let mut rng = seeded_rng(8);
    let r = random_density(2, &mut rng);
    for x in 0..4 {
        let inp = kron(&proj(&ket(4, x)), &r);
        let out = n.apply(&inp).unwrap();
        let expect = kron(&proj(&ket(4, x)), &cell.channel(x).apply(&r).unwrap());
        assert!(close(&out, &expect, 1e-12));
    }
    // a single-element cell reduces to that channel on B′
    let single = WiretapMemoryCell::new(vec![cell.isometries[1].clone()]).unwrap();
    let (n1, _) = controlled_bidirectional(&single).unwrap();
    assert!(close(&n1.apply(&r).unwrap(), &cell.channel(1).apply(&r).unwrap(), 1e-12));
    let coh = coherent_bidirectional(&cell).unwrap();
    assert!(coh.tp_residual() < 1e-12);
}

#[test]
fn one_design_twirls() {
    assert!(GroupRep::pauli().one_design_residual() < 1e-10);
    assert!(GroupRep::heisenberg_weyl(3).one_design_residual() < 1e-10);
    assert!(GroupRep::weyl_regular(2).one_design_residual() < 1e-10);
    let mut rng = seeded_rng(9);
    for g in [GroupRep::pauli(), GroupRep::heisenberg_weyl(3)] {
        let d = g.dim();
        let r = random_density(d, &mut rng);
        let tw = g.elements.iter().fold(CMat::zeros(d, d), |a, u| a + u * &r * u.adjoint()) / C64::from(g.len() as f64);
        assert!(close(&tw, &maximally_mixed(d), 1e-10));
    }
    let partial = GroupRep::new(vec![identity(2), pauli_z()], vec![]).unwrap();
    assert!(!partial.is_one_design());
}

#[test]
fn cnot_pauli_covariances() {
    let ch = ChannelChoi::from_unitary(&cnot());
    let u = GroupRep::pauli().tensor(&GroupRep::pauli());
    let out: Vec<CMat> = u.elements.iter().map(|g| cnot() * g * cnot().adjoint()).collect();
    let v = GroupRep::new(out, u.labels.clone()).unwrap();
    let chk = verify_covariance(&ch, &u, &v).unwrap();
    assert!(chk.ok, "{}", chk.residual);
    // listed relations: X⊗I → X⊗X, I⊗X → I⊗X, Z⊗I → Z⊗I, I⊗Z → Z⊗Z, Y⊗I → Y⊗X, I⊗Y → Z⊗Y
    let [i2, x, y, z] = paulis();
    let rel = |a: &CMat, b: &CMat| cnot() * a * cnot().adjoint() - b;
    assert!(rel(&kron(&x, &i2), &kron(&x, &x)).norm() < 1e-14);
    assert!(rel(&kron(&i2, &x), &kron(&i2, &x)).norm() < 1e-14);
    assert!(rel(&kron(&z, &i2), &kron(&z, &i2)).norm() < 1e-14);
    assert!(rel(&kron(&i2, &z), &kron(&z, &z)).norm() < 1e-14);
    assert!(rel(&kron(&y, &i2), &kron(&y, &x)).norm() < 1e-14);
    assert!(rel(&kron(&i2, &y), &kron(&z, &y)).norm() < 1e-14);
}

fn flag_rep(d: usize) -> GroupRep {
    let els = hw_group(d)
        .into_iter()
        .map(|s| {
            let mut m = CMat::zeros(d + 1, d + 1);
            m.view_mut((0, 0), (d, d)).copy_from(&s);
            m[(d, d)] = ONE;
            m
        })
        .collect();
    GroupRep::new(els, vec![]).unwrap()
}

#[test]
fn erasure_and_depolarizing_are_covariant() {
    for d in [2, 3] {
        let e = choi_from_kraus(&erasure_kraus(d, 0.3)).unwrap();
        assert!(verify_covariance(&e, &GroupRep::heisenberg_weyl(d), &flag_rep(d)).unwrap().ok);
        let dep = choi_from_kraus(&depolarizing_kraus(d, 0.4)).unwrap();
        let hw = GroupRep::heisenberg_weyl(d);
        assert!(verify_covariance(&dep, &hw, &hw).unwrap().ok);
    }
    // amplitude damping is not HW-covariant
    let g = 0.3f64;
    let k0 = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, C64::from((1.0 - g).sqrt())]);
    let k1 = CMat::from_row_slice(2, 2, &[ZERO, C64::from(g.sqrt()), ZERO, ZERO]);
    let ad = choi_from_kraus(&[k0, k1]).unwrap();
    let p = GroupRep::pauli();
    assert!(!verify_covariance(&ad, &p, &p).unwrap().ok);
}

#[test]
fn environment_rep_for_erasure() {
    for d in [2, 3] {
        let ks = erasure_kraus(d, 0.3);
        let env = environment_rep(&ks, &GroupRep::heisenberg_weyl(d), &flag_rep(d)).unwrap();
        assert!(env.residual <= 1e-8, "{}", env.residual);
        assert!(env.unitarity <= 1e-8);
    }
    // unitary channel: w is a phase
    let env = environment_rep(&[cnot()], &GroupRep::pauli().tensor(&GroupRep::pauli()), &{
        let u = GroupRep::pauli().tensor(&GroupRep::pauli());
        GroupRep::new(u.elements.iter().map(|g| cnot() * g * cnot().adjoint()).collect(), vec![]).unwrap()
    })
    .unwrap();
    for w in &env.w {
        assert_eq!(w.shape(), (1, 1));
        assert!((w[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }
    // non-covariant input
    let p = GroupRep::pauli();
    let g = 0.3f64;
    let k0 = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, C64::from((1.0 - g).sqrt())]);
    let k1 = CMat::from_row_slice(2, 2, &[ZERO, C64::from(g.sqrt()), ZERO, ZERO]);
    assert!(environment_rep(&[k0, k1], &p, &p).is_err());
}

#[test]
fn bicovariance_of_gates() {
    let p = GroupRep::pauli();
    let reps = product_output_reps(&cnot(), &p, &p).unwrap();
    let n = BidirectionalChannel::from_unitary(&cnot(), 2, 2).unwrap();
    let chk = verify_bicovariance(&n, &reps).unwrap();
    assert!(chk.ok, "{chk:?}");
    let id = BidirectionalChannel::from_unitary(&identity(4), 2, 2).unwrap();
    let reps = product_output_reps(&identity(4), &p, &p).unwrap();
    assert!(verify_bicovariance(&id, &reps).unwrap().ok);
    // a generic entangling unitary admits no product output representation
    let mut rng = seeded_rng(10);
    assert!(product_output_reps(&haar_unitary(4, &mut rng), &p, &p).is_err());
}

#[test]
fn erasure_cell_bicovariance_candidates() {
    let cell = erasure_wiretap_cell(2, 0.3).unwrap();
    let n = coherent_bidirectional(&cell).unwrap();
    let cands = bicovariance_candidates_for_cell(2);
    let weyl = cands[0].1.as_ref().unwrap();
    let chk = verify_bicovariance(&n, weyl).unwrap();
    assert!(chk.ok, "{chk:?}");
    assert!(cands[1].1.is_err());
}

#[test]
fn bidirectional_round_trip() {
    let mut rng = seeded_rng(11);
    let ks = random_kraus(&mut rng, 4, 6, 2);
    let n = BidirectionalChannel::from_kraus(&ks, [2, 2], [2, 3]).unwrap();
    assert_eq!(n.dims, [2, 2, 3, 2]);
    assert!(n.tp_residual() < 1e-12);
    let r = random_density(4, &mut rng);
    assert!(close(&n.apply(&r).unwrap(), &apply_kraus(&ks, &r), 1e-12));
    // extended application with trivial ancillas agrees
    assert!(close(&n.apply_extended(&r, 1, 1).unwrap(), &apply_kraus(&ks, &r), 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constructors_are_cptp(seed in 0u64..100_000, din in 1usize..4, dout in 1usize..4, k in 1usize..4) {
        prop_assume!(din <= dout * k);
        let mut rng = seeded_rng(seed);
        let ks = random_kraus(&mut rng, din, dout, k);
        let ch = choi_from_kraus(&ks).unwrap();
        prop_assert!(ch.tp_residual() < 1e-9);
        prop_assert!(min_eig(&ch.j) > -1e-9);
        let v = canonical_isometric_extension(&ks).unwrap();
        prop_assert!(close(&(v.v.adjoint() * &v.v), &identity(din), 1e-9));
        // complement of the complement acts like the original channel
        let r = random_density(din, &mut rng);
        let swapped = swap_output(&v);
        let cc = swapped.complementary();
        prop_assert!(close(&cc.apply(&r).unwrap(), &ch.apply(&r).unwrap(), 1e-9));
    }
}

/// The same isometry with its output factors exchanged (env ⊗ out).
fn swap_output(v: &IsometricExtension) -> IsometricExtension {
    let mut w = CMat::zeros(v.v.nrows(), v.d_in);
    for o in 0..v.d_out {
        for e in 0..v.d_env {
            for i in 0..v.d_in {
                w[(e * v.d_out + o, i)] = v.v[(o * v.d_env + e, i)];
            }
        }
    }
    IsometricExtension::new(w, v.d_in, v.d_env, v.d_out).unwrap()
}

