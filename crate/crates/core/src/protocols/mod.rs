//! Private states and privacy tests, teleportation simulation of bicovariant
//! bidirectional channels, diamond distances and resource-state bounds.

use rand::Rng;
use serde::Serialize;

use crate::channels::{verify_bicovariance, BiReps, BicovarianceCheck, BidirectionalChannel, ChannelChoi, GroupRep};
use crate::conic::{ConicProgram, LinearMap, Rel, SolverSettings};
use crate::measures::{rains_relative_entropy, relative_entropy_of_entanglement_ppt, BipartiteCut, BoundReport, FwConfig};
use crate::qcore::{
    haar_ket, haar_unitary, identity, is_density, kron, max_entangled, permute_ket, permute_systems, random_simplex, CMat, C64,
};
use crate::{Error, Result};

const UNITARY_TOL: f64 = 1e-10;

fn unitarity_residual(u: &CMat) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - identity(n)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// γ = U^t (Φ_K ⊗ θ) U^t† on (K_A, K_B, S_A, S_B).
#[derive(Debug, Clone)]
pub struct PrivateState {
    pub k: usize,
    /// (d_{S_A}, d_{S_B})
    pub shield: [usize; 2],
    /// U^{ij} on S_A S_B, indexed i·K + j
    pub twists: Vec<CMat>,
    pub theta: CMat,
    pub gamma: CMat,
}

impl PrivateState {
    pub fn dims(&self) -> [usize; 4] {
        [self.k, self.k, self.shield[0], self.shield[1]]
    }

    /// Σ_{ij} |i⟩⟨i| ⊗ |j⟩⟨j| ⊗ U^{ij}
    pub fn twisting_unitary(&self) -> CMat {
        twisting(self.k, &self.twists)
    }
}

fn twisting(k: usize, twists: &[CMat]) -> CMat {
    let s = twists[0].nrows();
    let mut u = CMat::zeros(k * k * s, k * k * s);
    for (b, t) in twists.iter().enumerate() {
        u.view_mut((b * s, b * s), (s, s)).copy_from(t);
    }
    u
}

pub fn build_private_state(k: usize, twists: Vec<CMat>, theta: CMat, shield: [usize; 2]) -> Result<PrivateState> {
    let s = shield[0] * shield[1];
    if k < 2 {
        return Err(Error::invalid("key dimension must be at least 2"));
    }
    if twists.len() != k * k {
        return Err(Error::dim(format!("expected {} twisting unitaries, got {}", k * k, twists.len())));
    }
    if theta.shape() != (s, s) || twists.iter().any(|t| t.shape() != (s, s)) {
        return Err(Error::dim("shield operators do not match the shield dimensions"));
    }
    if let Some(bad) = twists.iter().map(unitarity_residual).find(|r| *r > UNITARY_TOL) {
        return Err(Error::invalid(format!("twisting operator is not unitary (residual {bad:.3e})")));
    }
    if !is_density(&theta, 1e-9) {
        return Err(Error::invalid("shield operator is not a state"));
    }
    let ut = twisting(k, &twists);
    let gamma = &ut * kron(&max_entangled(k), &theta) * ut.adjoint();
    Ok(PrivateState { k, shield, twists, theta, gamma })
}

/// Random twists and a random pure shield state.
pub fn random_private_state<R: Rng + ?Sized>(k: usize, shield: [usize; 2], rng: &mut R) -> Result<PrivateState> {
    let s = shield[0] * shield[1];
    let twists = (0..k * k).map(|_| haar_unitary(s, rng)).collect();
    let psi = haar_ket(s, rng);
    build_private_state(k, twists, &psi * psi.adjoint(), shield)
}

/// Π^γ = U^t (Φ_K ⊗ I) U^t†.
#[derive(Debug, Clone)]
pub struct PrivacyTest {
    pub projector: CMat,
    pub dims: [usize; 4],
}

impl PrivacyTest {
    pub fn pass_probability(&self, rho: &CMat) -> f64 {
        (&self.projector * rho).trace().re
    }

    pub fn idempotency_residual(&self) -> f64 {
        let p = &self.projector;
        (p * p - p).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn privacy_test(gamma: &PrivateState) -> PrivacyTest {
    let ut = gamma.twisting_unitary();
    let s = gamma.shield[0] * gamma.shield[1];
    let projector = &ut * kron(&max_entangled(gamma.k), &identity(s)) * ut.adjoint();
    PrivacyTest { projector, dims: gamma.dims() }
}

/// Mixture of at most `max_terms` Haar product states across the cut
/// K_A S_A : K_B S_B, returned in the (K_A, K_B, S_A, S_B) ordering.
pub fn sample_separable<R: Rng + ?Sized>(dims: [usize; 4], max_terms: usize, rng: &mut R) -> CMat {
    let [ka, kb, sa, sb] = dims;
    let terms = rng.random_range(1..=max_terms.max(1));
    let w = random_simplex(terms, rng);
    let n = ka * kb * sa * sb;
    let mut out = CMat::zeros(n, n);
    for p in w {
        let v = haar_ket(ka * sa, rng).kronecker(&haar_ket(kb * sb, rng));
        // (K_A, S_A, K_B, S_B) → (K_A, K_B, S_A, S_B)
        let v = permute_ket(&v, &[ka, sa, kb, sb], &[0, 2, 1, 3]);
        out += &v * v.adjoint() * C64::from(p);
    }
    out
}

/// max |Σ_g E^g − I| for E^g = (d²/|G|)(U^g ⊗ I) Φ (U^g ⊗ I)†.
pub fn povm_completeness(rep: &GroupRep) -> f64 {
    let d = rep.dim();
    let total: CMat = teleport_povm(rep).iter().fold(CMat::zeros(d * d, d * d), |acc, e| acc + e);
    (total - identity(d * d)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn teleport_povm(rep: &GroupRep) -> Vec<CMat> {
    let d = rep.dim();
    let phi = max_entangled(d);
    let scale = C64::from((d * d) as f64 / rep.len() as f64);
    rep.elements
        .iter()
        .map(|u| {
            let ui = kron(u, &identity(d));
            &ui * &phi * ui.adjoint() * scale
        })
        .collect()
}

/// Teleportation simulation of a bicovariant channel through its resource
/// state θ = N(Φ_{L_A A′} ⊗ Φ_{B′ L_B}): Alice measures C L_A with {E^g}, Bob
/// measures L_B D with {F^h}, and the output is corrected by W^{g,h} ⊗ T^{g,h}.
/// The branches are summed exactly.
pub fn teleport_simulate(n: &BidirectionalChannel, reps: &BiReps) -> Result<BidirectionalChannel> {
    let check = verify_bicovariance(n, reps)?;
    if !check.ok {
        return Err(Error::invalid(format!(
            "channel is not bicovariant under the given representations (residual {:.3e}, one-design {:.3e}/{:.3e})",
            check.residual, check.one_design_u, check.one_design_v
        )));
    }
    let [da, a, b, db] = n.dims;
    let ab = a * b;
    let theta = &n.j / C64::from((da * db) as f64);
    let e = teleport_povm(&reps.u);
    // F^h acts on (L_B, D) with V^h on D
    let f: Vec<CMat> = {
        let phi = max_entangled(db);
        let scale = C64::from((db * db) as f64 / reps.v.len() as f64);
        reps.v
            .elements
            .iter()
            .map(|v| {
                let iv = kron(&identity(db), v);
                &iv * &phi * iv.adjoint() * scale
            })
            .collect()
    };
    let idx = |l: usize, o: usize, m: usize| (l * ab + o) * db + m;

    // Tr_{L_A}[(K_A ⊗ I) θ] with K_A[l, l'] = E[(c′, l), (c, l′)], for every (g, c, c′)
    let mut theta_a = vec![vec![CMat::zeros(ab * db, ab * db); da * da]; e.len()];
    for (g, eg) in e.iter().enumerate() {
        for c in 0..da {
            for cp in 0..da {
                let ka = CMat::from_fn(da, da, |l, lp| eg[(cp * da + l, c * da + lp)]);
                let out = &mut theta_a[g][c * da + cp];
                for l in 0..da {
                    for lp in 0..da {
                        let w = ka[(l, lp)];
                        if w.norm() == 0.0 {
                            continue;
                        }
                        for r in 0..ab * db {
                            for s in 0..ab * db {
                                out[(r, s)] += w * theta[(lp * ab * db + r, l * ab * db + s)];
                            }
                        }
                    }
                }
            }
        }
    }

    let mut j = CMat::zeros(da * ab * db, da * ab * db);
    for (g, tg) in theta_a.iter().enumerate() {
        for (h, fh) in f.iter().enumerate() {
            let corr = kron(&reps.w[g][h], &reps.t[g][h]);
            for dd in 0..db {
                for ddp in 0..db {
                    // K_B[m, m'] = F[(m, d′), (m′, d)]
                    let kb = CMat::from_fn(db, db, |m, mp| fh[(m * db + ddp, mp * db + dd)]);
                    for c in 0..da {
                        for cp in 0..da {
                            let t = &tg[c * da + cp];
                            let mut r = CMat::zeros(ab, ab);
                            for m in 0..db {
                                for mp in 0..db {
                                    let w = kb[(m, mp)];
                                    if w.norm() == 0.0 {
                                        continue;
                                    }
                                    for o in 0..ab {
                                        for op in 0..ab {
                                            r[(o, op)] += w * t[(o * db + mp, op * db + m)];
                                        }
                                    }
                                }
                            }
                            let r = &corr * r * corr.adjoint();
                            for o in 0..ab {
                                for op in 0..ab {
                                    j[(idx(c, o, dd), idx(cp, op, ddp))] += r[(o, op)];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(BidirectionalChannel { j, dims: n.dims })
}

/// ½‖N₁ − N₂‖_⋄ = min ‖Tr_out Z‖_∞ s.t. Z ⪰ J₁ − J₂, Z ⪰ 0.
pub fn diamond_distance(n1: &ChannelChoi, n2: &ChannelChoi, settings: &SolverSettings) -> Result<f64> {
    if n1.d_in != n2.d_in || n1.d_out != n2.d_out {
        return Err(Error::dim("channels act on different spaces"));
    }
    let n = n1.d_in * n1.d_out;
    let mut p = ConicProgram::new();
    let z = p.psd("Z", n);
    p.constrain("dominate", vec![(z, LinearMap::identity(n))], Rel::Geq, &n1.j - &n2.j);
    p.minimize_spectral_norm(vec![(z, LinearMap::partial_trace(&[n1.d_in, n1.d_out], &[0]))], true);
    let sol = p.solve(settings)?.require_optimal("diamond distance SDP")?;
    Ok(sol.primal_value.clamp(0.0, 1.0))
}

pub fn diamond_distance_bidirectional(n1: &BidirectionalChannel, n2: &BidirectionalChannel, settings: &SolverSettings) -> Result<f64> {
    if n1.dims != n2.dims {
        return Err(Error::dim("bidirectional channels have different dimensions"));
    }
    diamond_distance(&n1.point(), &n2.point(), settings)
}

/// Outcome of a full simulation run, as reported by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub bicovariance_residual: f64,
    pub one_design_u: f64,
    pub one_design_v: f64,
    pub povm_residual_a: f64,
    pub povm_residual_b: f64,
    pub diamond_distance: f64,
}

pub fn simulation_report(n: &BidirectionalChannel, reps: &BiReps, settings: &SolverSettings) -> Result<SimulationReport> {
    let check: BicovarianceCheck = verify_bicovariance(n, reps)?;
    let sim = teleport_simulate(n, reps)?;
    Ok(SimulationReport {
        bicovariance_residual: check.residual,
        one_design_u: check.one_design_u,
        one_design_v: check.one_design_v,
        povm_residual_a: povm_completeness(&reps.u),
        povm_residual_b: povm_completeness(&reps.v),
        diamond_distance: diamond_distance_bidirectional(n, &sim, settings)?,
    })
}

/// The resource state θ = N(Φ_{L_A A′} ⊗ Φ_{B′ L_B}) on (L_A, A, B, L_B).
pub fn resource_state(n: &BidirectionalChannel) -> CMat {
    let [da, _, _, db] = n.dims;
    &n.j / C64::from((da * db) as f64)
}

/// Rains relative entropy and the PPT-relaxed relative entropy of entanglement
/// of the resource state across L_A A : B L_B.
pub fn resource_state_bounds(n: &BidirectionalChannel, reps: &BiReps, cfg: &FwConfig) -> Result<(BoundReport, BoundReport)> {
    let check = verify_bicovariance(n, reps)?;
    if !check.ok {
        return Err(Error::invalid(format!("channel is not bicovariant (residual {:.3e})", check.residual)));
    }
    let theta = resource_state(n);
    let cut = BipartiteCut::four(n.dims);
    let (r, _) = rains_relative_entropy(&theta, &cut, cfg)?;
    let (e, _) = relative_entropy_of_entanglement_ppt(&theta, &cut, cfg)?;
    Ok((r, e))
}

/// θ with the systems permuted so that the transpose side of the cut is swapped.
pub fn resource_state_mirrored(n: &BidirectionalChannel) -> CMat {
    let [da, a, b, db] = n.dims;
    permute_systems(&resource_state(n), &[da, a, b, db], &[3, 2, 1, 0])
}

#[cfg(test)]
mod tests;
