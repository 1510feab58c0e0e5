//! Channels: Choi/Kraus/isometry conversions, complementary channels,
//! bidirectional channels, wiretap memory cells and covariance checks.

mod bidirectional;
mod cell;
mod covariance;

pub use bidirectional::BidirectionalChannel;
pub use cell::{coherent_bidirectional, controlled_bidirectional, erasure_isometry, erasure_wiretap_cell, WiretapMemoryCell};
pub use covariance::{
    bicovariance_candidates_for_cell, environment_rep, hermitian_basis, product_output_reps, verify_bicovariance,
    verify_covariance, BiReps, BicovarianceCheck, CovarianceCheck, EnvironmentRep, GroupRep,
};

use crate::qcore::{eigh, identity, kron, min_eig, partial_trace, support_cutoff, CMat, C64, ZERO};
use crate::{Error, Result};

/// Tolerance for CPTP validation of user-supplied data.
pub const CPTP_TOL: f64 = 1e-9;

/// Choi operator J = Σ_ij |i⟩⟨j| ⊗ N(|i⟩⟨j|) on (in ⊗ out).
#[derive(Debug, Clone)]
pub struct ChannelChoi {
    pub j: CMat,
    pub d_in: usize,
    pub d_out: usize,
}

impl ChannelChoi {
    /// Validates complete positivity and trace preservation.
    pub fn new(j: CMat, d_in: usize, d_out: usize) -> Result<Self> {
        let ch = ChannelChoi { j, d_in, d_out };
        ch.check()?;
        Ok(ch)
    }

    fn check(&self) -> Result<()> {
        let n = self.d_in * self.d_out;
        if self.j.nrows() != n || self.j.ncols() != n {
            return Err(Error::dim(format!("Choi is {:?}, expected {n}×{n}", self.j.shape())));
        }
        let scale = self.d_in as f64;
        if (&self.j - self.j.adjoint()).norm() > CPTP_TOL * scale {
            return Err(Error::invalid("Choi operator is not Hermitian"));
        }
        let m = min_eig(&self.j);
        if m < -CPTP_TOL * scale {
            return Err(Error::invalid(format!("Choi operator not PSD (min eigenvalue {m:.3e})")));
        }
        let tp = self.tp_residual();
        if tp > CPTP_TOL * scale {
            return Err(Error::invalid(format!("map is not trace preserving (residual {tp:.3e})")));
        }
        Ok(())
    }

    /// max |Tr_out J − I|.
    pub fn tp_residual(&self) -> f64 {
        let r = partial_trace(&self.j, &[self.d_in, self.d_out], &[0]) - identity(self.d_in);
        r.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn identity(d: usize) -> Self {
        ChannelChoi { j: crate::qcore::upsilon(d), d_in: d, d_out: d }
    }

    pub fn from_unitary(u: &CMat) -> Self {
        choi_unchecked(std::slice::from_ref(u))
    }

    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        apply_choi(self, rho)
    }

    pub fn kraus(&self) -> Vec<CMat> {
        kraus_from_choi(self)
    }

    /// N₂ ∘ N₁ with `self` applied first.
    pub fn then(&self, next: &ChannelChoi) -> Result<ChannelChoi> {
        if self.d_out != next.d_in {
            return Err(Error::dim("composition of channels with mismatched dimensions"));
        }
        let mut ks = Vec::new();
        for a in self.kraus() {
            for b in next.kraus() {
                ks.push(&b * &a);
            }
        }
        Ok(choi_unchecked(&ks))
    }
}

fn choi_unchecked(kraus: &[CMat]) -> ChannelChoi {
    let (d_out, d_in) = kraus[0].shape();
    let mut j = CMat::zeros(d_in * d_out, d_in * d_out);
    for k in kraus {
        // vec with index i*d_out + o holding K[o, i]
        let v = CMat::from_fn(d_in * d_out, 1, |r, _| k[(r % d_out, r / d_out)]);
        j += &v * v.adjoint();
    }
    ChannelChoi { j, d_in, d_out }
}

/// Σ K†K − I in max-norm.
pub fn kraus_tp_residual(kraus: &[CMat]) -> f64 {
    let d_in = kraus[0].ncols();
    let s = kraus.iter().fold(CMat::zeros(d_in, d_in), |acc, k| acc + k.adjoint() * k);
    (s - identity(d_in)).iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn choi_from_kraus(kraus: &[CMat]) -> Result<ChannelChoi> {
    if kraus.is_empty() {
        return Err(Error::invalid("empty Kraus list"));
    }
    let shape = kraus[0].shape();
    if kraus.iter().any(|k| k.shape() != shape) {
        return Err(Error::dim("Kraus operators of different shapes"));
    }
    let r = kraus_tp_residual(kraus);
    if r > CPTP_TOL {
        return Err(Error::invalid(format!("Kraus operators not trace preserving (residual {r:.3e})")));
    }
    Ok(choi_unchecked(kraus))
}

/// Minimal Kraus set from the spectral decomposition of J.
pub fn kraus_from_choi(ch: &ChannelChoi) -> Vec<CMat> {
    let (vals, vecs) = eigh(&ch.j);
    let cut = support_cutoff(&vals);
    let mut out = Vec::new();
    for (k, &l) in vals.iter().enumerate().rev() {
        if l <= cut {
            continue;
        }
        let s = l.sqrt();
        out.push(CMat::from_fn(ch.d_out, ch.d_in, |o, i| vecs[(i * ch.d_out + o, k)] * s));
    }
    if out.is_empty() {
        out.push(CMat::zeros(ch.d_out, ch.d_in));
    }
    out
}

pub fn apply_kraus(kraus: &[CMat], rho: &CMat) -> CMat {
    let d = kraus[0].nrows();
    kraus.iter().fold(CMat::zeros(d, d), |acc, k| acc + k * rho * k.adjoint())
}

/// N(ρ) = Σ_ij ρ_ij N(|i⟩⟨j|), read off the blocks of J.
pub fn apply_choi(ch: &ChannelChoi, rho: &CMat) -> Result<CMat> {
    if rho.nrows() != ch.d_in || rho.ncols() != ch.d_in {
        return Err(Error::dim(format!("input {:?} for a channel on dimension {}", rho.shape(), ch.d_in)));
    }
    let d = ch.d_out;
    let mut out = CMat::zeros(d, d);
    for i in 0..ch.d_in {
        for j in 0..ch.d_in {
            let r = rho[(i, j)];
            if r == ZERO {
                continue;
            }
            out += ch.j.view((i * d, j * d), (d, d)) * r;
        }
    }
    Ok(out)
}

/// Isometry V: in → out ⊗ env.
#[derive(Debug, Clone)]
pub struct IsometricExtension {
    pub v: CMat,
    pub d_in: usize,
    pub d_out: usize,
    pub d_env: usize,
}

impl IsometricExtension {
    pub fn new(v: CMat, d_in: usize, d_out: usize, d_env: usize) -> Result<Self> {
        if v.shape() != (d_out * d_env, d_in) {
            return Err(Error::dim(format!("isometry shape {:?} vs {}×{}", v.shape(), d_out * d_env, d_in)));
        }
        let r = (v.adjoint() * &v - identity(d_in)).iter().fold(0.0, |a: f64, z| a.max(z.norm()));
        if r > CPTP_TOL {
            return Err(Error::invalid(format!("V†V ≠ I (residual {r:.3e})")));
        }
        Ok(IsometricExtension { v, d_in, d_out, d_env })
    }

    /// Kraus operators K_e = (I ⊗ ⟨e|) V.
    pub fn kraus(&self) -> Vec<CMat> {
        (0..self.d_env)
            .map(|e| CMat::from_fn(self.d_out, self.d_in, |o, i| self.v[(o * self.d_env + e, i)]))
            .collect()
    }

    /// Kraus operators of the complementary channel, (⟨b| ⊗ I) V.
    pub fn complementary_kraus(&self) -> Vec<CMat> {
        (0..self.d_out)
            .map(|b| CMat::from_fn(self.d_env, self.d_in, |e, i| self.v[(b * self.d_env + e, i)]))
            .collect()
    }

    pub fn channel(&self) -> ChannelChoi {
        choi_unchecked(&self.kraus())
    }

    pub fn complementary(&self) -> ChannelChoi {
        choi_unchecked(&self.complementary_kraus())
    }

    /// V ρ V† on out ⊗ env.
    pub fn apply(&self, rho: &CMat) -> CMat {
        &self.v * rho * self.v.adjoint()
    }
}

/// V = Σ_j L^j ⊗ |j⟩_E.
pub fn canonical_isometric_extension(kraus: &[CMat]) -> Result<IsometricExtension> {
    choi_from_kraus(kraus)?;
    let (d_out, d_in) = kraus[0].shape();
    let d_env = kraus.len();
    let mut v = CMat::zeros(d_out * d_env, d_in);
    for (j, k) in kraus.iter().enumerate() {
        for o in 0..d_out {
            for i in 0..d_in {
                v[(o * d_env + j, i)] = k[(o, i)];
            }
        }
    }
    IsometricExtension::new(v, d_in, d_out, d_env)
}

pub fn complementary_channel(v: &IsometricExtension) -> ChannelChoi {
    v.complementary()
}

/// Kraus operators of ρ ↦ (1−p)ρ + p·π.
pub fn depolarizing_kraus(d: usize, p: f64) -> Vec<CMat> {
    let g = crate::qcore::hw_group(d);
    let n = (d * d) as f64;
    g.into_iter()
        .enumerate()
        .map(|(k, s)| {
            let w = if k == 0 { 1.0 - p + p / n } else { p / n };
            s * C64::from(w.sqrt())
        })
        .collect()
}

/// Kraus operators of the erasure channel: L^j = √q |e⟩⟨j| for j < d and
/// L^e = √(1−q) ι, with |e⟩ the last basis vector of the (d+1)-dimensional output.
pub fn erasure_kraus(d: usize, q: f64) -> Vec<CMat> {
    let mut ks = Vec::new();
    for j in 0..d {
        let mut k = CMat::zeros(d + 1, d);
        k[(d, j)] = C64::from(q.sqrt());
        ks.push(k);
    }
    let mut k = CMat::zeros(d + 1, d);
    for i in 0..d {
        k[(i, i)] = C64::from((1.0 - q).sqrt());
    }
    ks.push(k);
    ks
}

/// Kraus operators of a random channel: k blocks of the first `d_in` columns
/// of a Haar unitary on C^{d_out·k}.
pub fn random_channel_kraus<R: rand::Rng + ?Sized>(d_in: usize, d_out: usize, k: usize, rng: &mut R) -> Result<Vec<CMat>> {
    if d_in > d_out * k {
        return Err(Error::dim(format!("{k} Kraus operators of size {d_out}×{d_in} cannot be trace preserving")));
    }
    let v = crate::qcore::haar_unitary(d_out * k, rng);
    Ok((0..k).map(|j| CMat::from_fn(d_out, d_in, |o, i| v[(o * k + j, i)])).collect())
}

/// ρ ↦ Tr(ρ) ω, the replacement channel.
pub fn replacement_choi(d_in: usize, omega: &CMat) -> ChannelChoi {
    ChannelChoi { j: kron(&identity(d_in), omega), d_in, d_out: omega.nrows() }
}

#[cfg(test)]
mod tests;
