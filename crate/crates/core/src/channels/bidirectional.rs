use super::{choi_from_kraus, kraus_from_choi, ChannelChoi};
use crate::qcore::{kron, partial_trace, permute_systems, CMat};
use crate::{Error, Result};

/// A channel A′B′ → AB. The Choi operator lives on (S_A, A, B, S_B) with
/// S_A ≃ A′ and S_B ≃ B′: J = Σ |i⟩⟨j|_{S_A} ⊗ N(|i⟩⟨j| ⊗ |k⟩⟨l|) ⊗ |k⟩⟨l|_{S_B}.
#[derive(Debug, Clone)]
pub struct BidirectionalChannel {
    pub j: CMat,
    /// (d_{A′}, d_A, d_B, d_{B′})
    pub dims: [usize; 4],
}

impl BidirectionalChannel {
    /// From a point-to-point channel A′B′ → AB whose input is ordered A′ ⊗ B′
    /// and output A ⊗ B.
    pub fn from_point(ch: &ChannelChoi, input: [usize; 2], output: [usize; 2]) -> Result<Self> {
        if ch.d_in != input[0] * input[1] || ch.d_out != output[0] * output[1] {
            return Err(Error::dim(format!(
                "channel {}→{} does not factor as {:?}→{:?}",
                ch.d_in, ch.d_out, input, output
            )));
        }
        let d4 = [input[0], input[1], output[0], output[1]];
        // (A′, B′, A, B) → (A′, A, B, B′)
        let j = permute_systems(&ch.j, &d4, &[0, 2, 3, 1]);
        Ok(BidirectionalChannel { j, dims: [input[0], output[0], output[1], input[1]] })
    }

    pub fn from_kraus(kraus: &[CMat], input: [usize; 2], output: [usize; 2]) -> Result<Self> {
        Self::from_point(&choi_from_kraus(kraus)?, input, output)
    }

    /// Unitary interaction on A′ ⊗ B′ with A ≃ A′, B ≃ B′.
    pub fn from_unitary(u: &CMat, da: usize, db: usize) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u), [da, db], [da, db])
    }

    /// Non-interacting M_A ⊗ M_B.
    pub fn local(ma: &ChannelChoi, mb: &ChannelChoi) -> Result<Self> {
        let mut ks = Vec::new();
        for a in ma.kraus() {
            for b in mb.kraus() {
                ks.push(kron(&a, &b));
            }
        }
        Self::from_kraus(&ks, [ma.d_in, mb.d_in], [ma.d_out, mb.d_out])
    }

    /// Alice's input A′ is sent through `m` to Bob's output B; A and B′ are trivial.
    pub fn one_sided(m: &ChannelChoi) -> Result<Self> {
        Self::from_point(m, [m.d_in, 1], [1, m.d_out])
    }

    pub fn input_dims(&self) -> [usize; 2] {
        [self.dims[0], self.dims[3]]
    }

    pub fn output_dims(&self) -> [usize; 2] {
        [self.dims[1], self.dims[2]]
    }

    /// The same map as a point-to-point channel (A′B′ → AB).
    pub fn point(&self) -> ChannelChoi {
        let [sa, a, b, sb] = self.dims;
        let j = permute_systems(&self.j, &[sa, a, b, sb], &[0, 3, 1, 2]);
        ChannelChoi { j, d_in: sa * sb, d_out: a * b }
    }

    pub fn kraus(&self) -> Vec<CMat> {
        kraus_from_choi(&self.point())
    }

    /// N(ρ_{A′B′}).
    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        self.point().apply(rho)
    }

    /// Apply to the A′B′ part of a state on (L_A, A′, B′, L_B), giving a state on (L_A, A, B, L_B).
    pub fn apply_extended(&self, rho: &CMat, la: usize, lb: usize) -> Result<CMat> {
        let [sa, a, b, sb] = self.dims;
        if rho.nrows() != la * sa * sb * lb {
            return Err(Error::dim("extended input has the wrong dimension"));
        }
        let ks = self.kraus();
        let il = crate::qcore::identity(la);
        let ir = crate::qcore::identity(lb);
        let n = la * a * b * lb;
        let mut out = CMat::zeros(n, n);
        for k in &ks {
            let big = crate::qcore::kron_all(&[&il, k, &ir]);
            out += &big * rho * big.adjoint();
        }
        Ok(out)
    }

    /// max |Tr_{AB} J − I|.
    pub fn tp_residual(&self) -> f64 {
        let [sa, a, b, sb] = self.dims;
        let r = partial_trace(&self.j, &[sa, a, b, sb], &[0, 3]) - crate::qcore::identity(sa * sb);
        r.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }
}
