use serde::Serialize;

use super::{apply_choi, choi_from_kraus, BidirectionalChannel, ChannelChoi};
use crate::qcore::{
    factor_product, hw_group, hw_op, hw_sigma, identity, kron, op_norm, paulis, polar_unitary, trace_norm, CMat, C64,
    ONE,
};
use crate::{Error, Result};

/// Residual threshold for covariance relations.
pub const COVARIANCE_TOL: f64 = 1e-8;
/// Residual threshold for the one-design twirl.
pub const ONE_DESIGN_TOL: f64 = 1e-10;

/// A finite set of unitaries, possibly a projective representation.
#[derive(Debug, Clone)]
pub struct GroupRep {
    pub elements: Vec<CMat>,
    pub labels: Vec<String>,
}

impl GroupRep {
    pub fn new(elements: Vec<CMat>, labels: Vec<String>) -> Result<Self> {
        let d = elements.first().ok_or_else(|| Error::invalid("empty group representation"))?.nrows();
        for (k, u) in elements.iter().enumerate() {
            if u.shape() != (d, d) {
                return Err(Error::dim(format!("group element {k} is {:?}, expected {d}×{d}", u.shape())));
            }
            let r = (u.adjoint() * u - identity(d)).iter().fold(0.0, |a: f64, z| a.max(z.norm()));
            if r > COVARIANCE_TOL {
                return Err(Error::invalid(format!("group element {k} is not unitary (residual {r:.2e})")));
            }
        }
        let labels = if labels.len() == elements.len() { labels } else { (0..elements.len()).map(|k| k.to_string()).collect() };
        Ok(GroupRep { elements, labels })
    }

    fn unchecked(elements: Vec<CMat>, labels: Vec<String>) -> Self {
        GroupRep { elements, labels }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// {I, X, Y, Z}.
    pub fn pauli() -> Self {
        Self::unchecked(paulis().to_vec(), ["I", "X", "Y", "Z"].iter().map(|s| s.to_string()).collect())
    }

    /// The d² operators X(k)Z(l).
    pub fn heisenberg_weyl(d: usize) -> Self {
        let labels = (0..d * d).map(|w| format!("σ({},{})", w % d, w / d)).collect();
        Self::unchecked(hw_group(d), labels)
    }

    /// Regular Weyl representation of Z_d × Z_d on C^{d²}, with basis label
    /// x = k + d·l: shifts in both coordinates times characters.
    pub fn weyl_regular(d: usize) -> Self {
        let mut els = Vec::new();
        let mut labels = Vec::new();
        for al in 0..d {
            for ak in 0..d {
                for cl in 0..d {
                    for ck in 0..d {
                        els.push(kron(&hw_op(d, al, cl), &hw_op(d, ak, ck)));
                        labels.push(format!("shift({ak},{al})·char({ck},{cl})"));
                    }
                }
            }
        }
        Self::unchecked(els, labels)
    }

    /// {U_g ⊗ V_h}.
    pub fn tensor(&self, other: &GroupRep) -> Self {
        let mut els = Vec::new();
        let mut labels = Vec::new();
        for (a, la) in self.elements.iter().zip(&self.labels) {
            for (b, lb) in other.elements.iter().zip(&other.labels) {
                els.push(kron(a, b));
                labels.push(format!("{la}⊗{lb}"));
            }
        }
        Self::unchecked(els, labels)
    }

    /// max over a Hermitian basis of ‖(1/|G|)Σ U H U† − Tr(H) I/d‖.
    pub fn one_design_residual(&self) -> f64 {
        let d = self.dim();
        let g = self.len() as f64;
        let mut worst = 0.0_f64;
        for h in hermitian_basis(d) {
            let tw = self.elements.iter().fold(CMat::zeros(d, d), |acc, u| acc + u * &h * u.adjoint()) / C64::from(g);
            let target = identity(d) * (h.trace() / C64::from(d as f64));
            worst = worst.max((tw - target).iter().fold(0.0, |a, z| a.max(z.norm())));
        }
        worst
    }

    pub fn is_one_design(&self) -> bool {
        self.one_design_residual() <= ONE_DESIGN_TOL
    }
}

/// Orthogonal Hermitian basis of d×d matrices: |i⟩⟨i|, |i⟩⟨j|+|j⟩⟨i|, −i|i⟩⟨j|+i|j⟩⟨i|.
pub fn hermitian_basis(d: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut m = CMat::zeros(d, d);
        m[(i, i)] = ONE;
        out.push(m);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut m = CMat::zeros(d, d);
            m[(i, j)] = ONE;
            m[(j, i)] = ONE;
            out.push(m);
            let mut m = CMat::zeros(d, d);
            m[(i, j)] = C64::new(0.0, -1.0);
            m[(j, i)] = C64::new(0.0, 1.0);
            out.push(m);
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceCheck {
    pub ok: bool,
    pub residual: f64,
}

/// max over g and a Hermitian basis of ‖N(U_g H U_g†) − V_g N(H) V_g†‖₁.
pub fn verify_covariance(ch: &ChannelChoi, rep_in: &GroupRep, rep_out: &GroupRep) -> Result<CovarianceCheck> {
    if rep_in.dim() != ch.d_in || rep_out.dim() != ch.d_out || rep_in.len() != rep_out.len() {
        return Err(Error::dim("representations do not match the channel"));
    }
    let mut worst = 0.0_f64;
    for h in hermitian_basis(ch.d_in) {
        let nh = apply_choi(ch, &h)?;
        for (u, v) in rep_in.elements.iter().zip(&rep_out.elements) {
            let lhs = apply_choi(ch, &(u * &h * u.adjoint()))?;
            let rhs = v * &nh * v.adjoint();
            worst = worst.max(trace_norm(&(lhs - rhs)));
        }
    }
    Ok(CovarianceCheck { ok: worst <= COVARIANCE_TOL, residual: worst })
}

/// Environment representation W^g of a covariant channel.
#[derive(Debug, Clone)]
pub struct EnvironmentRep {
    /// Coefficient matrices with V_g† L^j U_g = Σ_k w_jk L^k, before any unitary projection.
    pub w: Vec<CMat>,
    pub rep: GroupRep,
    /// max_g ‖U^M U_g − (V_g ⊗ W_g) U^M‖_∞
    pub residual: f64,
    /// max_g ‖w_g† w_g − I‖_∞
    pub unitarity: f64,
}

fn pinv(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    let top = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    svd.pseudo_inverse(1e-12 * top.max(1e-300)).expect("pseudo-inverse with non-negative cutoff")
}

/// Solve for W^g_E with U^M U^g = (V^g ⊗ W^g) U^M, where U^M = Σ_j L^j ⊗ |j⟩_E.
pub fn environment_rep(kraus: &[CMat], rep_in: &GroupRep, rep_out: &GroupRep) -> Result<EnvironmentRep> {
    let ch = choi_from_kraus(kraus)?;
    let cov = verify_covariance(&ch, rep_in, rep_out)?;
    if !cov.ok {
        return Err(Error::invalid(format!("channel is not covariant (residual {:.3e})", cov.residual)));
    }
    let nk = kraus.len();
    let iso = super::canonical_isometric_extension(kraus)?;
    let gram = CMat::from_fn(nk, nk, |l, k| (kraus[l].adjoint() * &kraus[k]).trace());
    let gram_t_inv = pinv(&gram.transpose());
    let mut ws = Vec::new();
    let mut els = Vec::new();
    let mut residual = 0.0_f64;
    let mut unitarity = 0.0_f64;
    for (u, v) in rep_in.elements.iter().zip(&rep_out.elements) {
        let b = CMat::from_fn(nk, nk, |j, l| (kraus[l].adjoint() * v.adjoint() * &kraus[j] * u).trace());
        let w = b * &gram_t_inv;
        let un = (w.adjoint() * &w - identity(nk)).iter().fold(0.0, |a: f64, z| a.max(z.norm()));
        unitarity = unitarity.max(un);
        let wg = if un > 1e-12 { polar_unitary(&w) } else { w.clone() };
        let lhs = &iso.v * u;
        let rhs = kron(v, &wg) * &iso.v;
        residual = residual.max(op_norm(&(lhs - rhs)));
        ws.push(w);
        els.push(wg);
    }
    Ok(EnvironmentRep { w: ws, rep: GroupRep::unchecked(els, rep_in.labels.clone()), residual, unitarity })
}

/// Representations for bicovariance: U_g on A′, V_h on B′ and the output
/// unitaries W_{g,h} on A, T_{g,h} on B (indexed `[g][h]`).
#[derive(Debug, Clone)]
pub struct BiReps {
    pub u: GroupRep,
    pub v: GroupRep,
    pub w: Vec<Vec<CMat>>,
    pub t: Vec<Vec<CMat>>,
}

impl BiReps {
    fn check_shape(&self, n: &BidirectionalChannel) -> Result<()> {
        let [sa, a, b, sb] = n.dims;
        let ok = self.u.dim() == sa
            && self.v.dim() == sb
            && self.w.len() == self.u.len()
            && self.t.len() == self.u.len()
            && self.w.iter().all(|r| r.len() == self.v.len() && r.iter().all(|m| m.shape() == (a, a)))
            && self.t.iter().all(|r| r.len() == self.v.len() && r.iter().all(|m| m.shape() == (b, b)));
        if ok {
            Ok(())
        } else {
            Err(Error::dim("bicovariance representations do not match the channel dimensions"))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BicovarianceCheck {
    pub ok: bool,
    /// max over (g,h) and a Hermitian basis of the covariance defect in trace norm
    pub residual: f64,
    pub one_design_u: f64,
    pub one_design_v: f64,
}

pub fn verify_bicovariance(n: &BidirectionalChannel, reps: &BiReps) -> Result<BicovarianceCheck> {
    reps.check_shape(n)?;
    let point = n.point();
    let one_design_u = reps.u.one_design_residual();
    let one_design_v = reps.v.one_design_residual();
    let mut worst = 0.0_f64;
    for h in hermitian_basis(point.d_in) {
        let nh = apply_choi(&point, &h)?;
        for (g, ug) in reps.u.elements.iter().enumerate() {
            for (k, vh) in reps.v.elements.iter().enumerate() {
                let inp = kron(ug, vh);
                let out = kron(&reps.w[g][k], &reps.t[g][k]);
                let lhs = apply_choi(&point, &(&inp * &h * inp.adjoint()))?;
                let rhs = &out * &nh * out.adjoint();
                worst = worst.max(trace_norm(&(lhs - rhs)));
            }
        }
    }
    Ok(BicovarianceCheck {
        ok: worst <= COVARIANCE_TOL && one_design_u <= ONE_DESIGN_TOL && one_design_v <= ONE_DESIGN_TOL,
        residual: worst,
        one_design_u,
        one_design_v,
    })
}

/// Output representations for a unitary interaction G on A′ ⊗ B′: factor
/// G (U_g ⊗ V_h) G† = W ⊗ T. Fails when some conjugate is not a product.
pub fn product_output_reps(gate: &CMat, rep_u: &GroupRep, rep_v: &GroupRep) -> Result<BiReps> {
    let (da, db) = (rep_u.dim(), rep_v.dim());
    if gate.shape() != (da * db, da * db) {
        return Err(Error::dim("gate does not act on A′ ⊗ B′"));
    }
    let mut w = Vec::new();
    let mut t = Vec::new();
    let mut worst = 0.0_f64;
    for ug in &rep_u.elements {
        let mut wr = Vec::new();
        let mut tr = Vec::new();
        for vh in &rep_v.elements {
            let m = gate * kron(ug, vh) * gate.adjoint();
            let (a, b, res) = factor_product(&m, da, db);
            worst = worst.max(res);
            // rescale both factors to unitaries; the phase split is irrelevant under conjugation
            let sa = (a.adjoint() * &a)[(0, 0)].re.sqrt();
            wr.push(&a / C64::from(sa));
            tr.push(&b * C64::from(sa));
        }
        w.push(wr);
        t.push(tr);
    }
    if worst > COVARIANCE_TOL {
        return Err(Error::invalid(format!("conjugated group elements are not products (residual {worst:.3e})")));
    }
    Ok(BiReps { u: rep_u.clone(), v: rep_v.clone(), w, t })
}

fn direct_sum_one(t: &CMat) -> CMat {
    let n = t.nrows();
    let mut m = CMat::zeros(n + 1, n + 1);
    m.view_mut((0, 0), (n, n)).copy_from(t);
    m[(n, n)] = ONE;
    m
}

/// Candidate bicovariance representations for the coherent erasure-cell
/// channel Σ_x |x⟩⟨x| ⊗ U^q σ^x. Since that channel is the erasure channel
/// after the controlled unitary C = Σ_x |x⟩⟨x| ⊗ σ^x, output unitaries are
/// obtained by factoring C (U_g ⊗ V_h) C† = W ⊗ T′ and setting T = T′ ⊕ 1.
/// Each entry is a named candidate and either the reps or the reason it fails.
pub fn bicovariance_candidates_for_cell(d: usize) -> Vec<(String, Result<BiReps>)> {
    let nx = d * d;
    let mut gate = CMat::zeros(nx * d, nx * d);
    for x in 0..nx {
        gate.view_mut((x * d, x * d), (d, d)).copy_from(&hw_sigma(d, x));
    }
    let hw = GroupRep::heisenberg_weyl(d);
    let extend = |r: Result<BiReps>| -> Result<BiReps> {
        let mut r = r?;
        for row in &mut r.t {
            for m in row.iter_mut() {
                *m = direct_sum_one(m);
            }
        }
        Ok(r)
    };
    vec![
        ("weyl-regular(Z_d×Z_d) ⊗ HW(d)".to_string(), extend(product_output_reps(&gate, &GroupRep::weyl_regular(d), &hw))),
        ("HW(d²) shift-clock ⊗ HW(d)".to_string(), extend(product_output_reps(&gate, &GroupRep::heisenberg_weyl(nx), &hw))),
    ]
}
