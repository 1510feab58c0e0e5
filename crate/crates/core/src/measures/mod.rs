//! Entanglement measures and channel bounds: max-Rains quantities (state,
//! channel, bidirectional), Rains and PPT relative entropies by Frank–Wolfe,
//! the PPT-relaxed max-relative entropy of entanglement and its bidirectional
//! lower estimate, and the amortization check.

mod bidirectional;
mod fw;

pub use bidirectional::{amortization_check_rains, e_max_bidirectional_lower, AmortizationReport, EmaxSearch};
pub use fw::{rains_relative_entropy, relative_entropy_of_entanglement_ppt, sandwiched_rains, FwConfig, FwTrace};

use serde::Serialize;

use crate::channels::{BidirectionalChannel, ChannelChoi};
use crate::conic::{ConicProgram, ConicSolution, LinearMap, Rel, SolveStatus, SolverSettings};
use crate::qcore::{identity, CMat, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    ExactSdp,
    PptRelaxation,
    FwUpperEstimate,
    HeuristicLower,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub value_bits: f64,
    /// The value on the linear scale (W, Γ, μ) when the measure is a log of one.
    pub linear: Option<f64>,
    pub kind: BoundKind,
    pub gap: f64,
    pub solver_status: SolveStatus,
    pub iterations: usize,
}

impl BoundReport {
    fn from_sdp(name: &str, kind: BoundKind, sol: &ConicSolution) -> Self {
        BoundReport {
            name: name.to_string(),
            value_bits: sol.primal_value.log2(),
            linear: Some(sol.primal_value),
            kind,
            gap: sol.gap,
            solver_status: sol.status,
            iterations: sol.iterations,
        }
    }
}

/// Bipartition of a multipartite operator; the partial transpose acts on `right`.
#[derive(Debug, Clone)]
pub struct BipartiteCut {
    pub dims: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BipartiteCut {
    pub fn new(dims: &[usize], left: &[usize], right: &[usize]) -> Result<Self> {
        let mut all: Vec<usize> = left.iter().chain(right).copied().collect();
        all.sort_unstable();
        if all != (0..dims.len()).collect::<Vec<_>>() {
            return Err(Error::invalid(format!("cut {left:?} | {right:?} does not partition {} systems", dims.len())));
        }
        Ok(BipartiteCut { dims: dims.to_vec(), left: left.to_vec(), right: right.to_vec() })
    }

    /// A : B for a bipartite system.
    pub fn two(da: usize, db: usize) -> Self {
        BipartiteCut { dims: vec![da, db], left: vec![0], right: vec![1] }
    }

    /// L_A A : B L_B for four systems.
    pub fn four(dims: [usize; 4]) -> Self {
        BipartiteCut { dims: dims.to_vec(), left: vec![0, 1], right: vec![2, 3] }
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    fn check(&self, rho: &CMat) -> Result<()> {
        if rho.nrows() != self.total() || !rho.is_square() {
            return Err(Error::dim(format!("operator {:?} vs cut dimensions {:?}", rho.shape(), self.dims)));
        }
        Ok(())
    }

    pub fn transpose_map(&self) -> LinearMap {
        LinearMap::partial_transpose(&self.dims, &self.right)
    }

    /// The same cut with the transpose moved to the other side.
    pub fn flipped(&self) -> Self {
        BipartiteCut { dims: self.dims.clone(), left: self.right.clone(), right: self.left.clone() }
    }
}

fn scalar(v: f64) -> CMat {
    CMat::from_element(1, 1, C64::from(v))
}

/// W(A;B)_ρ = min Tr(C + D) s.t. T_B(C − D) ⪰ ρ, C, D ⪰ 0; R_max = log₂ W.
pub fn w_state(rho: &CMat, cut: &BipartiteCut, settings: &SolverSettings) -> Result<BoundReport> {
    cut.check(rho)?;
    let n = cut.total();
    let pt = cut.transpose_map();
    let mut p = ConicProgram::new();
    let c = p.psd("C", n);
    let d = p.psd("D", n);
    p.constrain("rains", vec![(c, pt.clone()), (d, pt.scaled(-1.0))], Rel::Geq, rho.clone());
    p.minimize(vec![(c, identity(n)), (d, identity(n))]);
    let sol = p.solve(settings)?.require_optimal("W state SDP")?;
    Ok(BoundReport::from_sdp("R_max", BoundKind::ExactSdp, &sol))
}

/// Γ(N) = min ‖Tr_B(V + Y)‖_∞ s.t. T_B(V − Y) ⪰ J^N, V, Y ⪰ 0; R_max(N) = log₂ Γ.
pub fn gamma_channel(ch: &ChannelChoi, settings: &SolverSettings) -> Result<BoundReport> {
    let dims = [ch.d_in, ch.d_out];
    let n = ch.d_in * ch.d_out;
    let pt = LinearMap::partial_transpose(&dims, &[1]);
    let tr = LinearMap::partial_trace(&dims, &[0]);
    let mut p = ConicProgram::new();
    let v = p.psd("V", n);
    let y = p.psd("Y", n);
    p.constrain("rains", vec![(v, pt.clone()), (y, pt.scaled(-1.0))], Rel::Geq, ch.j.clone());
    p.minimize_spectral_norm(vec![(v, tr.clone()), (y, tr)], true);
    let sol = p.solve(settings)?.require_optimal("Γ channel SDP")?;
    Ok(BoundReport::from_sdp("R_max(channel)", BoundKind::ExactSdp, &sol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    Primal,
    Dual,
}

/// Γ²→²(N) in either SDP form; R²→²_max = log₂ Γ²→².
pub fn gamma_bidirectional(n: &BidirectionalChannel, form: Form, settings: &SolverSettings) -> Result<BoundReport> {
    let sol = gamma_bidirectional_solution(n, form, settings)?.require_optimal("Γ²→² SDP")?;
    let name = match form {
        Form::Primal => "R_max^{2->2} (primal)",
        Form::Dual => "R_max^{2->2} (dual)",
    };
    Ok(BoundReport::from_sdp(name, BoundKind::ExactSdp, &sol))
}

/// Raw solver output of either Γ²→² form.
pub fn gamma_bidirectional_solution(n: &BidirectionalChannel, form: Form, settings: &SolverSettings) -> Result<ConicSolution> {
    gamma_bidirectional_program(n, form).solve(settings)
}

pub fn gamma_bidirectional_program(n: &BidirectionalChannel, form: Form) -> ConicProgram {
    let [sa, a, b, sb] = n.dims;
    let dims = [sa, a, b, sb];
    let tot = sa * a * b * sb;
    let pt = LinearMap::partial_transpose(&dims, &[2, 3]);
    let mut p = ConicProgram::new();
    match form {
        Form::Dual => {
            let tr = LinearMap::partial_trace(&dims, &[0, 3]);
            let v = p.psd("V", tot);
            let y = p.psd("Y", tot);
            p.constrain("rains", vec![(v, pt.clone()), (y, pt.scaled(-1.0))], Rel::Geq, n.j.clone());
            p.minimize_spectral_norm(vec![(v, tr.clone()), (y, tr)], true);
        }
        Form::Primal => {
            let x = p.psd("X", tot);
            let rho = p.psd("rho", sa * sb);
            // ρ_{S_A S_B} ⊗ I_{AB}, reordered to (S_A, A, B, S_B)
            let lift = LinearMap::permute(&[sa, sb, a, b], &[0, 2, 3, 1]).compose(&LinearMap::kron_right(sa * sb, &identity(a * b)));
            let zero = CMat::zeros(tot, tot);
            p.constrain("upper", vec![(rho, lift.clone()), (x, pt.clone().scaled(-1.0))], Rel::Geq, zero.clone());
            p.constrain("lower", vec![(rho, lift), (x, pt)], Rel::Geq, zero);
            p.constrain("normalization", vec![(rho, LinearMap::trace(sa * sb))], Rel::Eq, scalar(1.0));
            p.maximize(vec![(x, n.j.clone())]);
        }
    }
    p
}

/// Both Γ²→² forms with their relative disagreement.
#[derive(Debug, Clone, Serialize)]
pub struct GammaPair {
    pub primal: BoundReport,
    pub dual: BoundReport,
    /// |primal − dual| / max(1, dual) on the linear scale
    pub relative_gap: f64,
}

pub fn gamma_bidirectional_both(n: &BidirectionalChannel, settings: &SolverSettings) -> Result<GammaPair> {
    let primal = gamma_bidirectional(n, Form::Primal, settings)?;
    let dual = gamma_bidirectional(n, Form::Dual, settings)?;
    let (p, d) = (primal.linear.unwrap(), dual.linear.unwrap());
    Ok(GammaPair { relative_gap: (p - d).abs() / d.max(1.0), primal, dual })
}

/// PPT-relaxed E_max: min μ s.t. ρ ⪯ G, G ⪰ 0, T_B G ⪰ 0, Tr G = μ.
/// Returns the report and the dual of ρ ⪯ G (the gradient of μ in ρ).
pub fn e_max_ppt_with_dual(rho: &CMat, cut: &BipartiteCut, settings: &SolverSettings) -> Result<(BoundReport, CMat)> {
    cut.check(rho)?;
    let n = cut.total();
    let mut p = ConicProgram::new();
    let g = p.psd("G", n);
    let dom = p.constrain("dominate", vec![(g, LinearMap::identity(n))], Rel::Geq, rho.clone());
    p.constrain("ppt", vec![(g, cut.transpose_map())], Rel::Geq, CMat::zeros(n, n));
    p.minimize(vec![(g, identity(n))]);
    let sol = p.solve(settings)?.require_optimal("E_max PPT SDP")?;
    let dual = sol.duals[dom].clone();
    Ok((BoundReport::from_sdp("E_max (PPT relaxation)", BoundKind::PptRelaxation, &sol), dual))
}

pub fn e_max_ppt(rho: &CMat, cut: &BipartiteCut, settings: &SolverSettings) -> Result<BoundReport> {
    Ok(e_max_ppt_with_dual(rho, cut, settings)?.0)
}

#[cfg(test)]
mod tests;
