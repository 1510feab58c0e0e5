//! Generalized divergences in bits: Umegaki relative entropy, max-relative
//! entropy (eigen and SDP forms), sandwiched Rényi and hypothesis testing.

use serde::Serialize;

use crate::conic::{ConicProgram, LinearMap, Rel, SolverSettings};
use crate::qcore::{self, eigh, identity, powm_psd, support_cutoff, CMat, C64};
use crate::{Error, Result};

/// Largest value reported by the hypothesis-testing divergence.
pub const DH_CAP_BITS: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Sdp,
    Eigen,
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceValue {
    /// Bits; `f64::INFINITY` when the support condition fails.
    pub value: f64,
    pub method: Method,
    /// Method-specific residual: for D_max the eigen/SDP disagreement, for SDPs the gap.
    pub residual: f64,
    /// Set when a value was clipped (hypothesis testing with orthogonal supports).
    pub capped: bool,
}

impl DivergenceValue {
    fn plain(value: f64, method: Method) -> Self {
        DivergenceValue { value, method, residual: 0.0, capped: false }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

fn check_pair(rho: &CMat, sigma: &CMat) -> Result<()> {
    if !rho.is_square() || rho.shape() != sigma.shape() {
        return Err(Error::dim(format!("divergence arguments {:?} and {:?}", rho.shape(), sigma.shape())));
    }
    Ok(())
}

/// Weight of ρ outside the support of σ.
fn support_leak(rho: &CMat, sigma: &CMat) -> f64 {
    let (sv, svec) = eigh(sigma);
    let cut = support_cutoff(&sv);
    let mut leak = 0.0;
    for (k, &v) in sv.iter().enumerate() {
        if v <= cut {
            let col = svec.column(k);
            leak += (col.adjoint() * rho * col)[(0, 0)].re;
        }
    }
    leak
}

fn violates_support(rho: &CMat, sigma: &CMat) -> bool {
    let top = qcore::eigvalsh(rho).iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    support_leak(rho, sigma) > 1e-12 * top.max(1e-300)
}

pub fn relative_entropy(rho: &CMat, sigma: &CMat) -> Result<DivergenceValue> {
    check_pair(rho, sigma)?;
    Ok(DivergenceValue::plain(qcore::relative_entropy(rho, sigma), Method::Eigen))
}

/// log₂ λ_max(σ^{-1/2} ρ σ^{-1/2}) on the support of σ.
pub fn d_max_eigen(rho: &CMat, sigma: &CMat) -> Result<f64> {
    check_pair(rho, sigma)?;
    if violates_support(rho, sigma) {
        return Ok(f64::INFINITY);
    }
    let s = powm_psd(sigma, -0.5);
    Ok(qcore::max_eig(&(&s * rho * &s)).log2())
}

/// min{λ : ρ ⪯ 2^λ σ} as an SDP in t = 2^λ.
pub fn d_max_sdp(rho: &CMat, sigma: &CMat, settings: &SolverSettings) -> Result<DivergenceValue> {
    check_pair(rho, sigma)?;
    if violates_support(rho, sigma) {
        return Ok(DivergenceValue::plain(f64::INFINITY, Method::Sdp));
    }
    let mut p = ConicProgram::new();
    let t = p.psd("t", 1);
    p.constrain("dominate", vec![(t, LinearMap::scalar_times(sigma))], Rel::Geq, rho.clone());
    p.minimize(vec![(t, CMat::from_element(1, 1, C64::from(1.0)))]);
    let sol = p.solve(settings)?.require_optimal("max-relative entropy")?;
    Ok(DivergenceValue { value: sol.primal_value.log2(), method: Method::Sdp, residual: sol.gap, capped: false })
}

/// Max-relative entropy computed both ways; the residual records their disagreement.
pub fn max_relative_entropy(rho: &CMat, sigma: &CMat) -> Result<DivergenceValue> {
    let eig = d_max_eigen(rho, sigma)?;
    if eig.is_infinite() {
        return Ok(DivergenceValue::plain(f64::INFINITY, Method::Eigen));
    }
    let sdp = d_max_sdp(rho, sigma, &SolverSettings::default())?;
    Ok(DivergenceValue { value: eig, method: Method::Eigen, residual: (eig - sdp.value).abs(), capped: false })
}

/// D̃_α(ρ‖σ) = (α−1)⁻¹ log₂ Tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α] / Tr ρ.
pub fn sandwiched_renyi(rho: &CMat, sigma: &CMat, alpha: f64) -> Result<DivergenceValue> {
    check_pair(rho, sigma)?;
    if !(alpha > 0.0) || (alpha - 1.0).abs() < 1e-12 {
        return Err(Error::invalid(format!("sandwiched Rényi order {alpha}: need α ∈ (0,1)∪(1,∞)")));
    }
    if alpha > 1.0 && violates_support(rho, sigma) {
        return Ok(DivergenceValue::plain(f64::INFINITY, Method::Eigen));
    }
    Ok(DivergenceValue::plain(sandwiched_renyi_value(rho, sigma, alpha), Method::Eigen))
}

/// Unchecked core of [`sandwiched_renyi`], shared with the Rains estimator.
pub(crate) fn sandwiched_renyi_value(rho: &CMat, sigma: &CMat, alpha: f64) -> f64 {
    let s = powm_psd(sigma, (1.0 - alpha) / (2.0 * alpha));
    let inner = &s * rho * &s;
    let q: f64 = qcore::eigvalsh(&inner).iter().map(|&x| x.max(0.0).powf(alpha)).sum();
    let tr = rho.trace().re;
    (q / tr).log2() / (alpha - 1.0)
}

/// D_h^ε(ρ‖σ) = −log₂ min{Tr Λσ : 0 ⪯ Λ ⪯ I, Tr Λρ ≥ 1 − ε}, capped at
/// [`DH_CAP_BITS`]. An optimal Tr Λσ below ten times the solver tolerance
/// cannot be told apart from zero and is reported as capped.
pub fn hypothesis_testing(rho: &CMat, sigma: &CMat, eps: f64, settings: &SolverSettings) -> Result<DivergenceValue> {
    check_pair(rho, sigma)?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!("hypothesis-testing ε = {eps} outside [0,1]")));
    }
    let n = rho.nrows();
    let mut p = ConicProgram::new();
    let l = p.psd("Lambda", n);
    p.constrain("below_identity", vec![(l, LinearMap::identity(n))], Rel::Leq, identity(n));
    p.constrain(
        "type_one",
        vec![(l, LinearMap::inner(rho))],
        Rel::Geq,
        CMat::from_element(1, 1, C64::from(1.0 - eps)),
    );
    p.minimize(vec![(l, sigma.clone())]);
    let sol = p.solve(settings)?.require_optimal("hypothesis testing")?;
    let beta = sol.primal_value;
    let cap = 2f64.powf(-DH_CAP_BITS).max(10.0 * settings.tol);
    if beta <= cap {
        return Ok(DivergenceValue { value: DH_CAP_BITS, method: Method::Sdp, residual: sol.gap, capped: true });
    }
    Ok(DivergenceValue { value: -beta.log2(), method: Method::Sdp, residual: sol.gap, capped: false })
}
