//! Frank–Wolfe minimization of relative entropies over PPT′ and PPT states.

use serde::Serialize;

use super::{BipartiteCut, BoundKind, BoundReport};
use crate::conic::{ConicProgram, LinearMap, Rel, SolveStatus, SolverSettings};
use crate::divergences::sandwiched_renyi_value;
use crate::qcore::{eigh, hermitize, hs_inner, maximally_mixed, min_eig, partial_transpose, relative_entropy, trace_norm, CMat, C64};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct FwConfig {
    pub max_iter: usize,
    /// Stop once the linearization gap (bits) is at most this.
    pub tol: f64,
    pub settings: SolverSettings,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Finite-difference step for the sandwiched Rényi gradient.
    pub fd_step: f64,
}

impl Default for FwConfig {
    fn default() -> Self {
        FwConfig { max_iter: 500, tol: 1e-4, settings: SolverSettings::default(), armijo: 1e-4, fd_step: 1e-6 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FwTrace {
    pub values: Vec<f64>,
    pub gaps: Vec<f64>,
    pub converged: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Feasible {
    /// σ ⪰ 0, ‖T_B σ‖₁ ≤ 1
    PptPrime,
    /// σ ⪰ 0, T_B σ ⪰ 0, Tr σ = 1
    PptState,
}

fn contains(set: Feasible, rho: &CMat, cut: &BipartiteCut) -> bool {
    let pt = partial_transpose(rho, &cut.dims, &cut.right);
    match set {
        Feasible::PptPrime => min_eig(rho) >= -1e-12 && trace_norm(&pt) <= 1.0 + 1e-12,
        Feasible::PptState => min_eig(&pt) >= -1e-12,
    }
}

/// argmin_{s ∈ set} Re Tr(G s).
fn lmo(set: Feasible, g: &CMat, cut: &BipartiteCut, settings: &SolverSettings) -> Result<CMat> {
    let n = cut.total();
    let pt = cut.transpose_map();
    let mut p = ConicProgram::new();
    let s = p.psd("sigma", n);
    match set {
        Feasible::PptPrime => {
            let pos = p.psd("P", n);
            let neg = p.psd("N", n);
            p.constrain(
                "split",
                vec![(s, pt), (pos, LinearMap::identity(n).scaled(-1.0)), (neg, LinearMap::identity(n))],
                Rel::Eq,
                CMat::zeros(n, n),
            );
            p.constrain(
                "trace_norm",
                vec![(pos, LinearMap::trace(n)), (neg, LinearMap::trace(n))],
                Rel::Leq,
                CMat::from_element(1, 1, C64::from(1.0)),
            );
        }
        Feasible::PptState => {
            p.constrain("ppt", vec![(s, pt)], Rel::Geq, CMat::zeros(n, n));
            p.constrain("trace", vec![(s, LinearMap::trace(n))], Rel::Eq, CMat::from_element(1, 1, C64::from(1.0)));
        }
    }
    p.minimize(vec![(s, hermitize(g))]);
    let sol = p.solve(settings)?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::Solver { status: sol.status, detail: "Frank–Wolfe linear subproblem".into() });
    }
    Ok(hermitize(sol.value(s)))
}

/// Gradient of σ ↦ −Tr ρ log₂ σ, i.e. −Dlog₂[σ](ρ) via first divided differences.
fn relative_entropy_gradient(rho: &CMat, sigma: &CMat) -> CMat {
    let (vals, u) = eigh(sigma);
    let r = u.adjoint() * rho * &u;
    let n = vals.len();
    let ln2 = std::f64::consts::LN_2;
    let mut g = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (vals[i], vals[j]);
            let dd = if (a - b).abs() <= 1e-12 * a.abs().max(b.abs()) { 1.0 / a } else { (a.ln() - b.ln()) / (a - b) };
            g[(i, j)] = r[(i, j)] * C64::from(-dd / ln2);
        }
    }
    hermitize(&(&u * g * u.adjoint()))
}

/// Central finite-difference gradient along an orthonormal Hermitian basis.
fn fd_gradient(f: &dyn Fn(&CMat) -> f64, sigma: &CMat, h: f64) -> CMat {
    let n = sigma.nrows();
    let mut g = CMat::zeros(n, n);
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut push = |e: CMat| {
        let fp = f(&(sigma + &e * C64::from(h)));
        let fm = f(&(sigma - &e * C64::from(h)));
        g += &e * C64::from((fp - fm) / (2.0 * h));
    };
    for i in 0..n {
        let mut e = CMat::zeros(n, n);
        e[(i, i)] = C64::from(1.0);
        push(e);
        for j in i + 1..n {
            let mut e = CMat::zeros(n, n);
            e[(i, j)] = C64::from(s2);
            e[(j, i)] = C64::from(s2);
            push(e);
            let mut e = CMat::zeros(n, n);
            e[(i, j)] = C64::new(0.0, -s2);
            e[(j, i)] = C64::new(0.0, s2);
            push(e);
        }
    }
    g
}

struct Outcome {
    sigma: CMat,
    trace: FwTrace,
}

fn frank_wolfe(
    set: Feasible,
    cut: &BipartiteCut,
    f: &dyn Fn(&CMat) -> f64,
    grad: &dyn Fn(&CMat) -> CMat,
    start: CMat,
    cfg: &FwConfig,
) -> Result<Outcome> {
    let mut sigma = start;
    let mut fv = f(&sigma);
    let mut values = vec![fv];
    let mut gaps = Vec::new();
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let g = grad(&sigma);
        let s = lmo(set, &g, cut, &cfg.settings)?;
        let dir = &s - &sigma;
        let gap = -hs_inner(&g, &dir);
        gaps.push(gap.max(0.0));
        if gap <= cfg.tol {
            converged = true;
            break;
        }
        let mut step = 1.0;
        let mut accepted = false;
        while step > 1e-12 {
            let cand = &sigma + &dir * C64::from(step);
            let fc = f(&cand);
            if fc.is_finite() && fc <= fv - cfg.armijo * step * gap {
                sigma = cand;
                fv = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        values.push(fv);
        if !accepted {
            break;
        }
    }
    Ok(Outcome { sigma, trace: FwTrace { values, gaps, converged } })
}

fn fw_report(name: &str, value: f64, trace: &FwTrace, kind: BoundKind) -> BoundReport {
    BoundReport {
        name: name.to_string(),
        value_bits: value,
        linear: None,
        kind,
        gap: trace.gaps.last().copied().unwrap_or(0.0),
        solver_status: SolveStatus::Optimal,
        iterations: trace.gaps.len(),
    }
}

fn relative_entropy_over(set: Feasible, rho: &CMat, cut: &BipartiteCut, cfg: &FwConfig, name: &str, kind: BoundKind) -> Result<(BoundReport, FwTrace, CMat)> {
    cut.check(rho)?;
    // ρ itself is feasible: the minimum 0 is attained (D ≥ −log Tr σ ≥ 0)
    if contains(set, rho, cut) {
        let trace = FwTrace { values: vec![0.0], gaps: vec![0.0], converged: true };
        return Ok((fw_report(name, 0.0, &trace, kind), trace, rho.clone()));
    }
    let n = cut.total();
    let f = |s: &CMat| relative_entropy(rho, s);
    let grad = |s: &CMat| relative_entropy_gradient(rho, s);
    let out = frank_wolfe(set, cut, &f, &grad, maximally_mixed(n), cfg)?;
    let v = *out.trace.values.last().unwrap();
    Ok((fw_report(name, v, &out.trace, kind), out.trace, out.sigma))
}

/// Frank–Wolfe estimate of R(A;B)_ρ = min_{σ ∈ PPT′} D(ρ‖σ) (an upper estimate with its gap).
pub fn rains_relative_entropy(rho: &CMat, cut: &BipartiteCut, cfg: &FwConfig) -> Result<(BoundReport, FwTrace)> {
    let (r, t, _) = relative_entropy_over(Feasible::PptPrime, rho, cut, cfg, "Rains relative entropy", BoundKind::FwUpperEstimate)?;
    Ok((r, t))
}

/// min over PPT states of D(ρ‖σ), a relaxation of the relative entropy of entanglement.
pub fn relative_entropy_of_entanglement_ppt(rho: &CMat, cut: &BipartiteCut, cfg: &FwConfig) -> Result<(BoundReport, FwTrace)> {
    let (r, t, _) = relative_entropy_over(Feasible::PptState, rho, cut, cfg, "relative entropy of entanglement (PPT)", BoundKind::PptRelaxation)?;
    Ok((r, t))
}

/// Frank–Wolfe estimate of min_{σ ∈ PPT′} D̃_α(ρ‖σ) with finite-difference gradients.
/// Returns the report, the trace and the final σ.
pub fn sandwiched_rains(rho: &CMat, cut: &BipartiteCut, alpha: f64, cfg: &FwConfig) -> Result<(BoundReport, FwTrace, CMat)> {
    cut.check(rho)?;
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::invalid(format!("sandwiched Rains order {alpha} outside (1, 2]")));
    }
    let name = format!("sandwiched Rains (alpha = {alpha})");
    if contains(Feasible::PptPrime, rho, cut) {
        let trace = FwTrace { values: vec![0.0], gaps: vec![0.0], converged: true };
        return Ok((fw_report(&name, 0.0, &trace, BoundKind::FwUpperEstimate), trace, rho.clone()));
    }
    let n = cut.total();
    let f = |s: &CMat| {
        if min_eig(s) <= 0.0 {
            f64::INFINITY
        } else {
            sandwiched_renyi_value(rho, s, alpha)
        }
    };
    let h = cfg.fd_step;
    let grad = |s: &CMat| fd_gradient(&f, s, h);
    let out = frank_wolfe(Feasible::PptPrime, cut, &f, &grad, maximally_mixed(n), cfg)?;
    let v = *out.trace.values.last().unwrap();
    Ok((fw_report(&name, v, &out.trace, BoundKind::FwUpperEstimate), out.trace, out.sigma))
}
