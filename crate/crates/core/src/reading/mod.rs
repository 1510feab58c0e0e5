//! Private reading of wiretap memory cells: the single-copy non-adaptive
//! rate I(X;L_B B) − I(X;E), its coherent-information form, the erasure
//! capacity formula, a multi-start optimizer and the bidirectional upper bound.

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{coherent_bidirectional, WiretapMemoryCell};
use crate::conic::SolverSettings;
use crate::measures::{e_max_bidirectional_lower, gamma_bidirectional, BoundReport, EmaxSearch, Form};
use crate::qcore::{entropy, haar_ket, identity, kron, partial_trace, random_simplex, seeded_rng, CMat, CVec, C64};
use crate::{Error, Result};

/// p over the alphabet and a pure input on L_B ⊗ B′.
#[derive(Debug, Clone, Serialize)]
pub struct ReadingEnsemble {
    pub p: Vec<f64>,
    #[serde(serialize_with = "ser_ket")]
    pub input: CVec,
}

fn ser_ket<S: serde::Serializer>(v: &CVec, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v.iter() {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl ReadingEnsemble {
    pub fn new(p: Vec<f64>, input: CVec) -> Result<Self> {
        if p.iter().any(|x| *x < -1e-12 || !x.is_finite()) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("alphabet distribution is not a probability vector"));
        }
        if (input.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("reading input is not a unit vector"));
        }
        Ok(ReadingEnsemble { p, input })
    }

    /// Uniform p with Φ on L_B B′.
    pub fn uniform_max_entangled(cell: &WiretapMemoryCell) -> Self {
        let d = cell.d_in();
        ReadingEnsemble { p: vec![1.0 / cell.len() as f64; cell.len()], input: max_entangled_ket(d) }
    }
}

fn max_entangled_ket(d: usize) -> CVec {
    let s = C64::from(1.0 / (d as f64).sqrt());
    CVec::from_fn(d * d, |k, _| if k / d == k % d { s } else { C64::from(0.0) })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateComponents {
    /// I(X; L_B B)
    pub reader: f64,
    /// I(X; E)
    pub eavesdropper: f64,
    /// I(X⟩L_B B) of the purified state
    pub coherent: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub label: String,
    pub rate_bits: f64,
    pub components: RateComponents,
    pub ensemble: ReadingEnsemble,
    /// best-so-far after each restart (empty for a single evaluation)
    pub trace: Vec<f64>,
}

fn check(cell: &WiretapMemoryCell, ens: &ReadingEnsemble) -> Result<()> {
    let d = cell.d_in();
    if ens.p.len() != cell.len() {
        return Err(Error::dim(format!("distribution has {} entries, alphabet has {}", ens.p.len(), cell.len())));
    }
    if ens.input.len() != d * d {
        return Err(Error::dim(format!("input has dimension {}, expected {}", ens.input.len(), d * d)));
    }
    Ok(())
}

/// Reduced states of (I ⊗ U^x)|σ⟩ on L_B B and on E.
fn branch_states(cell: &WiretapMemoryCell, input: &CVec) -> Vec<(CMat, CMat)> {
    let (l, b, e) = (cell.d_in(), cell.d_b(), cell.d_e());
    let il = identity(l);
    cell.isometries
        .iter()
        .map(|v| {
            let psi = kron(&il, &v.v) * input;
            let rho = &psi * psi.adjoint();
            let dims = [l, b, e];
            (partial_trace(&rho, &dims, &[0, 1]), partial_trace(&rho, &dims, &[2]))
        })
        .collect()
}

fn holevo(p: &[f64], states: &[&CMat]) -> f64 {
    let n = states[0].nrows();
    let avg = p.iter().zip(states).fold(CMat::zeros(n, n), |acc, (px, s)| acc + *s * C64::from(*px));
    entropy(&avg) - p.iter().zip(states).filter(|(px, _)| **px > 0.0).map(|(px, s)| px * entropy(s)).sum::<f64>()
}

fn rate_components(cell: &WiretapMemoryCell, ens: &ReadingEnsemble) -> (f64, f64) {
    let branches = branch_states(cell, &ens.input);
    let reader: Vec<&CMat> = branches.iter().map(|b| &b.0).collect();
    let eve: Vec<&CMat> = branches.iter().map(|b| &b.1).collect();
    (holevo(&ens.p, &reader), holevo(&ens.p, &eve))
}

/// I(X⟩L_B B)_ω for |ω⟩ = Σ_x √p(x)|x⟩ ⊗ U^x|σ⟩, from the global pure state.
fn coherent_value(cell: &WiretapMemoryCell, ens: &ReadingEnsemble) -> f64 {
    let (l, b, e) = (cell.d_in(), cell.d_b(), cell.d_e());
    let nx = cell.len();
    let il = identity(l);
    let blk = l * b * e;
    let mut omega = CVec::zeros(nx * blk);
    for (x, v) in cell.isometries.iter().enumerate() {
        let psi = kron(&il, &v.v) * &ens.input * C64::from(ens.p[x].max(0.0).sqrt());
        omega.rows_mut(x * blk, blk).copy_from(&psi);
    }
    let rho = &omega * omega.adjoint();
    let dims = [nx, l, b, e];
    let xlb = partial_trace(&rho, &dims, &[0, 1, 2]);
    let lb = partial_trace(&xlb, &[nx, l, b], &[1, 2]);
    entropy(&lb) - entropy(&xlb)
}

/// The n = 1 term of the non-adaptive private reading rate.
pub fn nonadaptive_rate(cell: &WiretapMemoryCell, ens: &ReadingEnsemble) -> Result<RateReport> {
    check(cell, ens)?;
    let (reader, eavesdropper) = rate_components(cell, ens);
    Ok(RateReport {
        label: "n=1 lower bound".into(),
        rate_bits: reader - eavesdropper,
        components: RateComponents { reader, eavesdropper, coherent: coherent_value(cell, ens) },
        ensemble: ens.clone(),
        trace: Vec::new(),
    })
}

/// The coherent-information rate I(X⟩L_B B)_ω, evaluated on the purified state.
pub fn coherent_rate(cell: &WiretapMemoryCell, ens: &ReadingEnsemble) -> Result<RateReport> {
    check(cell, ens)?;
    let coherent = coherent_value(cell, ens);
    let (reader, eavesdropper) = rate_components(cell, ens);
    Ok(RateReport {
        label: "coherent information (n=1)".into(),
        rate_bits: coherent,
        components: RateComponents { reader, eavesdropper, coherent },
        ensemble: ens.clone(),
        trace: Vec::new(),
    })
}

/// 2(1 − q) log₂ d.
pub fn erasure_private_capacity(d: usize, q: f64) -> Result<f64> {
    if d < 2 || !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("erasure capacity needs d ≥ 2 and q ∈ [0,1], got d = {d}, q = {q}")));
    }
    Ok(2.0 * (1.0 - q) * (d as f64).log2())
}

#[derive(Debug, Clone)]
pub struct OptimizeConfig {
    pub seed: u64,
    /// ascent iterations per restart
    pub steps: usize,
    pub fd_step: f64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig { seed: 7, steps: 300, fd_step: 1e-6 }
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

fn params_to_ensemble(nx: usize, x: &[f64]) -> ReadingEnsemble {
    let p = project_simplex(&x[..nx]);
    let m = (x.len() - nx) / 2;
    let v = CVec::from_fn(m, |k, _| C64::new(x[nx + 2 * k], x[nx + 2 * k + 1]));
    let n = v.norm();
    ReadingEnsemble { p, input: v / C64::from(n) }
}

fn ensemble_to_params(ens: &ReadingEnsemble) -> Vec<f64> {
    let mut x = ens.p.clone();
    for z in ens.input.iter() {
        x.push(z.re);
        x.push(z.im);
    }
    x
}

/// One restart of projected gradient ascent from `start`.
fn ascend(cell: &WiretapMemoryCell, start: ReadingEnsemble, cfg: &OptimizeConfig) -> (f64, ReadingEnsemble) {
    let nx = cell.len();
    let f = |x: &[f64]| {
        let e = params_to_ensemble(nx, x);
        let (r, ev) = rate_components(cell, &e);
        r - ev
    };
    let mut x = ensemble_to_params(&start);
    let mut fx = f(&x);
    let mut eta = 0.5;
    for _ in 0..cfg.steps {
        let h = cfg.fd_step;
        let grad: Vec<f64> = (0..x.len())
            .map(|k| {
                let mut a = x.clone();
                let mut b = x.clone();
                a[k] += h;
                b[k] -= h;
                (f(&a) - f(&b)) / (2.0 * h)
            })
            .collect();
        let mut moved = false;
        while eta > 1e-10 {
            let cand: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a + eta * g).collect();
            // project back so the parameters stay on the feasible set
            let cand = ensemble_to_params(&params_to_ensemble(nx, &cand));
            let fc = f(&cand);
            if fc > fx + 1e-13 {
                moved = fc - fx > 1e-11;
                x = cand;
                fx = fc;
                eta *= 1.5;
                break;
            }
            eta *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (fx, params_to_ensemble(nx, &x))
}

/// Best-found n = 1 rate over ensembles: Dirichlet p and Haar inputs, each
/// refined by projected gradient ascent. Restart k uses seed `cfg.seed + k`.
pub fn optimize_rate(cell: &WiretapMemoryCell, restarts: usize, cfg: &OptimizeConfig) -> Result<RateReport> {
    let d = cell.d_in();
    let nx = cell.len();
    let runs: Vec<(f64, ReadingEnsemble)> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded_rng(cfg.seed.wrapping_add(k as u64));
            let start = ReadingEnsemble { p: random_simplex(nx, &mut rng), input: haar_ket(d * d, &mut rng) };
            ascend(cell, start, cfg)
        })
        .collect();
    // a point mass on one letter encodes nothing and reaches exactly 0
    let mut best = ReadingEnsemble {
        p: (0..nx).map(|x| if x == 0 { 1.0 } else { 0.0 }).collect(),
        input: max_entangled_ket(d),
    };
    let mut best_v = 0.0;
    let mut trace = Vec::with_capacity(restarts);
    for (v, e) in runs {
        if v > best_v {
            best_v = v;
            best = e;
        }
        trace.push(best_v);
    }
    let mut report = nonadaptive_rate(cell, &best)?;
    report.label = "n=1 lower bound (optimized)".into();
    report.trace = trace;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct CellBounds {
    /// R²→²_max of the coherent controlled channel X B′ → X B
    pub rains: BoundReport,
    /// pure-product search for E²→²_max, when requested
    pub e_max: Option<EmaxSearch>,
}

/// Upper bound on the private reading rate of `cell` from the bidirectional
/// max-Rains information of Tr_E ∘ (Σ_x |x⟩⟨x| ⊗ U^x). The E_max search is
/// only run when `e_max_restarts > 0`.
pub fn bidirectional_upper_bound_for_cell(
    cell: &WiretapMemoryCell,
    e_max_restarts: usize,
    seed: u64,
    settings: &SolverSettings,
) -> Result<CellBounds> {
    let n = coherent_bidirectional(cell)?;
    let rains = gamma_bidirectional(&n, Form::Dual, settings)?;
    let e_max = if e_max_restarts > 0 { Some(e_max_bidirectional_lower(&n, e_max_restarts, 20, seed, settings)?) } else { None };
    Ok(CellBounds { rains, e_max })
}

#[cfg(test)]
mod tests;
