//! Conic programs over complex Hermitian matrix variables.
//!
//! A [`ConicProgram`] is assembled from Hermitian variables (PSD or free),
//! linear matrix constraints `Σ_k L_k(X_k) {=, ⪰, ⪯} B` and either a linear or
//! a spectral-norm objective. Solving canonicalizes to equality form with PSD
//! slacks, splits the variables along any block structure the data admits,
//! embeds complex blocks into real symmetric ones and runs a primal-dual
//! interior-point method (HKM direction, Mehrotra predictor-corrector).

mod compile;
mod dump;
mod ipm;
mod linmap;

pub use compile::RealSdp;
pub use ipm::IpmReport;
pub use linmap::{LinearMap, MapEntry};

use serde::{Deserialize, Serialize};

use crate::qcore::{CMat, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    Psd,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    /// expression ⪰ rhs
    Geq,
    /// expression ⪯ rhs
    Leq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct VarSpec {
    pub name: String,
    pub dim: usize,
    pub cone: Cone,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, LinearMap)>,
    pub rel: Rel,
    pub rhs: CMat,
}

#[derive(Debug, Clone)]
pub enum Objective {
    /// Re Σ_k Tr(C_k X_k).
    Linear { sense: Sense, terms: Vec<(VarId, CMat)> },
    /// Minimize ‖Σ_k L_k(X_k)‖_∞. With `psd_argument` the argument is known
    /// to be PSD on the feasible set and only `tI − M ⪰ 0` is imposed.
    SpectralNorm { terms: Vec<(VarId, LinearMap)>, psd_argument: bool },
}

#[derive(Debug, Clone)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iter: usize,
    /// Always embed complex blocks, even for real data.
    pub force_embedding: bool,
    /// Split variables along detected block structure.
    pub reduce_blocks: bool,
    pub verbose: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { tol: 1e-8, max_iter: 200, force_embedding: false, reduce_blocks: true, verbose: false }
    }
}

#[derive(Debug, Clone)]
pub struct ConicSolution {
    pub status: SolveStatus,
    pub primal_value: f64,
    pub dual_value: f64,
    /// |primal − dual| / max(1, |primal|).
    pub gap: f64,
    pub iterations: usize,
    pub names: Vec<String>,
    pub values: Vec<CMat>,
    /// Sensitivity of the optimal value to each constraint's right-hand side.
    pub duals: Vec<CMat>,
    pub report: IpmReport,
}

impl ConicSolution {
    pub fn value(&self, v: VarId) -> &CMat {
        &self.values[v.0]
    }

    pub fn named(&self, name: &str) -> Option<&CMat> {
        self.names.iter().position(|n| n == name).map(|k| &self.values[k])
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Error out unless optimal.
    pub fn require_optimal(self, what: &str) -> Result<Self> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(Error::Solver {
                status: self.status,
                detail: format!("{what}: primal {:.6e}, dual {:.6e}, gap {:.2e}", self.primal_value, self.dual_value, self.gap),
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConicProgram {
    pub vars: Vec<VarSpec>,
    pub constraints: Vec<Constraint>,
    pub objective: Objective,
}

impl Default for ConicProgram {
    fn default() -> Self {
        Self::new()
    }
}

impl ConicProgram {
    pub fn new() -> Self {
        ConicProgram {
            vars: Vec::new(),
            constraints: Vec::new(),
            objective: Objective::Linear { sense: Sense::Minimize, terms: Vec::new() },
        }
    }

    pub fn psd(&mut self, name: &str, dim: usize) -> VarId {
        self.var(name, dim, Cone::Psd)
    }

    pub fn free(&mut self, name: &str, dim: usize) -> VarId {
        self.var(name, dim, Cone::Free)
    }

    pub fn var(&mut self, name: &str, dim: usize, cone: Cone) -> VarId {
        self.vars.push(VarSpec { name: name.to_string(), dim, cone });
        VarId(self.vars.len() - 1)
    }

    pub fn constrain(&mut self, name: &str, terms: Vec<(VarId, LinearMap)>, rel: Rel, rhs: CMat) -> usize {
        self.constraints.push(Constraint { name: name.to_string(), terms, rel, rhs });
        self.constraints.len() - 1
    }

    pub fn minimize(&mut self, terms: Vec<(VarId, CMat)>) {
        self.objective = Objective::Linear { sense: Sense::Minimize, terms };
    }

    pub fn maximize(&mut self, terms: Vec<(VarId, CMat)>) {
        self.objective = Objective::Linear { sense: Sense::Maximize, terms };
    }

    pub fn minimize_spectral_norm(&mut self, terms: Vec<(VarId, LinearMap)>, psd_argument: bool) {
        self.objective = Objective::SpectralNorm { terms, psd_argument };
    }

    /// Check that every map and right-hand side has consistent dimensions.
    pub fn validate(&self) -> Result<()> {
        let check_terms = |terms: &[(VarId, LinearMap)], out: usize, what: &str| -> Result<()> {
            for (v, m) in terms {
                let spec = self.vars.get(v.0).ok_or_else(|| Error::invalid(format!("{what}: unknown variable {}", v.0)))?;
                if m.in_dim != spec.dim {
                    return Err(Error::dim(format!("{what}: map expects {} but {} has dimension {}", m.in_dim, spec.name, spec.dim)));
                }
                if m.out_dim != out {
                    return Err(Error::dim(format!("{what}: map output {} vs expected {}", m.out_dim, out)));
                }
            }
            Ok(())
        };
        for c in &self.constraints {
            if !c.rhs.is_square() {
                return Err(Error::dim(format!("{}: right-hand side not square", c.name)));
            }
            check_terms(&c.terms, c.rhs.nrows(), &c.name)?;
        }
        match &self.objective {
            Objective::Linear { terms, .. } => {
                for (v, m) in terms {
                    let spec = self.vars.get(v.0).ok_or_else(|| Error::invalid("objective: unknown variable"))?;
                    if m.nrows() != spec.dim || m.ncols() != spec.dim {
                        return Err(Error::dim(format!("objective weight for {} has wrong shape", spec.name)));
                    }
                }
            }
            Objective::SpectralNorm { terms, .. } => {
                let out = terms.first().map(|t| t.1.out_dim).unwrap_or(0);
                check_terms(terms, out, "objective")?;
            }
        }
        Ok(())
    }

    /// Rewrite a spectral-norm objective as `min t` subject to `tI − M ⪰ 0`
    /// (and `tI + M ⪰ 0` unless M is known PSD). Linear programs are returned unchanged.
    pub fn spectral_norm_rewrite(&self) -> ConicProgram {
        let mut p = self.clone();
        if let Objective::SpectralNorm { terms, psd_argument } = &self.objective {
            let out = terms.first().map(|t| t.1.out_dim).unwrap_or(1);
            let t = p.var("__t", 1, if *psd_argument { Cone::Psd } else { Cone::Free });
            let eye = CMat::identity(out, out);
            let mut upper: Vec<(VarId, LinearMap)> = terms.iter().map(|(v, m)| (*v, m.clone().scaled(-1.0))).collect();
            upper.push((t, LinearMap::scalar_times(&eye)));
            p.constrain("__norm_upper", upper, Rel::Geq, CMat::zeros(out, out));
            if !psd_argument {
                let mut lower: Vec<(VarId, LinearMap)> = terms.clone();
                lower.push((t, LinearMap::scalar_times(&eye)));
                p.constrain("__norm_lower", lower, Rel::Geq, CMat::zeros(out, out));
            }
            p.objective = Objective::Linear { sense: Sense::Minimize, terms: vec![(t, CMat::from_element(1, 1, C64::from(1.0)))] };
        }
        p
    }

    /// Real symmetric standard form of this program (complex blocks embedded).
    pub fn embed_complex(&self, settings: &SolverSettings) -> Result<RealSdp> {
        self.validate()?;
        let mut s = settings.clone();
        s.force_embedding = true;
        Ok(compile::compile(&self.spectral_norm_rewrite(), &s)?.sdp)
    }

    pub fn solve(&self, settings: &SolverSettings) -> Result<ConicSolution> {
        self.validate()?;
        let rewritten = self.spectral_norm_rewrite();
        let compiled = compile::compile(&rewritten, settings)?;
        let raw = ipm::solve(&compiled.sdp, settings);
        Ok(compiled.recover(self, &rewritten, raw))
    }

    pub fn dump_text(&self) -> String {
        dump::to_text(self)
    }
}
