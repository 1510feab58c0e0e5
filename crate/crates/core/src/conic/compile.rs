//! Canonicalization, block detection and real embedding.

use std::collections::HashMap;

use super::ipm::RawSolution;
use super::{Cone, ConicProgram, ConicSolution, Objective, Rel, Sense, SolveStatus, SolverSettings};
use crate::qcore::{CMat, C64};
use crate::Result;

/// Sparse symmetric matrix over a block-diagonal space: entries `(block, i, j, v)`
/// with `i ≤ j`, standing for `A[i,j] = A[j,i] = v`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpSym {
    pub entries: Vec<(usize, usize, usize, f64)>,
}

impl SpSym {
    /// Build from raw functional coefficients `Σ coef · Z[i,j]` (any i, j).
    fn from_functional(raw: &[(usize, usize, usize, f64)]) -> SpSym {
        let mut acc: HashMap<(usize, usize, usize), f64> = HashMap::new();
        for &(b, i, j, v) in raw {
            let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
            let w = if i == j { v } else { v / 2.0 };
            *acc.entry((b, lo, hi)).or_insert(0.0) += w;
        }
        let mut entries: Vec<(usize, usize, usize, f64)> =
            acc.into_iter().filter(|(_, v)| v.abs() > 1e-300).map(|((b, i, j), v)| (b, i, j, v)).collect();
        entries.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        SpSym { entries }
    }
}

/// `min ⟨C, X⟩  s.t. ⟨A_i, X⟩ = b_i,  X ⪰ 0` over a block-diagonal real symmetric X.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RealSdp {
    pub blocks: Vec<usize>,
    pub c: SpSym,
    pub a: Vec<SpSym>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
struct CEq {
    terms: Vec<(usize, usize, usize, C64)>,
    rhs: C64,
    diag: bool,
    con: usize,
    r: usize,
    c: usize,
}

#[derive(Debug, Clone)]
struct Part {
    indices: Vec<usize>,
    pos: usize,
    neg: Option<usize>,
    embedded: bool,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Re,
    Im,
}

#[derive(Debug, Clone)]
struct EqMeta {
    con: usize,
    r: usize,
    c: usize,
    kind: Kind,
    diag: bool,
}

pub(crate) struct Compiled {
    pub sdp: RealSdp,
    var_dims: Vec<usize>,
    parts: Vec<Vec<Part>>,
    meta: Vec<EqMeta>,
    sign: f64,
    infeasible: bool,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let nx = self.parent[y];
            self.parent[y] = r;
            y = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

pub(crate) fn compile(prog: &ConicProgram, settings: &SolverSettings) -> Result<Compiled> {
    // canonical variables: user variables then one slack per inequality
    let mut var_dims: Vec<usize> = prog.vars.iter().map(|v| v.dim).collect();
    let mut var_free: Vec<bool> = prog.vars.iter().map(|v| v.cone == Cone::Free).collect();
    let mut eqs: Vec<CEq> = Vec::new();
    for (ci, con) in prog.constraints.iter().enumerate() {
        let m = con.rhs.nrows();
        let slack = match con.rel {
            Rel::Eq => None,
            Rel::Geq | Rel::Leq => {
                var_dims.push(m);
                var_free.push(false);
                Some((var_dims.len() - 1, if con.rel == Rel::Geq { -1.0 } else { 1.0 }))
            }
        };
        let mut grouped: HashMap<(usize, usize), Vec<(usize, usize, usize, C64)>> = HashMap::new();
        for (v, map) in &con.terms {
            for e in &map.entries {
                if e.r <= e.c {
                    grouped.entry((e.r, e.c)).or_default().push((v.0, e.p, e.q, e.coef));
                }
            }
        }
        for r in 0..m {
            for c in r..m {
                let mut terms = grouped.remove(&(r, c)).unwrap_or_default();
                if let Some((s, sg)) = slack {
                    terms.push((s, r, c, C64::from(sg)));
                }
                let terms = merge_terms(terms);
                let rhs = con.rhs[(r, c)];
                if terms.is_empty() && rhs.norm() == 0.0 {
                    continue;
                }
                eqs.push(CEq { terms, rhs, diag: r == c, con: ci, r, c });
            }
        }
    }

    let (sign, obj_terms): (f64, Vec<(usize, usize, usize, C64)>) = match &prog.objective {
        Objective::Linear { sense, terms } => {
            let s = if *sense == Sense::Minimize { 1.0 } else { -1.0 };
            let mut t = Vec::new();
            for (v, w) in terms {
                for p in 0..w.nrows() {
                    for q in 0..w.ncols() {
                        let coef = w[(q, p)];
                        if coef.norm() > 0.0 {
                            t.push((v.0, p, q, coef * s));
                        }
                    }
                }
            }
            (s, t)
        }
        Objective::SpectralNorm { .. } => unreachable!("spectral objectives are rewritten before compiling"),
    };

    // block detection
    let mut dsu: Vec<Dsu> = var_dims.iter().map(|&d| Dsu::new(d)).collect();
    if !settings.reduce_blocks {
        for (k, &d) in var_dims.iter().enumerate() {
            for i in 1..d {
                dsu[k].union(0, i);
            }
        }
    }
    for &(k, p, q, _) in &obj_terms {
        dsu[k].union(p, q);
    }
    loop {
        let mut changed = false;
        for eq in &eqs {
            let mut any_on = false;
            let mut any_off = false;
            for &(k, p, q, _) in &eq.terms {
                if dsu[k].find(p) == dsu[k].find(q) {
                    any_on = true;
                } else {
                    any_off = true;
                }
            }
            if any_off && (any_on || eq.rhs.norm() > 0.0) {
                for &(k, p, q, _) in &eq.terms {
                    changed |= dsu[k].union(p, q);
                }
            }
        }
        if !changed {
            break;
        }
    }

    let real_mode = !settings.force_embedding
        && eqs.iter().all(|e| e.rhs.im == 0.0 && e.terms.iter().all(|t| t.3.im == 0.0))
        && obj_terms.iter().all(|t| t.3.im == 0.0);

    // parts and real blocks
    let mut blocks: Vec<usize> = Vec::new();
    let mut parts: Vec<Vec<Part>> = Vec::new();
    let mut locate: Vec<Vec<(usize, usize)>> = Vec::new();
    for (k, &d) in var_dims.iter().enumerate() {
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut root_pos: HashMap<usize, usize> = HashMap::new();
        for i in 0..d {
            let r = dsu[k].find(i);
            let g = *root_pos.entry(r).or_insert_with(|| {
                groups.push((r, Vec::new()));
                groups.len() - 1
            });
            groups[g].1.push(i);
        }
        let mut loc = vec![(0, 0); d];
        let mut ps = Vec::new();
        for (gi, (_, idx)) in groups.into_iter().enumerate() {
            for (li, &i) in idx.iter().enumerate() {
                loc[i] = (gi, li);
            }
            let n = idx.len();
            let embedded = !real_mode && n > 1;
            let size = if embedded { 2 * n } else { n };
            blocks.push(size);
            let pos = blocks.len() - 1;
            let neg = if var_free[k] {
                blocks.push(size);
                Some(blocks.len() - 1)
            } else {
                None
            };
            ps.push(Part { indices: idx, pos, neg, embedded });
        }
        parts.push(ps);
        locate.push(loc);
    }

    let functional = |terms: &[(usize, usize, usize, C64)], kind: Kind| -> Vec<(usize, usize, usize, f64)> {
        let mut raw = Vec::new();
        for &(k, p, q, coef) in terms {
            let (gp, lp) = locate[k][p];
            let (gq, lq) = locate[k][q];
            debug_assert_eq!(gp, gq);
            let _ = gq;
            let part = &parts[k][gp];
            let (cr, ci) = match kind {
                Kind::Re => (coef.re, -coef.im),
                Kind::Im => (coef.im, coef.re),
            };
            let n = part.indices.len();
            let mut push = |i: usize, j: usize, v: f64| {
                if v != 0.0 {
                    raw.push((part.pos, i, j, v));
                    if let Some(nb) = part.neg {
                        raw.push((nb, i, j, -v));
                    }
                }
            };
            if part.embedded {
                push(lp, lq, 0.5 * cr);
                push(n + lp, n + lq, 0.5 * cr);
                push(n + lp, lq, 0.5 * ci);
                push(lp, n + lq, -0.5 * ci);
            } else {
                push(lp, lq, cr);
            }
        }
        raw
    };

    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut meta = Vec::new();
    let mut infeasible = false;
    for eq in &eqs {
        let on = eq.terms.iter().all(|&(k, p, q, _)| locate[k][p].0 == locate[k][q].0);
        if !on {
            continue;
        }
        let kinds: &[Kind] = if eq.diag || real_mode { &[Kind::Re] } else { &[Kind::Re, Kind::Im] };
        for &kind in kinds {
            let row = SpSym::from_functional(&functional(&eq.terms, kind));
            let rhs = match kind {
                Kind::Re => eq.rhs.re,
                Kind::Im => eq.rhs.im,
            };
            if row.entries.is_empty() {
                if rhs.abs() > 1e-12 {
                    infeasible = true;
                }
                continue;
            }
            a.push(row);
            b.push(rhs);
            meta.push(EqMeta { con: eq.con, r: eq.r, c: eq.c, kind, diag: eq.diag });
        }
    }
    let c = SpSym::from_functional(&functional(&obj_terms, Kind::Re));
    Ok(Compiled { sdp: RealSdp { blocks, c, a, b }, var_dims, parts, meta, sign, infeasible })
}

fn merge_terms(mut t: Vec<(usize, usize, usize, C64)>) -> Vec<(usize, usize, usize, C64)> {
    t.sort_by_key(|x| (x.0, x.1, x.2));
    let mut out: Vec<(usize, usize, usize, C64)> = Vec::with_capacity(t.len());
    for x in t {
        if let Some(last) = out.last_mut() {
            if (last.0, last.1, last.2) == (x.0, x.1, x.2) {
                last.3 += x.3;
                continue;
            }
        }
        out.push(x);
    }
    out.retain(|x| x.3.norm() > 1e-15);
    out
}

impl Compiled {
    fn var_value(&self, k: usize, raw: &RawSolution) -> CMat {
        let d = self.var_dims[k];
        let mut out = CMat::zeros(d, d);
        for part in &self.parts[k] {
            let n = part.indices.len();
            let local = |blk: usize| -> CMat {
                let z = &raw.x[blk];
                if part.embedded {
                    CMat::from_fn(n, n, |i, j| {
                        C64::new(0.5 * (z[(i, j)] + z[(n + i, n + j)]), 0.5 * (z[(n + i, j)] - z[(i, n + j)]))
                    })
                } else {
                    CMat::from_fn(n, n, |i, j| C64::from(z[(i, j)]))
                }
            };
            let mut m = local(part.pos);
            if let Some(nb) = part.neg {
                m -= local(nb);
            }
            for (li, &i) in part.indices.iter().enumerate() {
                for (lj, &j) in part.indices.iter().enumerate() {
                    out[(i, j)] = m[(li, lj)];
                }
            }
        }
        out
    }

    pub(crate) fn recover(&self, user: &ConicProgram, rewritten: &ConicProgram, raw: RawSolution) -> ConicSolution {
        let mut raw = raw;
        if self.infeasible {
            raw.status = SolveStatus::Infeasible;
        }
        let names: Vec<String> = user.vars.iter().map(|v| v.name.clone()).collect();
        let values: Vec<CMat> = (0..user.vars.len()).map(|k| self.var_value(k, &raw)).collect();
        let mut duals: Vec<CMat> = user.constraints.iter().map(|c| CMat::zeros(c.rhs.nrows(), c.rhs.nrows())).collect();
        for (i, m) in self.meta.iter().enumerate() {
            if m.con >= duals.len() {
                continue;
            }
            let y = raw.y.get(i).copied().unwrap_or(0.0) * self.sign;
            let lam = &mut duals[m.con];
            if m.diag {
                lam[(m.r, m.c)] += C64::from(y);
            } else {
                let z = match m.kind {
                    Kind::Re => C64::new(0.5 * y, 0.0),
                    Kind::Im => C64::new(0.0, 0.5 * y),
                };
                lam[(m.r, m.c)] += z;
                lam[(m.c, m.r)] += z.conj();
            }
        }
        let _ = rewritten;
        let primal = self.sign * raw.pobj;
        let dual = self.sign * raw.dobj;
        ConicSolution {
            status: raw.status,
            primal_value: primal,
            dual_value: dual,
            gap: (primal - dual).abs() / primal.abs().max(1.0),
            iterations: raw.report.iterations,
            names,
            values,
            duals,
            report: raw.report,
        }
    }
}
