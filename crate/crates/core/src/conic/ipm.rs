//! Infeasible-start primal-dual path following on block-diagonal real SDPs.
//!
//! HKM search direction with Mehrotra's predictor-corrector; the Schur
//! complement `M_ij = ⟨A_i, X A_j Z⁻¹⟩` is assembled block by block from the
//! sparse constraint data and factored densely.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::compile::RealSdp;
use super::{SolveStatus, SolverSettings};

type Mat = DMatrix<f64>;

#[derive(Debug, Clone, Default)]
pub struct IpmReport {
    pub iterations: usize,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub relative_gap: f64,
    pub equations: usize,
    pub block_sizes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct RawSolution {
    pub status: SolveStatus,
    pub x: Vec<Mat>,
    pub y: Vec<f64>,
    pub pobj: f64,
    pub dobj: f64,
    pub report: IpmReport,
}

struct Data<'a> {
    sdp: &'a RealSdp,
    /// per block: (constraint index, entries (i, j, v)) sorted by constraint
    by_block: Vec<Vec<(usize, Vec<(usize, usize, f64)>)>>,
    c: Vec<Mat>,
}

impl<'a> Data<'a> {
    fn new(sdp: &'a RealSdp) -> Self {
        let nb = sdp.blocks.len();
        let mut by_block: Vec<Vec<(usize, Vec<(usize, usize, f64)>)>> = vec![Vec::new(); nb];
        for (k, a) in sdp.a.iter().enumerate() {
            let mut cur: Option<usize> = None;
            for &(b, i, j, v) in &a.entries {
                if cur != Some(b) {
                    by_block[b].push((k, Vec::new()));
                    cur = Some(b);
                }
                by_block[b].last_mut().unwrap().1.push((i, j, v));
            }
        }
        let mut c: Vec<Mat> = sdp.blocks.iter().map(|&n| Mat::zeros(n, n)).collect();
        for &(b, i, j, v) in &sdp.c.entries {
            c[b][(i, j)] += v;
            if i != j {
                c[b][(j, i)] += v;
            }
        }
        Data { sdp, by_block, c }
    }

    fn m(&self) -> usize {
        self.sdp.b.len()
    }

    /// ⟨A_i, G⟩ = tr(A_i G) for every i (G need not be symmetric).
    fn a_op(&self, g: &[Mat]) -> DVector<f64> {
        let mut out = DVector::zeros(self.m());
        for (b, list) in self.by_block.iter().enumerate() {
            let gb = &g[b];
            for (k, ents) in list {
                let mut s = 0.0;
                for &(i, j, v) in ents {
                    s += if i == j { v * gb[(i, i)] } else { v * (gb[(i, j)] + gb[(j, i)]) };
                }
                out[*k] += s;
            }
        }
        out
    }

    fn at_op(&self, y: &DVector<f64>) -> Vec<Mat> {
        let mut out: Vec<Mat> = self.sdp.blocks.iter().map(|&n| Mat::zeros(n, n)).collect();
        for (b, list) in self.by_block.iter().enumerate() {
            let ob = &mut out[b];
            for (k, ents) in list {
                let yk = y[*k];
                if yk == 0.0 {
                    continue;
                }
                for &(i, j, v) in ents {
                    ob[(i, j)] += yk * v;
                    if i != j {
                        ob[(j, i)] += yk * v;
                    }
                }
            }
        }
        out
    }

    fn schur(&self, x: &[Mat], zi: &[Mat]) -> Mat {
        let m = self.m();
        let mut big = Mat::zeros(m, m);
        for (b, list) in self.by_block.iter().enumerate() {
            let n = self.sdp.blocks[b];
            let xb = &x[b];
            let zb = &zi[b];
            for (jj, (kj, ej)) in list.iter().enumerate() {
                let g = if ej.len() * 4 < n {
                    let mut g = Mat::zeros(n, n);
                    for &(p, q, v) in ej {
                        g.ger(v, &xb.column(p), &zb.row(q).transpose(), 1.0);
                        if p != q {
                            g.ger(v, &xb.column(q), &zb.row(p).transpose(), 1.0);
                        }
                    }
                    g
                } else {
                    let mut a = Mat::zeros(n, n);
                    for &(p, q, v) in ej {
                        a[(p, q)] += v;
                        if p != q {
                            a[(q, p)] += v;
                        }
                    }
                    xb * a * zb
                };
                for (ki, ei) in list[jj..].iter() {
                    let mut s = 0.0;
                    for &(p, q, v) in ei {
                        s += if p == q { v * g[(p, p)] } else { v * (g[(p, q)] + g[(q, p)]) };
                    }
                    big[(*ki, *kj)] += s;
                    if ki != kj {
                        big[(*kj, *ki)] += s;
                    }
                }
            }
        }
        big
    }
}

fn inner(a: &[Mat], b: &[Mat]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn fro(a: &[Mat]) -> f64 {
    a.iter().map(|x| x.norm_squared()).sum::<f64>().sqrt()
}

fn sym(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Largest α with X + α dX ⪰ 0 (∞ if unbounded).
fn max_step(x: &[Mat], dx: &[Mat]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.iter().zip(dx) {
        let n = xb.nrows();
        if n == 0 {
            continue;
        }
        if n == 1 {
            if db[(0, 0)] < 0.0 {
                alpha = alpha.min(-xb[(0, 0)] / db[(0, 0)]);
            }
            continue;
        }
        let Some(ch) = Cholesky::new(xb.clone()) else {
            return 0.0;
        };
        let l = ch.l();
        let Some(t) = l.solve_lower_triangular(db) else { return 0.0 };
        let Some(w) = l.solve_lower_triangular(&t.transpose()) else { return 0.0 };
        let w = sym(&w);
        let lmin = w.symmetric_eigenvalues().iter().fold(f64::INFINITY, |a, &v| a.min(v));
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    alpha
}

fn inverse_spd(m: &Mat) -> Option<Mat> {
    Cholesky::new(m.clone()).map(|c| c.inverse())
}

fn factor(m: &Mat) -> Option<Cholesky<f64, Dyn>> {
    if let Some(c) = Cholesky::new(m.clone()) {
        return Some(c);
    }
    let scale = (0..m.nrows()).fold(0.0_f64, |a, i| a.max(m[(i, i)].abs())).max(1e-300);
    for k in [1e-14, 1e-12, 1e-10] {
        let mut r = m.clone();
        for i in 0..r.nrows() {
            r[(i, i)] += k * scale;
        }
        if let Some(c) = Cholesky::new(r) {
            return Some(c);
        }
    }
    None
}

pub(crate) fn solve(sdp: &RealSdp, settings: &SolverSettings) -> RawSolution {
    let data = Data::new(sdp);
    let nb = sdp.blocks.len();
    let m = data.m();
    let n_total: usize = sdp.blocks.iter().sum();
    let b = DVector::from_column_slice(&sdp.b);
    let tol = settings.tol;
    let mut report = IpmReport { equations: m, block_sizes: sdp.blocks.clone(), ..Default::default() };

    if n_total == 0 {
        let status = if b.iter().all(|v| v.abs() <= tol) { SolveStatus::Optimal } else { SolveStatus::Infeasible };
        return RawSolution { status, x: Vec::new(), y: vec![0.0; m], pobj: 0.0, dobj: 0.0, report };
    }

    // initial point
    let mut norm_a = vec![vec![0.0; 0]; nb];
    for (bk, list) in data.by_block.iter().enumerate() {
        norm_a[bk] = list
            .iter()
            .map(|(_, e)| e.iter().map(|&(i, j, v)| if i == j { v * v } else { 2.0 * v * v }).sum::<f64>().sqrt())
            .collect();
    }
    let mut x: Vec<Mat> = Vec::with_capacity(nb);
    let mut z: Vec<Mat> = Vec::with_capacity(nb);
    for bk in 0..nb {
        let n = sdp.blocks[bk] as f64;
        let mut xi = 10.0_f64.max(n.sqrt());
        let mut eta = 10.0_f64.max(n.sqrt()).max(data.c[bk].norm());
        for (idx, (k, _)) in data.by_block[bk].iter().enumerate() {
            xi = xi.max(n * (1.0 + b[*k].abs()) / (1.0 + norm_a[bk][idx]));
            eta = eta.max(norm_a[bk][idx]);
        }
        x.push(Mat::identity(sdp.blocks[bk], sdp.blocks[bk]) * xi);
        z.push(Mat::identity(sdp.blocks[bk], sdp.blocks[bk]) * eta);
    }
    let mut y = DVector::zeros(m);
    let norm_b = b.norm();
    let norm_c = fro(&data.c);

    let mut status = SolveStatus::NumericalFailure;
    let mut stalls = 0;
    let mut iter = 0;
    let mut pobj;
    let mut dobj;
    loop {
        let ax = data.a_op(&x);
        let rp = &b - &ax;
        let aty = data.at_op(&y);
        let rd: Vec<Mat> = (0..nb).map(|k| &data.c[k] - &aty[k] - &z[k]).collect();
        pobj = inner(&data.c, &x);
        dobj = b.dot(&y);
        let pinf = rp.norm() / (1.0 + norm_b);
        let dinf = fro(&rd) / (1.0 + norm_c);
        let gap = (pobj - dobj).abs() / pobj.abs().max(1.0);
        report.iterations = iter;
        report.primal_infeasibility = pinf;
        report.dual_infeasibility = dinf;
        report.relative_gap = gap;
        if settings.verbose {
            eprintln!("ipm {iter:3}  pobj {pobj:+.10e}  dobj {dobj:+.10e}  pinf {pinf:.2e}  dinf {dinf:.2e}  gap {gap:.2e}");
        }
        if pinf <= tol && dinf <= tol && gap <= tol {
            status = SolveStatus::Optimal;
            break;
        }
        // infeasibility certificates
        if dobj > 0.0 {
            let aty_z: Vec<Mat> = (0..nb).map(|k| &aty[k] + &z[k]).collect();
            if fro(&aty_z) / dobj < 1e-8 && y.norm() > 1e6 {
                status = SolveStatus::Infeasible;
                break;
            }
        }
        if pobj < 0.0 && ax.norm() / (-pobj) < 1e-8 && fro(&x) > 1e6 {
            status = SolveStatus::Unbounded;
            break;
        }
        if iter >= settings.max_iter {
            break;
        }
        iter += 1;

        let mu = inner(&x, &z) / n_total as f64;
        let Some(zi) = z.iter().map(inverse_spd).collect::<Option<Vec<Mat>>>() else { break };
        let schur = data.schur(&x, &zi);
        let Some(ch) = factor(&schur) else { break };
        let x_rd_zi: Vec<Mat> = (0..nb).map(|k| &x[k] * &rd[k] * &zi[k]).collect();
        let a_xrdzi = data.a_op(&x_rd_zi);

        let direction = |r_zi: &[Mat]| -> (DVector<f64>, Vec<Mat>, Vec<Mat>) {
            let rhs = &rp - data.a_op(r_zi) + &a_xrdzi;
            let dy = ch.solve(&rhs);
            let atdy = data.at_op(&dy);
            let dz: Vec<Mat> = (0..nb).map(|k| &rd[k] - &atdy[k]).collect();
            let dx: Vec<Mat> = (0..nb).map(|k| sym(&(&r_zi[k] - &x[k] * &dz[k] * &zi[k]))).collect();
            (dy, dx, dz)
        };

        // predictor
        let r_pred: Vec<Mat> = x.iter().map(|xb| -xb).collect();
        let (_, dxa, dza) = direction(&r_pred);
        let ap = max_step(&x, &dxa).min(1.0);
        let ad = max_step(&z, &dza).min(1.0);
        let x_aff: Vec<Mat> = (0..nb).map(|k| &x[k] + &dxa[k] * ap).collect();
        let z_aff: Vec<Mat> = (0..nb).map(|k| &z[k] + &dza[k] * ad).collect();
        let mu_aff = inner(&x_aff, &z_aff) / n_total as f64;
        let expon = (3.0 * ap.min(ad).powi(2)).max(1.0);
        let sigma = (mu_aff / mu).max(0.0).powf(expon).min(1.0);

        // corrector
        let r_corr: Vec<Mat> = (0..nb).map(|k| &zi[k] * (sigma * mu) - &x[k] - &dxa[k] * &dza[k] * &zi[k]).collect();
        let (dy, dx, dz) = direction(&r_corr);
        let amax_p = max_step(&x, &dx);
        let amax_d = max_step(&z, &dz);
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let alpha_p = (gamma * amax_p).min(1.0);
        let alpha_d = (gamma * amax_d).min(1.0);
        if alpha_p < 1e-10 && alpha_d < 1e-10 {
            stalls += 1;
            if stalls > 3 {
                break;
            }
        } else {
            stalls = 0;
        }
        for k in 0..nb {
            x[k] += &dx[k] * alpha_p;
            z[k] += &dz[k] * alpha_d;
            x[k] = sym(&x[k]);
            z[k] = sym(&z[k]);
        }
        y += dy * alpha_d;
    }
    RawSolution { status, x, y: y.iter().copied().collect(), pobj, dobj, report }
}
