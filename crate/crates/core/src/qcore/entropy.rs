//! Entropic quantities, all in bits.

use super::{eigh, eigvalsh, partial_trace, support_cutoff, CMat};

fn h_of(vals: &[f64]) -> f64 {
    vals.iter().filter(|&&x| x > 1e-15).map(|&x| -x * x.log2()).sum()
}

/// von Neumann entropy S(ρ).
pub fn entropy(rho: &CMat) -> f64 {
    h_of(&eigvalsh(rho))
}

/// Shannon entropy of a probability vector.
pub fn shannon(p: &[f64]) -> f64 {
    h_of(p)
}

/// Quantum relative entropy D(ρ‖σ); `+∞` when supp ρ ⊄ supp σ.
pub fn relative_entropy(rho: &CMat, sigma: &CMat) -> f64 {
    let (rv, rvec) = eigh(rho);
    let (sv, svec) = eigh(sigma);
    let scut = support_cutoff(&sv);
    // <r_i|s_j> overlaps
    let ov = rvec.adjoint() * &svec;
    let mut cross = 0.0;
    for (i, &ri) in rv.iter().enumerate() {
        if ri <= 1e-15 {
            continue;
        }
        for (j, &sj) in sv.iter().enumerate() {
            let w = ov[(i, j)].norm_sqr();
            if w <= 1e-14 {
                continue;
            }
            if sj <= scut {
                return f64::INFINITY;
            }
            cross += ri * w * sj.log2();
        }
    }
    -h_of(&rv) - cross
}

/// S(A|B) = S(AB) − S(B) with A the subsystems `a` and B the rest.
pub fn conditional_entropy(rho: &CMat, dims: &[usize], a: &[usize]) -> f64 {
    let b: Vec<usize> = (0..dims.len()).filter(|k| !a.contains(k)).collect();
    entropy(rho) - entropy(&partial_trace(rho, dims, &b))
}

/// I(A;B) for disjoint subsystem sets `a`, `b` (everything else is traced out).
pub fn mutual_information(rho: &CMat, dims: &[usize], a: &[usize], b: &[usize]) -> f64 {
    let mut ab: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    ab.sort_unstable();
    let mut sa = a.to_vec();
    sa.sort_unstable();
    let mut sb = b.to_vec();
    sb.sort_unstable();
    entropy(&partial_trace(rho, dims, &sa)) + entropy(&partial_trace(rho, dims, &sb))
        - entropy(&partial_trace(rho, dims, &ab))
}

/// Coherent information I(A⟩B) = S(B) − S(AB).
pub fn coherent_information(rho: &CMat, dims: &[usize], a: &[usize], b: &[usize]) -> f64 {
    let mut ab: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    ab.sort_unstable();
    let mut sb = b.to_vec();
    sb.sort_unstable();
    entropy(&partial_trace(rho, dims, &sb)) - entropy(&partial_trace(rho, dims, &ab))
}

/// g(ε) = (1+ε) log₂(1+ε) − ε log₂ ε.
pub fn g_fn(eps: f64) -> f64 {
    let t = if eps > 0.0 { eps * eps.log2() } else { 0.0 };
    (1.0 + eps) * (1.0 + eps).log2() - t
}

/// Continuity bound for conditional entropy: 2ε log₂|A| + g(ε).
pub fn afw_bound(eps: f64, dim_a: usize) -> f64 {
    2.0 * eps * (dim_a as f64).log2() + g_fn(eps)
}

/// Classical-conditioning variant: ε log₂|A| + g(ε).
pub fn afw_bound_cq(eps: f64, dim_a: usize) -> f64 {
    eps * (dim_a as f64).log2() + g_fn(eps)
}
