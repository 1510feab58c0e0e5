use nalgebra::linalg::SymmetricEigen;

use super::{CMat, C64};

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching eigenvectors as columns.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let (h, scale) = normalized(m);
    if scale == 0.0 {
        return (vec![0.0; n], CMat::identity(n, n));
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k] * scale).collect();
    let mut vecs = CMat::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vecs.set_column(new, &eig.eigenvectors.column(old));
    }
    (vals, vecs)
}

pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let (h, scale) = normalized(m);
    if scale == 0.0 {
        return vec![0.0; m.nrows()];
    }
    let mut v: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().map(|&x| x * scale).collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Hermitian part scaled to unit max-entry. The QR sweeps in nalgebra can
/// produce NaN on matrices whose entries sit at rounding level.
fn normalized(m: &CMat) -> (CMat, f64) {
    let h = hermitize(m);
    let scale = h.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    if scale == 0.0 || !scale.is_finite() {
        return (h, if scale.is_finite() { 0.0 } else { scale });
    }
    (h / C64::from(scale), scale)
}

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::from(0.5)
}

/// f(M) for Hermitian M through its spectrum.
pub fn herm_fn(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(m);
    from_spectrum(&vals.iter().map(|&x| f(x)).collect::<Vec<_>>(), &vecs)
}

pub fn from_spectrum(vals: &[f64], vecs: &CMat) -> CMat {
    let mut scaled = vecs.clone();
    for (k, &v) in vals.iter().enumerate() {
        scaled.column_mut(k).scale_mut(v);
    }
    scaled * vecs.adjoint()
}

/// Square root of a PSD matrix; eigenvalues at rounding level are set to zero.
pub fn sqrtm_psd(m: &CMat) -> CMat {
    let (vals, vecs) = eigh(m);
    let top = vals.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    let cut = 1e-14 * top;
    from_spectrum(&vals.iter().map(|&x| if x > cut { x.sqrt() } else { 0.0 }).collect::<Vec<_>>(), &vecs)
}

/// M^p on the support of a PSD matrix (zero on the kernel).
pub fn powm_psd(m: &CMat, p: f64) -> CMat {
    let (vals, vecs) = eigh(m);
    let cut = support_cutoff(&vals);
    from_spectrum(&vals.iter().map(|&x| if x > cut { x.powf(p) } else { 0.0 }).collect::<Vec<_>>(), &vecs)
}

/// Base-2 logarithm of a positive definite matrix.
pub fn log2m(m: &CMat) -> CMat {
    herm_fn(m, |x| x.log2())
}

pub(crate) fn support_cutoff(vals: &[f64]) -> f64 {
    let top = vals.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    1e-12 * top.max(1e-300)
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).iter().all(|z| z.norm() <= tol)
}

pub fn min_eig(m: &CMat) -> f64 {
    eigvalsh(m)[0]
}

pub fn max_eig(m: &CMat) -> f64 {
    *eigvalsh(m).last().unwrap()
}

pub fn is_psd(m: &CMat, tol: f64) -> bool {
    is_hermitian(m, tol) && min_eig(m) >= -tol
}

pub fn is_density(m: &CMat, tol: f64) -> bool {
    is_psd(m, tol) && (m.trace().re - 1.0).abs() <= tol
}

/// Schatten-1 norm. Uses the spectrum when `m` is Hermitian, SVD otherwise.
pub fn trace_norm(m: &CMat) -> f64 {
    if is_hermitian(m, 1e-12) {
        eigvalsh(m).iter().map(|x| x.abs()).sum()
    } else {
        m.clone().svd(false, false).singular_values.iter().sum()
    }
}

/// Operator (spectral) norm.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if is_hermitian(m, 1e-12) {
        eigvalsh(m).iter().fold(0.0, |a, x| a.max(x.abs()))
    } else {
        m.clone().svd(false, false).singular_values.iter().fold(0.0, |a, &x| a.max(x))
    }
}

/// Squared fidelity F(τ, σ) = ‖√τ √σ‖₁².
pub fn fidelity(tau: &CMat, sigma: &CMat) -> f64 {
    let prod = sqrtm_psd(tau) * sqrtm_psd(sigma);
    let s: f64 = prod.svd(false, false).singular_values.iter().sum();
    s * s
}

/// Hilbert–Schmidt inner product Re Tr(A† B).
pub fn hs_inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Closest unitary in Frobenius norm (polar factor).
pub fn polar_unitary(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    svd.u.unwrap() * svd.v_t.unwrap()
}

/// Writes `m = a ⊗ b` for a product operator, up to a global scalar split
/// evenly. Returns the relative residual ‖m − a⊗b‖_F / ‖m‖_F alongside.
pub fn factor_product(m: &CMat, da: usize, db: usize) -> (CMat, CMat, f64) {
    // realign: R[(i,k),(j,l)] = m[(i j),(k l)] so that m = a ⊗ b ⇔ R = vec(a) vec(b)^T
    let mut r = CMat::zeros(da * da, db * db);
    for i in 0..da {
        for j in 0..db {
            for k in 0..da {
                for l in 0..db {
                    r[(i * da + k, j * db + l)] = m[(i * db + j, k * db + l)];
                }
            }
        }
    }
    let svd = r.svd(true, true);
    let s0 = svd.singular_values[0];
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    let mut a = CMat::zeros(da, da);
    let mut b = CMat::zeros(db, db);
    let sq = s0.sqrt();
    for i in 0..da {
        for k in 0..da {
            a[(i, k)] = u[(i * da + k, 0)] * sq;
        }
    }
    for j in 0..db {
        for l in 0..db {
            b[(j, l)] = vt[(0, j * db + l)] * sq;
        }
    }
    let res = (m - a.kronecker(&b)).norm() / m.norm().max(1e-300);
    (a, b, res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::*;

    #[test]
    fn sqrt_squares_back() {
        let mut rng = seeded_rng(7);
        let r = random_density(4, &mut rng);
        let s = sqrtm_psd(&r);
        assert!((&s * &s - &r).norm() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let z0 = proj(&ket(2, 0));
        let z1 = proj(&ket(2, 1));
        assert!(fidelity(&z0, &z1).abs() < 1e-12);
        assert!((fidelity(&z0, &z0) - 1.0).abs() < 1e-12);
        let mut rng = seeded_rng(8);
        let a = random_density(3, &mut rng);
        let b = random_density(3, &mut rng);
        assert!((fidelity(&a, &b) - fidelity(&b, &a)).abs() < 1e-10);
        // pure-state formula <ψ|σ|ψ>
        let psi = haar_ket(3, &mut rng);
        let f = fidelity(&proj(&psi), &b);
        let direct = (psi.adjoint() * &b * &psi)[(0, 0)].re;
        assert!((f - direct).abs() < 1e-10, "{f} {direct}");
    }

    #[test]
    fn norms_of_pauli_difference() {
        let z0 = proj(&ket(2, 0));
        let z1 = proj(&ket(2, 1));
        assert!((trace_norm(&(&z0 - &z1)) - 2.0).abs() < 1e-12);
        assert!((op_norm(&hw_x(2, 1)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn factor_product_recovers_pauli_pair() {
        let x = hw_x(2, 1);
        let z = hw_z(2, 1);
        let m = x.kronecker(&z) * c(0.0, 1.0);
        let (a, b, res) = factor_product(&m, 2, 2);
        assert!(res < 1e-12);
        assert!((a.kronecker(&b) - m).norm() < 1e-12);
        let cnot = cnot();
        let (_, _, res) = factor_product(&cnot, 2, 2);
        assert!(res > 0.1);
    }

    #[test]
    fn polar_of_scaled_unitary() {
        let mut rng = seeded_rng(9);
        let u = haar_unitary(3, &mut rng);
        let p = polar_unitary(&(&u * C64::from(2.5)));
        assert!((p - u).norm() < 1e-12);
    }
}

