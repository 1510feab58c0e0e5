//! Seeded random states and unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{partial_trace, proj, CMat, CVec, C64};

pub type QRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> QRng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unit vector.
pub fn haar_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(d, |_, _| gaussian(rng));
    let n = v.norm();
    v / C64::from(n)
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase fix).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let rk = r[(k, k)];
        let ph = if rk.norm() > 0.0 { rk / C64::from(rk.norm()) } else { C64::from(1.0) };
        let col = q.column(k) * ph;
        q.set_column(k, &col);
    }
    q
}

/// Random mixed state: reduced state of a Haar-random pure state on d × d
/// (Hilbert–Schmidt measure).
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let v = haar_ket(d * d, rng);
    partial_trace(&proj(&v), &[d, d], &[0])
}

/// Random probability vector from the flat Dirichlet distribution.
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|x| x / s).collect()
}
