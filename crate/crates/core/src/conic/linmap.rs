//! Sparse linear maps between square complex matrices.

use std::collections::HashMap;

use crate::qcore::{split_offsets, subsystem_offsets, permutation_map, CMat, C64, ONE};

/// A linear map `X ↦ Y` with `Y[r,c] = Σ coef · X[p,q]` over its entries.
///
/// Maps used in constraints must send Hermitian matrices to Hermitian
/// matrices; only the upper triangle of the image is read when compiling.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub in_dim: usize,
    pub out_dim: usize,
    pub entries: Vec<MapEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapEntry {
    pub r: usize,
    pub c: usize,
    pub p: usize,
    pub q: usize,
    pub coef: C64,
}

impl LinearMap {
    pub fn identity(n: usize) -> Self {
        let mut e = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                e.push(MapEntry { r, c, p: r, q: c, coef: ONE });
            }
        }
        LinearMap { in_dim: n, out_dim: n, entries: e }
    }

    /// Partial transpose on the subsystems `sys` of a space with local `dims`.
    pub fn partial_transpose(dims: &[usize], sys: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        let (ins, outs) = split_offsets(dims, sys);
        let mut e = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                e.push(MapEntry { r: outs[p] + ins[q], c: outs[q] + ins[p], p, q, coef: ONE });
            }
        }
        LinearMap { in_dim: n, out_dim: n, entries: e }
    }

    /// Partial trace keeping the (ascending) subsystems `keep`.
    pub fn partial_trace(dims: &[usize], keep: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
        let ko = subsystem_offsets(dims, keep);
        let to = subsystem_offsets(dims, &traced);
        let mut e = Vec::with_capacity(ko.len() * ko.len() * to.len());
        for (r, &kr) in ko.iter().enumerate() {
            for (c, &kc) in ko.iter().enumerate() {
                for &t in &to {
                    e.push(MapEntry { r, c, p: kr + t, q: kc + t, coef: ONE });
                }
            }
        }
        LinearMap { in_dim: n, out_dim: ko.len(), entries: e }
    }

    /// Reorder subsystems: new position `k` holds old subsystem `perm[k]`.
    pub fn permute(dims: &[usize], perm: &[usize]) -> Self {
        let map = permutation_map(dims, perm);
        let n = map.len();
        let mut e = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                e.push(MapEntry { r: map[p], c: map[q], p, q, coef: ONE });
            }
        }
        LinearMap { in_dim: n, out_dim: n, entries: e }
    }

    /// `X ↦ X ⊗ M`.
    pub fn kron_right(n: usize, m: &CMat) -> Self {
        let k = m.nrows();
        let mut e = Vec::new();
        for p in 0..n {
            for q in 0..n {
                for a in 0..k {
                    for b in 0..k {
                        let v = m[(a, b)];
                        if v != C64::from(0.0) {
                            e.push(MapEntry { r: p * k + a, c: q * k + b, p, q, coef: v });
                        }
                    }
                }
            }
        }
        LinearMap { in_dim: n, out_dim: n * k, entries: e }
    }

    /// `X ↦ M ⊗ X`.
    pub fn kron_left(m: &CMat, n: usize) -> Self {
        let k = m.nrows();
        let mut e = Vec::new();
        for a in 0..k {
            for b in 0..k {
                let v = m[(a, b)];
                if v == C64::from(0.0) {
                    continue;
                }
                for p in 0..n {
                    for q in 0..n {
                        e.push(MapEntry { r: a * n + p, c: b * n + q, p, q, coef: v });
                    }
                }
            }
        }
        LinearMap { in_dim: n, out_dim: n * k, entries: e }
    }

    /// Scalar (1×1) input `t ↦ t M`.
    pub fn scalar_times(m: &CMat) -> Self {
        let k = m.nrows();
        let mut e = Vec::new();
        for r in 0..k {
            for c in 0..k {
                if m[(r, c)] != C64::from(0.0) {
                    e.push(MapEntry { r, c, p: 0, q: 0, coef: m[(r, c)] });
                }
            }
        }
        LinearMap { in_dim: 1, out_dim: k, entries: e }
    }

    /// `X ↦ Tr X` as a 1×1 output.
    pub fn trace(n: usize) -> Self {
        let e = (0..n).map(|i| MapEntry { r: 0, c: 0, p: i, q: i, coef: ONE }).collect();
        LinearMap { in_dim: n, out_dim: 1, entries: e }
    }

    /// `X ↦ Tr(M X)` as a 1×1 output.
    pub fn inner(m: &CMat) -> Self {
        let n = m.nrows();
        let mut e = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if m[(q, p)] != C64::from(0.0) {
                    e.push(MapEntry { r: 0, c: 0, p, q, coef: m[(q, p)] });
                }
            }
        }
        LinearMap { in_dim: n, out_dim: 1, entries: e }
    }

    /// `X ↦ K X K†` for a (possibly rectangular) K.
    pub fn sandwich(k: &CMat) -> Self {
        let (m, n) = (k.nrows(), k.ncols());
        let mut e = Vec::new();
        for r in 0..m {
            for c in 0..m {
                for p in 0..n {
                    if k[(r, p)] == C64::from(0.0) {
                        continue;
                    }
                    for q in 0..n {
                        let v = k[(r, p)] * k[(c, q)].conj();
                        if v != C64::from(0.0) {
                            e.push(MapEntry { r, c, p, q, coef: v });
                        }
                    }
                }
            }
        }
        LinearMap { in_dim: n, out_dim: m, entries: e }.compressed()
    }

    /// Build a map by evaluating `f` on matrix units.
    pub fn from_fn(in_dim: usize, f: impl Fn(&CMat) -> CMat) -> Self {
        let mut e = Vec::new();
        let mut out_dim = 0;
        for p in 0..in_dim {
            for q in 0..in_dim {
                let mut u = CMat::zeros(in_dim, in_dim);
                u[(p, q)] = ONE;
                let img = f(&u);
                out_dim = img.nrows();
                for r in 0..img.nrows() {
                    for c in 0..img.ncols() {
                        let v = img[(r, c)];
                        if v.norm() > 1e-15 {
                            e.push(MapEntry { r, c, p, q, coef: v });
                        }
                    }
                }
            }
        }
        LinearMap { in_dim, out_dim, entries: e }
    }

    pub fn scaled(mut self, a: f64) -> Self {
        for e in &mut self.entries {
            e.coef *= a;
        }
        self
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &LinearMap) -> Self {
        assert_eq!(self.in_dim, inner.out_dim, "compose: dimension mismatch");
        let mut by_out: HashMap<(usize, usize), Vec<&MapEntry>> = HashMap::new();
        for e in &inner.entries {
            by_out.entry((e.r, e.c)).or_default().push(e);
        }
        let mut e = Vec::new();
        for a in &self.entries {
            if let Some(list) = by_out.get(&(a.p, a.q)) {
                for b in list {
                    e.push(MapEntry { r: a.r, c: a.c, p: b.p, q: b.q, coef: a.coef * b.coef });
                }
            }
        }
        LinearMap { in_dim: inner.in_dim, out_dim: self.out_dim, entries: e }.compressed()
    }

    pub fn plus(&self, other: &LinearMap) -> Self {
        assert_eq!((self.in_dim, self.out_dim), (other.in_dim, other.out_dim));
        let mut e = self.entries.clone();
        e.extend_from_slice(&other.entries);
        LinearMap { in_dim: self.in_dim, out_dim: self.out_dim, entries: e }.compressed()
    }

    /// Merge duplicate (r,c,p,q) entries and drop zeros.
    pub fn compressed(self) -> Self {
        let mut acc: HashMap<(usize, usize, usize, usize), C64> = HashMap::new();
        for e in &self.entries {
            *acc.entry((e.r, e.c, e.p, e.q)).or_insert(C64::from(0.0)) += e.coef;
        }
        let mut entries: Vec<MapEntry> = acc
            .into_iter()
            .filter(|(_, v)| v.norm() > 1e-15)
            .map(|((r, c, p, q), coef)| MapEntry { r, c, p, q, coef })
            .collect();
        entries.sort_by_key(|e| (e.r, e.c, e.p, e.q));
        LinearMap { in_dim: self.in_dim, out_dim: self.out_dim, entries }
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        let mut y = CMat::zeros(self.out_dim, self.out_dim);
        for e in &self.entries {
            y[(e.r, e.c)] += e.coef * x[(e.p, e.q)];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::*;

    #[test]
    fn structured_maps_match_dense_operations() {
        let mut rng = seeded_rng(21);
        let x = random_density(6, &mut rng);
        let dims = [2, 3];
        assert!((LinearMap::partial_transpose(&dims, &[1]).apply(&x) - partial_transpose(&x, &dims, &[1])).norm() < 1e-14);
        assert!((LinearMap::partial_trace(&dims, &[0]).apply(&x) - partial_trace(&x, &dims, &[0])).norm() < 1e-14);
        assert!((LinearMap::permute(&dims, &[1, 0]).apply(&x) - permute_systems(&x, &dims, &[1, 0])).norm() < 1e-14);
        let m = random_density(2, &mut rng);
        assert!((LinearMap::kron_right(6, &m).apply(&x) - kron(&x, &m)).norm() < 1e-14);
        assert!((LinearMap::kron_left(&m, 6).apply(&x) - kron(&m, &x)).norm() < 1e-14);
        let k = ginibre(4, 6, &mut rng);
        assert!((LinearMap::sandwich(&k).apply(&x) - &k * &x * k.adjoint()).norm() < 1e-12);
        let t = LinearMap::inner(&m.kronecker(&identity(3))).apply(&x)[(0, 0)];
        assert!((t - (m.kronecker(&identity(3)) * &x).trace()).norm() < 1e-13);
    }

    #[test]
    fn compose_and_from_fn_agree() {
        let dims = [2, 2];
        let pt = LinearMap::partial_transpose(&dims, &[1]);
        let tr = LinearMap::partial_trace(&dims, &[0]);
        let comp = tr.compose(&pt);
        let f = LinearMap::from_fn(4, |x| partial_trace(&partial_transpose(x, &dims, &[1]), &dims, &[0]));
        let mut rng = seeded_rng(22);
        let x = random_density(4, &mut rng);
        assert!((comp.apply(&x) - f.apply(&x)).norm() < 1e-14);
    }
}
