use super::{CMat, CVec, C64, ONE, ZERO};

/// Row-major strides of a multipartite index.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Digits of a flat index.
pub fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

/// For each flat index, the part of the index carried by the subsystems in `sys`
/// (kept at their original strides) and the remainder.
pub fn split_offsets(dims: &[usize], sys: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n: usize = dims.iter().product();
    let st = strides(dims);
    let mut inside = vec![0; n];
    let mut outside = vec![0; n];
    for idx in 0..n {
        let d = digits(idx, dims);
        for k in 0..dims.len() {
            if sys.contains(&k) {
                inside[idx] += d[k] * st[k];
            } else {
                outside[idx] += d[k] * st[k];
            }
        }
    }
    (inside, outside)
}

/// All flat offsets spanned by the subsystems `sys`, enumerated in the
/// row-major order of those subsystems.
pub fn subsystem_offsets(dims: &[usize], sys: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut out = vec![0usize];
    for &s in sys {
        let mut next = Vec::with_capacity(out.len() * dims[s]);
        for &o in &out {
            for v in 0..dims[s] {
                next.push(o + v * st[s]);
            }
        }
        out = next;
    }
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all(ms: &[&CMat]) -> CMat {
    let mut out = CMat::from_element(1, 1, ONE);
    for m in ms {
        out = out.kronecker(*m);
    }
    out
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn ket(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = ONE;
    v
}

/// |i><j| in dimension d.
pub fn unit(d: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(i, j)] = ONE;
    m
}

pub fn proj(v: &CVec) -> CMat {
    v * v.adjoint()
}

/// Unnormalized maximally entangled vector sum_i |i>|i>.
pub fn upsilon_ket(d: usize) -> CVec {
    let mut v = CVec::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = ONE;
    }
    v
}

/// |Υ><Υ| for dimension d (trace d).
pub fn upsilon(d: usize) -> CMat {
    proj(&upsilon_ket(d))
}

/// Maximally entangled state Φ_d (trace one).
pub fn max_entangled(d: usize) -> CMat {
    upsilon(d) / C64::from(d as f64)
}

pub fn maximally_mixed(d: usize) -> CMat {
    identity(d) / C64::from(d as f64)
}

/// Tr over every subsystem not in `keep` (`keep` ascending).
pub fn partial_trace(m: &CMat, dims: &[usize], keep: &[usize]) -> CMat {
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let ko = subsystem_offsets(dims, keep);
    let to = subsystem_offsets(dims, &traced);
    let n = ko.len();
    let mut out = CMat::zeros(n, n);
    for (r, &kr) in ko.iter().enumerate() {
        for (cc, &kc) in ko.iter().enumerate() {
            let mut s = ZERO;
            for &t in &to {
                s += m[(kr + t, kc + t)];
            }
            out[(r, cc)] = s;
        }
    }
    out
}

/// Transpose the subsystems listed in `sys` in the computational basis.
pub fn partial_transpose(m: &CMat, dims: &[usize], sys: &[usize]) -> CMat {
    let n = m.nrows();
    let (ins, outs) = split_offsets(dims, sys);
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(outs[i] + ins[j], outs[j] + ins[i])] = m[(i, j)];
        }
    }
    out
}

/// Map from old flat index to new flat index when subsystems are reordered so
/// that new position `p` holds old subsystem `perm[p]`.
pub fn permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_st = strides(&new_dims);
    let n: usize = dims.iter().product();
    (0..n)
        .map(|idx| {
            let d = digits(idx, dims);
            perm.iter().enumerate().map(|(p, &old)| d[old] * new_st[p]).sum()
        })
        .collect()
}

pub fn permute_systems(m: &CMat, dims: &[usize], perm: &[usize]) -> CMat {
    let map = permutation_map(dims, perm);
    let n = m.nrows();
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    out
}

pub fn permute_ket(v: &CVec, dims: &[usize], perm: &[usize]) -> CVec {
    let map = permutation_map(dims, perm);
    let mut out = CVec::zeros(v.len());
    for i in 0..v.len() {
        out[map[i]] = v[i];
    }
    out
}

/// Lift `op` (acting on the ordered subsystems `sys`) to the whole space,
/// identity elsewhere. Works for rectangular `op` only if the result is square;
/// use [`embed_map`] for dimension-changing maps.
pub fn embed_op(op: &CMat, dims: &[usize], sys: &[usize]) -> CMat {
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !sys.contains(k)).collect();
    let rest_dim: usize = rest.iter().map(|&k| dims[k]).product();
    let full = kron(op, &identity(rest_dim));
    // order is sys ++ rest; bring back to natural order
    let mut order = sys.to_vec();
    order.extend_from_slice(&rest);
    let cur_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let mut inv = vec![0; order.len()];
    for (p, &k) in order.iter().enumerate() {
        inv[k] = p;
    }
    permute_systems(&full, &cur_dims, &inv)
}

/// Rectangular analogue of [`embed_op`]: `op` maps the subsystems at positions
/// `sys` (input dims taken from `dims`) to new subsystems of dimensions
/// `out_dims`, which replace them in place. Subsystems in `sys` must be
/// contiguous and ascending.
pub fn embed_map(op: &CMat, dims: &[usize], sys: &[usize], out_dims: &[usize]) -> (CMat, Vec<usize>) {
    assert!(sys.windows(2).all(|w| w[1] == w[0] + 1), "embed_map needs contiguous systems");
    let first = sys[0];
    let last = *sys.last().unwrap();
    let left: usize = dims[..first].iter().product();
    let right: usize = dims[last + 1..].iter().product();
    let m = kron_all(&[&identity(left), op, &identity(right)]);
    let mut nd = dims[..first].to_vec();
    nd.extend_from_slice(out_dims);
    nd.extend_from_slice(&dims[last + 1..]);
    (m, nd)
}
