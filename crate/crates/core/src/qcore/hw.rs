//! Heisenberg–Weyl operators and a few standard gates.

use std::f64::consts::PI;

use super::{c, CMat, C64, ONE, ZERO};

/// Shift X(k)|j> = |j ⊕ k>.
pub fn hw_x(d: usize, k: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    for j in 0..d {
        m[((j + k) % d, j)] = ONE;
    }
    m
}

/// Clock Z(l)|j> = e^{2πi lj/d}|j>.
pub fn hw_z(d: usize, l: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    for j in 0..d {
        m[(j, j)] = C64::from_polar(1.0, 2.0 * PI * ((l * j) % d) as f64 / d as f64);
    }
    m
}

/// σ(k, l) = X(k) Z(l).
pub fn hw_op(d: usize, k: usize, l: usize) -> CMat {
    hw_x(d, k) * hw_z(d, l)
}

/// σ^w with the flattened label w = k + d·l.
pub fn hw_sigma(d: usize, w: usize) -> CMat {
    hw_op(d, w % d, w / d)
}

/// All d² Heisenberg–Weyl operators, ordered by flattened label.
pub fn hw_group(d: usize) -> Vec<CMat> {
    (0..d * d).map(|w| hw_sigma(d, w)).collect()
}

pub fn pauli_x() -> CMat {
    hw_x(2, 1)
}

pub fn pauli_z() -> CMat {
    hw_z(2, 1)
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO])
}

/// [I, X, Y, Z].
pub fn paulis() -> [CMat; 4] {
    [CMat::identity(2, 2), pauli_x(), pauli_y(), pauli_z()]
}

/// CNOT with the first qubit as control.
pub fn cnot() -> CMat {
    let mut m = CMat::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// SWAP on two d-dimensional systems.
pub fn swap_gate(d: usize) -> CMat {
    let mut m = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(j * d + i, i * d + j)] = ONE;
        }
    }
    m
}
