//! Dense complex linear algebra on tensor-product Hilbert spaces.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Multipartite operators carry an
//! ordered list of local dimensions; subsystem `0` is the most significant
//! tensor factor (row-major Kronecker convention).

mod entropy;
mod hw;
mod linalg;
mod random;
mod systems;

pub use entropy::*;
pub use hw::*;
pub use linalg::*;
pub use random::*;
pub use systems::*;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Ordered local dimensions of a composite system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimSig(pub Vec<usize>);

impl DimSig {
    pub fn new(dims: &[usize]) -> Self {
        DimSig(dims.to_vec())
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn select(&self, sys: &[usize]) -> DimSig {
        DimSig(sys.iter().map(|&s| self.0[s]).collect())
    }
}

/// A square operator together with its dimension signature.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub mat: CMat,
    pub sig: DimSig,
}

impl Operator {
    pub fn new(mat: CMat, dims: &[usize]) -> Result<Self> {
        let sig = DimSig::new(dims);
        if mat.nrows() != sig.total() || mat.ncols() != sig.total() {
            return Err(Error::dim(format!(
                "matrix is {}x{} but signature {:?} has total dimension {}",
                mat.nrows(),
                mat.ncols(),
                dims,
                sig.total()
            )));
        }
        Ok(Operator { mat, sig })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.sig.0
    }

    pub fn tensor(&self, other: &Operator) -> Operator {
        let mut dims = self.sig.0.clone();
        dims.extend_from_slice(&other.sig.0);
        Operator { mat: kron(&self.mat, &other.mat), sig: DimSig(dims) }
    }

    /// Trace out every subsystem not listed in `keep`.
    pub fn ptrace_keep(&self, keep: &[usize]) -> Result<Operator> {
        check_systems(self.dims(), keep)?;
        let mut k = keep.to_vec();
        k.sort_unstable();
        Ok(Operator { mat: partial_trace(&self.mat, self.dims(), &k), sig: self.sig.select(&k) })
    }

    /// Transpose the listed subsystems.
    pub fn ptranspose(&self, sys: &[usize]) -> Result<Operator> {
        check_systems(self.dims(), sys)?;
        Ok(Operator { mat: partial_transpose(&self.mat, self.dims(), sys), sig: self.sig.clone() })
    }

    pub fn permute(&self, perm: &[usize]) -> Result<Operator> {
        if !is_permutation(perm, self.sig.len()) {
            return Err(Error::dim(format!("{perm:?} is not a permutation of the subsystems")));
        }
        Ok(Operator { mat: permute_systems(&self.mat, self.dims(), perm), sig: self.sig.select(perm) })
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        is_hermitian(&self.mat, tol)
    }

    pub fn is_state(&self, tol: f64) -> bool {
        is_density(&self.mat, tol)
    }
}

pub(crate) fn check_systems(dims: &[usize], sys: &[usize]) -> Result<()> {
    for (i, &s) in sys.iter().enumerate() {
        if s >= dims.len() {
            return Err(Error::dim(format!("subsystem {s} out of range for {} systems", dims.len())));
        }
        if sys[..i].contains(&s) {
            return Err(Error::dim(format!("subsystem {s} listed twice")));
        }
    }
    Ok(())
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_rejects_wrong_signature() {
        let m = CMat::identity(4, 4);
        assert!(Operator::new(m.clone(), &[2, 3]).is_err());
        assert!(Operator::new(m, &[2, 2]).is_ok());
    }

    #[test]
    fn operator_ptrace_rejects_duplicates() {
        let op = Operator::new(CMat::identity(4, 4), &[2, 2]).unwrap();
        assert!(op.ptrace_keep(&[0, 0]).is_err());
        assert!(op.ptrace_keep(&[2]).is_err());
        let r = op.ptrace_keep(&[1]).unwrap();
        assert_eq!(r.dims(), &[2]);
        assert!((r.mat[(0, 0)].re - 2.0).abs() < 1e-15);
    }
}
