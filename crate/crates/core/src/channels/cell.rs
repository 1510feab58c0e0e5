use super::{BidirectionalChannel, ChannelChoi, IsometricExtension};
use crate::qcore::{hw_sigma, CMat, C64};
use crate::{Error, Result};

/// Alphabet-indexed isometries B′ → B ⊗ E.
#[derive(Debug, Clone)]
pub struct WiretapMemoryCell {
    pub isometries: Vec<IsometricExtension>,
}

impl WiretapMemoryCell {
    pub fn new(isometries: Vec<IsometricExtension>) -> Result<Self> {
        let first = isometries.first().ok_or_else(|| Error::invalid("empty memory cell"))?;
        let shape = (first.d_in, first.d_out, first.d_env);
        if isometries.iter().any(|v| (v.d_in, v.d_out, v.d_env) != shape) {
            return Err(Error::dim("memory cell isometries have different dimensions"));
        }
        Ok(WiretapMemoryCell { isometries })
    }

    pub fn len(&self) -> usize {
        self.isometries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.isometries.is_empty()
    }

    pub fn d_in(&self) -> usize {
        self.isometries[0].d_in
    }

    pub fn d_b(&self) -> usize {
        self.isometries[0].d_out
    }

    pub fn d_e(&self) -> usize {
        self.isometries[0].d_env
    }

    /// M^x: B′ → B.
    pub fn channel(&self, x: usize) -> ChannelChoi {
        self.isometries[x].channel()
    }

    /// Σ_x |x⟩⟨x| ⊗ U^{M^x}: X B′ → X B E.
    pub fn controlled_isometry(&self) -> CMat {
        let nx = self.len();
        let (di, dbe) = (self.d_in(), self.d_b() * self.d_e());
        let mut u = CMat::zeros(nx * dbe, nx * di);
        for (x, v) in self.isometries.iter().enumerate() {
            u.view_mut((x * dbe, x * di), (dbe, di)).copy_from(&v.v);
        }
        u
    }
}

/// U^q|ψ⟩ = √(1−q)|ψ⟩_B|e⟩_E + √q|e⟩_B|ψ⟩_E, with |e⟩ the (d+1)-th basis vector.
pub fn erasure_isometry(d: usize, q: f64) -> CMat {
    let de = d + 1;
    let mut u = CMat::zeros(de * de, d);
    for i in 0..d {
        u[(i * de + d, i)] += C64::from((1.0 - q).sqrt());
        u[(d * de + i, i)] += C64::from(q.sqrt());
    }
    u
}

/// The qudit erasure wiretap cell {U^q σ^x}_{x < d²}.
pub fn erasure_wiretap_cell(d: usize, q: f64) -> Result<WiretapMemoryCell> {
    if d < 2 {
        return Err(Error::invalid(format!("erasure cell needs d ≥ 2, got {d}")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("erasure probability {q} outside [0,1]")));
    }
    let uq = erasure_isometry(d, q);
    let isos = (0..d * d)
        .map(|x| IsometricExtension::new(&uq * hw_sigma(d, x), d, d + 1, d + 1))
        .collect::<Result<Vec<_>>>()?;
    WiretapMemoryCell::new(isos)
}

/// ρ ↦ Σ_x |x⟩⟨x| ⊗ M^x(⟨x|ρ|x⟩) as a channel X B′ → X B, returned with the
/// controlled isometry Σ_x |x⟩⟨x| ⊗ U^{M^x}.
pub fn controlled_bidirectional(cell: &WiretapMemoryCell) -> Result<(BidirectionalChannel, CMat)> {
    let nx = cell.len();
    let mut ks = Vec::new();
    for (x, v) in cell.isometries.iter().enumerate() {
        for k in v.kraus() {
            let mut big = CMat::zeros(nx * cell.d_b(), nx * cell.d_in());
            big.view_mut((x * cell.d_b(), x * cell.d_in()), k.shape()).copy_from(&k);
            ks.push(big);
        }
    }
    let n = BidirectionalChannel::from_kraus(&ks, [nx, cell.d_in()], [nx, cell.d_b()])?;
    Ok((n, cell.controlled_isometry()))
}

/// ρ ↦ Tr_E{U ρ U†} with U the controlled isometry: the coherent version,
/// keeping the coherences of the control register.
pub fn coherent_bidirectional(cell: &WiretapMemoryCell) -> Result<BidirectionalChannel> {
    let nx = cell.len();
    let u = cell.controlled_isometry();
    let (db, de, di) = (cell.d_b(), cell.d_e(), cell.d_in());
    let iso = IsometricExtension::new(u, nx * di, nx * db, de)?;
    BidirectionalChannel::from_kraus(&iso.kraus(), [nx, di], [nx, db])
}
