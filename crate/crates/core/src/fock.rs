//! Truncated two-mode Fock space.
//!
//! Two representations live here:
//!
//! * [`TwoModeState`], a sparse map over occupations `|n_a, n_b⟩` bounded by a
//!   total-quanta cutoff. It can hold superpositions across blocks.
//! * [`BlockVector`] / [`BlockMatrix`], dense objects confined to a single block
//!   of fixed total quanta `n_a + n_b = 2j`. Entry `l` of a block vector is the
//!   amplitude of `|2j - l⟩ ⊗ |l⟩`, so `l = n_b`.
//!
//! The Schwinger operators `J+ = a†b`, `J- = ab†`, `Jz = (a†a - b†b)/2` conserve
//! total quanta and therefore act on blocks without truncation error.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default total-quanta cutoff for general two-mode states.
pub const DEFAULT_CUTOFF: u32 = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeOccupation {
    pub n_a: u32,
    pub n_b: u32,
}

impl ModeOccupation {
    pub const fn new(n_a: u32, n_b: u32) -> Self {
        Self { n_a, n_b }
    }

    pub const fn total(self) -> u32 {
        self.n_a + self.n_b
    }

    /// Magnetic quantum number times two: `2m = n_a - n_b`.
    pub fn two_m(self) -> i64 {
        self.n_a as i64 - self.n_b as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    A,
    ADag,
    B,
    BDag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schwinger {
    JPlus,
    JMinus,
    Jz,
}

/// Sparse two-mode state with a total-quanta cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    amps: BTreeMap<ModeOccupation, Complex64>,
    cutoff: u32,
}

impl TwoModeState {
    /// The zero vector.
    pub fn zero(cutoff: u32) -> Self {
        Self { amps: BTreeMap::new(), cutoff }
    }

    pub fn vacuum(cutoff: u32) -> Self {
        Self::basis(ModeOccupation::new(0, 0), cutoff).expect("vacuum fits any cutoff")
    }

    pub fn basis(occ: ModeOccupation, cutoff: u32) -> Result<Self> {
        Self::from_amplitudes([(occ, ONE)], cutoff)
    }

    /// Builds a state from `(occupation, amplitude)` pairs; repeated
    /// occupations are summed.
    pub fn from_amplitudes<I>(terms: I, cutoff: u32) -> Result<Self>
    where
        I: IntoIterator<Item = (ModeOccupation, Complex64)>,
    {
        let mut state = Self::zero(cutoff);
        for (occ, amp) in terms {
            if occ.total() > cutoff {
                return Err(Error::CutoffOverflow { total: occ.total(), cutoff });
            }
            *state.amps.entry(occ).or_insert(ZERO) += amp;
        }
        Ok(state)
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn amplitude(&self, occ: ModeOccupation) -> Complex64 {
        self.amps.get(&occ).copied().unwrap_or(ZERO)
    }

    /// Stored terms in occupation order.
    pub fn iter(&self) -> impl Iterator<Item = (ModeOccupation, Complex64)> + '_ {
        self.amps.iter().map(|(&occ, &amp)| (occ, amp))
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the state scaled to unit norm, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n == 0.0 {
            return None;
        }
        Some(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            amps: self.amps.iter().map(|(&o, &a)| (o, a * factor)).collect(),
            cutoff: self.cutoff,
        }
    }

    /// Largest total quanta among stored terms.
    pub fn max_total(&self) -> u32 {
        self.amps.keys().map(|o| o.total()).max().unwrap_or(0)
    }

    /// `⟨self|ket⟩ = Σ conj(self[occ]) · ket[occ]`.
    pub fn inner(&self, ket: &TwoModeState) -> Complex64 {
        // walk the smaller map
        if self.amps.len() <= ket.amps.len() {
            self.amps.iter().map(|(o, b)| b.conj() * ket.amplitude(*o)).sum()
        } else {
            ket.amps.iter().map(|(o, k)| self.amplitude(*o).conj() * k).sum()
        }
    }

    /// Applies one ladder operator. Annihilating an empty mode drops the term;
    /// creating past the cutoff is an error.
    pub fn ladder(&self, which: Ladder) -> Result<Self> {
        let mut out = Self::zero(self.cutoff);
        for (&occ, &amp) in &self.amps {
            let ModeOccupation { n_a, n_b } = occ;
            let (target, coeff) = match which {
                Ladder::A if n_a == 0 => continue,
                Ladder::A => (ModeOccupation::new(n_a - 1, n_b), (n_a as f64).sqrt()),
                Ladder::B if n_b == 0 => continue,
                Ladder::B => (ModeOccupation::new(n_a, n_b - 1), (n_b as f64).sqrt()),
                Ladder::ADag => (ModeOccupation::new(n_a + 1, n_b), ((n_a + 1) as f64).sqrt()),
                Ladder::BDag => (ModeOccupation::new(n_a, n_b + 1), ((n_b + 1) as f64).sqrt()),
            };
            if target.total() > self.cutoff {
                return Err(Error::CutoffOverflow { total: target.total(), cutoff: self.cutoff });
            }
            *out.amps.entry(target).or_insert(ZERO) += amp * coeff;
        }
        Ok(out)
    }

    /// Applies a Schwinger angular-momentum operator. Total quanta is
    /// conserved term by term, so this never overflows the cutoff.
    pub fn schwinger(&self, which: Schwinger) -> Self {
        let mut out = Self::zero(self.cutoff);
        for (&occ, &amp) in &self.amps {
            let ModeOccupation { n_a, n_b } = occ;
            let (target, coeff) = match which {
                // a†b
                Schwinger::JPlus if n_b == 0 => continue,
                Schwinger::JPlus => (
                    ModeOccupation::new(n_a + 1, n_b - 1),
                    (((n_a + 1) as f64) * n_b as f64).sqrt(),
                ),
                // ab†
                Schwinger::JMinus if n_a == 0 => continue,
                Schwinger::JMinus => (
                    ModeOccupation::new(n_a - 1, n_b + 1),
                    (n_a as f64 * (n_b + 1) as f64).sqrt(),
                ),
                Schwinger::Jz => (occ, 0.5 * occ.two_m() as f64),
            };
            *out.amps.entry(target).or_insert(ZERO) += amp * coeff;
        }
        out
    }

    /// Projects onto the block of total quanta `two_j`.
    pub fn block_extract(&self, two_j: u32) -> BlockVector {
        let mut v = BlockVector::zeros(two_j);
        for (&occ, &amp) in &self.amps {
            if occ.total() == two_j {
                v.amps[occ.n_b as usize] = amp;
            }
        }
        v
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let mut out = self.clone();
        out.cutoff = self.cutoff.max(other.cutoff);
        for (&occ, &amp) in &other.amps {
            *out.amps.entry(occ).or_insert(ZERO) += amp * sign;
        }
        out
    }
}

impl Add for &TwoModeState {
    type Output = TwoModeState;
    fn add(self, rhs: Self) -> TwoModeState {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &TwoModeState {
    type Output = TwoModeState;
    fn sub(self, rhs: Self) -> TwoModeState {
        self.combine(rhs, -1.0)
    }
}

/// Dense vector on the block `n_a + n_b = 2j`; `amps[l]` multiplies `|2j-l⟩⊗|l⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockVector {
    two_j: u32,
    amps: Vec<Complex64>,
}

impl BlockVector {
    pub fn zeros(two_j: u32) -> Self {
        Self { two_j, amps: vec![ZERO; two_j as usize + 1] }
    }

    pub fn from_amps(two_j: u32, amps: Vec<Complex64>) -> Result<Self> {
        let expected = two_j as usize + 1;
        if amps.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: amps.len() });
        }
        Ok(Self { two_j, amps })
    }

    /// Unit vector with a one at index `l`.
    pub fn unit(two_j: u32, l: usize) -> Result<Self> {
        let mut v = Self::zeros(two_j);
        let dim = v.dim();
        *v.amps.get_mut(l).ok_or(Error::DimensionMismatch { expected: dim, got: l + 1 })? = ONE;
        Ok(v)
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    /// Fock occupation of index `l`.
    pub fn occupation(&self, l: usize) -> ModeOccupation {
        ModeOccupation::new(self.two_j - l as u32, l as u32)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, ket: &BlockVector) -> Result<Complex64> {
        self.check_dim(ket.dim())?;
        Ok(self.amps.iter().zip(&ket.amps).map(|(b, k)| b.conj() * k).sum())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { two_j: self.two_j, amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: Complex64, other: &BlockVector) -> Result<Self> {
        self.check_dim(other.dim())?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a + factor * b).collect();
        Ok(Self { two_j: self.two_j, amps })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &BlockVector) -> Result<f64> {
        self.check_dim(other.dim())?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn embed(&self, cutoff: u32) -> Result<TwoModeState> {
        if cutoff < self.two_j {
            return Err(Error::CutoffOverflow { total: self.two_j, cutoff });
        }
        TwoModeState::from_amplitudes(
            self.amps.iter().enumerate().map(|(l, &a)| (self.occupation(l), a)),
            cutoff,
        )
    }

    /// Dense block action of a Schwinger operator.
    pub fn schwinger(&self, which: Schwinger) -> Self {
        let two_j = self.two_j as usize;
        let mut out = vec![ZERO; self.dim()];
        match which {
            // |2j-l, l⟩ -> sqrt((2j-l+1) l) |2j-l+1, l-1⟩
            Schwinger::JPlus => {
                for l in 1..=two_j {
                    out[l - 1] = self.amps[l] * raise_coeff(two_j, l);
                }
            }
            // |2j-l, l⟩ -> sqrt((2j-l)(l+1)) |2j-l-1, l+1⟩
            Schwinger::JMinus => {
                for l in 0..two_j {
                    out[l + 1] = self.amps[l] * raise_coeff(two_j, l + 1);
                }
            }
            Schwinger::Jz => {
                for (l, o) in out.iter_mut().enumerate() {
                    *o = self.amps[l] * jz_diag(two_j, l);
                }
            }
        }
        Self { two_j: self.two_j, amps: out }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got });
        }
        Ok(())
    }
}

/// `⟨l-1| J+ |l⟩ = ⟨l| J- |l-1⟩ = sqrt((2j - l + 1) l)`.
pub(crate) fn raise_coeff(two_j: usize, l: usize) -> f64 {
    (((two_j + 1 - l) * l) as f64).sqrt()
}

/// `⟨l| Jz |l⟩ = j - l`.
pub(crate) fn jz_diag(two_j: usize, l: usize) -> f64 {
    0.5 * two_j as f64 - l as f64
}

/// Dense square matrix on a block, row-major in the [`BlockVector`] basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    two_j: u32,
    entries: Vec<Complex64>,
}

impl BlockMatrix {
    pub fn zeros(two_j: u32) -> Self {
        let n = two_j as usize + 1;
        Self { two_j, entries: vec![ZERO; n * n] }
    }

    pub fn identity(two_j: u32) -> Self {
        let mut m = Self::zeros(two_j);
        for i in 0..m.dim() {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_entries(two_j: u32, entries: Vec<Complex64>) -> Result<Self> {
        let n = two_j as usize + 1;
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        Ok(Self { two_j, entries })
    }

    pub fn from_fn(two_j: u32, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let n = two_j as usize + 1;
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { two_j, entries }
    }

    /// Matrix of a Schwinger operator on the block.
    pub fn schwinger(two_j: u32, which: Schwinger) -> Self {
        let tj = two_j as usize;
        Self::from_fn(two_j, |r, c| match which {
            Schwinger::JPlus if c == r + 1 => Complex64::from(raise_coeff(tj, c)),
            Schwinger::JMinus if r == c + 1 => Complex64::from(raise_coeff(tj, r)),
            Schwinger::Jz if r == c => Complex64::from(jz_diag(tj, r)),
            _ => ZERO,
        })
    }

    /// Outer product `|ket⟩⟨bra|`.
    pub fn outer(ket: &BlockVector, bra: &BlockVector) -> Result<Self> {
        ket.check_dim(bra.dim())?;
        let k = ket.amps();
        let b = bra.amps();
        Ok(Self::from_fn(ket.two_j(), |r, c| k[r] * b[c].conj()))
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn matvec(&self, v: &BlockVector) -> Result<BlockVector> {
        let n = self.dim();
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
        }
        let amps = self
            .entries
            .chunks_exact(n)
            .map(|row| row.iter().zip(v.amps()).map(|(m, x)| m * x).sum())
            .collect();
        Ok(BlockVector { two_j: self.two_j, amps })
    }

    pub fn matmul(&self, rhs: &BlockMatrix) -> Result<BlockMatrix> {
        let n = self.dim();
        if rhs.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rhs.dim() });
        }
        let mut out = Self::zeros(self.two_j);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.entries[r * n + c] += a * rhs[(k, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.two_j, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `M - M†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() < 1e-12
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &BlockMatrix) -> Result<f64> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let n = self.dim();
        (0..n).map(|c| (0..n).map(|r| self[(r, c)].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { two_j: self.two_j, entries: self.entries.iter().map(|e| e * factor).collect() }
    }
}

impl std::ops::Index<(usize, usize)> for BlockMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.dim() + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for BlockMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        let n = self.dim();
        &mut self.entries[r * n + c]
    }
}

impl Add for &BlockMatrix {
    type Output = BlockMatrix;
    fn add(self, rhs: Self) -> BlockMatrix {
        assert_eq!(self.dim(), rhs.dim(), "block dimension mismatch");
        BlockMatrix {
            two_j: self.two_j,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &BlockMatrix {
    type Output = BlockMatrix;
    fn sub(self, rhs: Self) -> BlockMatrix {
        assert_eq!(self.dim(), rhs.dim(), "block dimension mismatch");
        BlockMatrix {
            two_j: self.two_j,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &BlockMatrix {
    type Output = BlockMatrix;
    fn mul(self, rhs: f64) -> BlockMatrix {
        self.scale(Complex64::from(rhs))
    }
}
