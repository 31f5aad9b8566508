//! Integral lattices with a distinguished ample class.
//!
//! All pairings are computed in checked `i64` arithmetic; the signature is
//! computed by congruence diagonalization over arbitrary-precision rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NonSymmetric { row: usize, col: usize },
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("k3 lattice has odd diagonal entry {value} at index {index}")]
    OddK3Diagonal { index: usize, value: i64 },
    #[error("k3 lattice must have signature (1, {expected_neg}), found ({pos}, {neg})")]
    WrongSignature {
        pos: usize,
        neg: usize,
        expected_neg: usize,
    },
    #[error("ample class must have positive self-intersection, found {0}")]
    NonPositiveAmple(i64),
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("class has length {found}, lattice rank is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("intersection form is degenerate")]
    DegenerateForm,
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// A divisor class, as integer coefficients in a lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivClass(pub Vec<i64>);

impl DivClass {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        DivClass(coords.into())
    }

    pub fn zero(rank: usize) -> Self {
        DivClass(vec![0; rank])
    }

    /// The `index`-th basis vector.
    pub fn basis(rank: usize, index: usize) -> Self {
        let mut v = vec![0; rank];
        v[index] = 1;
        DivClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    fn same_len(&self, other: &DivClass) -> Result<()> {
        if self.len() != other.len() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DivClass) -> Result<DivClass> {
        self.same_len(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(LatticeError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(DivClass)
    }

    pub fn checked_sub(&self, other: &DivClass) -> Result<DivClass> {
        self.checked_add(&other.checked_scale(-1)?)
    }

    pub fn checked_scale(&self, k: i64) -> Result<DivClass> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(LatticeError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(DivClass)
    }

    /// `sum k_i * D_i`; all terms must share one length.
    pub fn lin_comb(terms: &[(i64, &DivClass)]) -> Result<DivClass> {
        let first = terms
            .first()
            .ok_or_else(|| LatticeError::BadDimensions("empty linear combination".into()))?;
        let mut acc = DivClass::zero(first.1.len());
        for (k, d) in terms {
            acc = acc.checked_add(&d.checked_scale(*k)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An integral symmetric bilinear form on a labeled basis, together with an
/// ample class.
///
/// Immutable after construction. Serializes as [`LatticeData`] and is
/// re-validated on deserialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeData", into = "LatticeData")]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
    ample: DivClass,
    k3: bool,
}

/// Plain serialized form of a [`Lattice`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeData {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub labels: Vec<String>,
    pub ample: Vec<i64>,
    pub k3: bool,
}

impl TryFrom<LatticeData> for Lattice {
    type Error = LatticeError;

    fn try_from(d: LatticeData) -> Result<Lattice> {
        if d.rank != d.gram.len() {
            return Err(LatticeError::BadDimensions(format!(
                "rank {} but gram has {} rows",
                d.rank,
                d.gram.len()
            )));
        }
        Lattice::new(d.gram, d.labels, DivClass(d.ample), d.k3)
    }
}

impl From<Lattice> for LatticeData {
    fn from(l: Lattice) -> LatticeData {
        LatticeData {
            rank: l.rank(),
            gram: l.gram,
            labels: l.labels,
            ample: l.ample.0,
            k3: l.k3,
        }
    }
}

impl Lattice {
    /// Validates and builds a lattice. With `k3` set, the diagonal must be
    /// even and the signature must be `(1, rank - 1)`.
    pub fn new(
        gram: Vec<Vec<i64>>,
        labels: Vec<String>,
        ample: DivClass,
        k3: bool,
    ) -> Result<Lattice> {
        let rank = gram.len();
        if rank == 0 {
            return Err(LatticeError::BadDimensions("rank must be positive".into()));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != rank {
                return Err(LatticeError::BadDimensions(format!(
                    "gram row {i} has length {}, expected {rank}",
                    row.len()
                )));
            }
        }
        for i in 0..rank {
            for j in (i + 1)..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NonSymmetric { row: i, col: j });
                }
            }
        }
        if labels.len() != rank {
            return Err(LatticeError::BadDimensions(format!(
                "{} labels for rank {rank}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        if ample.len() != rank {
            return Err(LatticeError::DimensionMismatch {
                expected: rank,
                found: ample.len(),
            });
        }
        let lattice = Lattice {
            gram,
            labels,
            ample,
            k3,
        };
        let a2 = lattice.self_int(&lattice.ample)?;
        if a2 <= 0 {
            return Err(LatticeError::NonPositiveAmple(a2));
        }
        if k3 {
            for i in 0..rank {
                let v = lattice.gram[i][i];
                if v % 2 != 0 {
                    return Err(LatticeError::OddK3Diagonal { index: i, value: v });
                }
            }
            let (pos, neg) = lattice.signature()?;
            if pos != 1 || neg != rank - 1 {
                return Err(LatticeError::WrongSignature {
                    pos,
                    neg,
                    expected_neg: rank - 1,
                });
            }
        }
        Ok(lattice)
    }

    /// Rank-2 lattice on the basis `(h, B)` with `h^2 = 4`, the shape used for
    /// every quartic surface case.
    pub fn quartic(b_square: i64, h_dot_b: i64) -> Result<Lattice> {
        Lattice::new(
            vec![vec![4, h_dot_b], vec![h_dot_b, b_square]],
            vec!["h".into(), "B".into()],
            DivClass::new([1, 0]),
            true,
        )
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ample(&self) -> &DivClass {
        &self.ample
    }

    pub fn is_k3(&self) -> bool {
        self.k3
    }

    /// Validates a coordinate vector against this lattice's rank.
    pub fn class(&self, coords: impl Into<Vec<i64>>) -> Result<DivClass> {
        let d = DivClass(coords.into());
        self.check_len(&d)?;
        Ok(d)
    }

    fn check_len(&self, d: &DivClass) -> Result<()> {
        if d.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: d.len(),
            });
        }
        Ok(())
    }

    /// `D1^T * gram * D2`.
    pub fn pair(&self, d1: &DivClass, d2: &DivClass) -> Result<i64> {
        self.check_len(d1)?;
        self.check_len(d2)?;
        let mut acc: i64 = 0;
        for (i, &a) in d1.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut row: i64 = 0;
            for (j, &b) in d2.0.iter().enumerate() {
                let term = self.gram[i][j]
                    .checked_mul(b)
                    .ok_or(LatticeError::Overflow)?;
                row = row.checked_add(term).ok_or(LatticeError::Overflow)?;
            }
            let term = a.checked_mul(row).ok_or(LatticeError::Overflow)?;
            acc = acc.checked_add(term).ok_or(LatticeError::Overflow)?;
        }
        Ok(acc)
    }

    pub fn self_int(&self, d: &DivClass) -> Result<i64> {
        self.pair(d, d)
    }

    /// Degree against the ample class.
    pub fn degree(&self, d: &DivClass) -> Result<i64> {
        self.pair(&self.ample, d)
    }

    /// `(positive, negative)` inertia, by exact congruence diagonalization.
    pub fn signature(&self) -> Result<(usize, usize)> {
        signature_of(&self.gram)
    }

    /// Checks `D1^2 * D2^2 <= (D1.D2)^2` for two classes of positive square.
    pub fn hodge_check(&self, d1: &DivClass, d2: &DivClass) -> Result<bool> {
        let a = self.self_int(d1)?;
        let b = self.self_int(d2)?;
        if a <= 0 || b <= 0 {
            return Err(LatticeError::PreconditionViolated(format!(
                "hodge_check needs positive squares, got {a} and {b}"
            )));
        }
        let m = self.pair(d1, d2)? as i128;
        Ok((a as i128) * (b as i128) <= m * m)
    }

    /// Gram matrix of the sublattice spanned by `basis` (in this lattice's
    /// coordinates). Entries are pairings of the given classes.
    pub fn sub_gram(&self, basis: &[DivClass]) -> Result<Vec<Vec<i64>>> {
        basis
            .iter()
            .map(|a| basis.iter().map(|b| self.pair(a, b)).collect())
            .collect()
    }

    /// True when every diagonal entry is even (equivalently, every square is even).
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }
}

/// Signature of a symmetric integer matrix, exact.
pub fn signature_of(gram: &[Vec<i64>]) -> Result<(usize, usize)> {
    let n = gram.len();
    let mut q: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let (mut pos, mut neg) = (0usize, 0usize);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !q[i][i].is_zero());
        match pivot {
            Some(p) => swap_sym(&mut q, k, p),
            None => {
                // Zero diagonal on the remaining block: e_i -> e_i + e_j turns an
                // off-diagonal entry into a nonzero diagonal one.
                let off = (k..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !q[i][j].is_zero());
                let (i, j) = off.ok_or(LatticeError::DegenerateForm)?;
                add_sym(&mut q, i, j);
                swap_sym(&mut q, k, i);
            }
        }
        let d = q[k][k].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for j in (k + 1)..n {
            if q[j][k].is_zero() {
                continue;
            }
            let f = &q[j][k] / &d;
            for c in k..n {
                let t = &f * &q[k][c];
                q[j][c] = &q[j][c] - t;
            }
            for r in k..n {
                let t = &f * &q[r][k];
                q[r][j] = &q[r][j] - t;
            }
        }
    }
    Ok((pos, neg))
}

fn swap_sym(q: &mut [Vec<BigRational>], a: usize, b: usize) {
    if a == b {
        return;
    }
    q.swap(a, b);
    for row in q.iter_mut() {
        row.swap(a, b);
    }
}

/// Basis change `e_i -> e_i + e_j`.
fn add_sym(q: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = q.len();
    for c in 0..n {
        let t = q[j][c].clone();
        q[i][c] = &q[i][c] + t;
    }
    for r in 0..n {
        let t = q[r][j].clone();
        q[r][i] = &q[r][i] + t;
    }
}
