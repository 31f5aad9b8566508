//! Riemann–Roch numerology on K3 surfaces and the numerical invariants of
//! rank-2 Lazarsfeld–Mukai bundles.
//!
//! Everything here is an integer identity; no cohomology is computed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{DivClass, Lattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("self-intersection {0} is odd")]
    OddSquare(i64),
    #[error("twist formulas are only implemented for rank 2, got rank {0}")]
    UnsupportedRank(u32),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("negative dimension: {0}")]
    NegativeDimension(String),
    #[error("integer overflow")]
    Overflow,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T> = std::result::Result<T, InvariantError>;

fn half(d2: i64) -> Result<i64> {
    if d2 % 2 != 0 {
        return Err(InvariantError::OddSquare(d2));
    }
    Ok(d2 / 2)
}

/// `chi(O_X(D)) = 2 + D^2/2`.
pub fn chi_line(d2: i64) -> Result<i64> {
    half(d2)?.checked_add(2).ok_or(InvariantError::Overflow)
}

/// Arithmetic genus `1 + D^2/2`.
pub fn genus_of(d2: i64) -> Result<i64> {
    half(d2)?.checked_add(1).ok_or(InvariantError::Overflow)
}

/// Rank and Chern classes of a vector bundle on a K3 surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleInvariants {
    pub rank: u32,
    pub c1: DivClass,
    pub c2: i64,
}

impl BundleInvariants {
    pub fn new(rank: u32, c1: DivClass, c2: i64) -> Result<Self> {
        if rank == 0 {
            return Err(InvariantError::BadParameters("rank must be >= 1".into()));
        }
        Ok(BundleInvariants { rank, c1, c2 })
    }

    /// Invariants of `E_{C,Z}`: rank 2, `c1 = C`, `c2 = deg Z`.
    pub fn lazarsfeld_mukai(c: DivClass, d: i64) -> Self {
        BundleInvariants {
            rank: 2,
            c1: c,
            c2: d,
        }
    }
}

/// `chi(E) = 2 rk(E) + c1(E)^2/2 - c2(E)`.
pub fn chi_bundle(inv: &BundleInvariants, lattice: &Lattice) -> Result<i64> {
    let c1sq = lattice.self_int(&inv.c1)?;
    let h = half(c1sq)?;
    (2 * inv.rank as i64)
        .checked_add(h)
        .and_then(|x| x.checked_sub(inv.c2))
        .ok_or(InvariantError::Overflow)
}

/// Twist of a rank-2 bundle by a line bundle `L`:
/// `c1' = c1 + 2L`, `c2' = c2 + c1.L + L^2`.
pub fn chern_twist(
    inv: &BundleInvariants,
    by: &DivClass,
    lattice: &Lattice,
) -> Result<BundleInvariants> {
    if inv.rank != 2 {
        return Err(InvariantError::UnsupportedRank(inv.rank));
    }
    let c1 = inv.c1.checked_add(&by.checked_scale(2)?)?;
    let cross = lattice.pair(&inv.c1, by)?;
    let sq = lattice.self_int(by)?;
    let c2 = inv
        .c2
        .checked_add(cross)
        .and_then(|x| x.checked_add(sq))
        .ok_or(InvariantError::Overflow)?;
    Ok(BundleInvariants { rank: 2, c1, c2 })
}

/// Brill–Noether number `g - (r+1)(g-d+r)`.
pub fn brill_noether(g: i64, r: i64, d: i64) -> i64 {
    let gap = g - d + r;
    g - (r + 1) * gap
}

/// Numerical invariants of a Lazarsfeld–Mukai bundle built from a `g^r_d`
/// on a curve of genus `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LMInvariants {
    pub g: i64,
    pub r: i64,
    pub d: i64,
    pub h0: i64,
    pub chi_end: i64,
    pub rho: i64,
}

pub fn lm_invariants(g: i64, r: i64, d: i64) -> Result<LMInvariants> {
    if g < 2 || r < 1 || d < 1 {
        return Err(InvariantError::BadParameters(format!(
            "need g >= 2, r >= 1, d >= 1; got g={g}, r={r}, d={d}"
        )));
    }
    let rho = brill_noether(g, r, d);
    Ok(LMInvariants {
        g,
        r,
        d,
        h0: g - d + 1 + 2 * r,
        chi_end: 2 * (1 - rho),
        rho,
    })
}

/// `chi(E_{C,Z}(-l)) = 4l^2 - l C.H + g + 3 - d` for a pencil (`r = 1`).
pub fn twist_chi(l: i64, ch: i64, g: i64, d: i64) -> i64 {
    4 * l * l - l * ch + g + 3 - d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LmAcmBounds {
    pub d_min: i64,
    pub d_max: i64,
    pub feasible: bool,
}

/// Degree window for the pencil when `E_{C,Z}` is initialized and aCM:
/// `h0 = g + 3 - d <= 8` gives `d >= g - 5`, and `h^2(E(-1)) >= 0` gives
/// `d <= g + 7 - C.H`.
pub fn lm_acm_bounds(g: i64, ch: i64) -> LmAcmBounds {
    let d_min = g - 5;
    let d_max = g + 7 - ch;
    LmAcmBounds {
        d_min,
        d_max,
        feasible: d_min <= d_max,
    }
}

/// `h^0(O_X(lH) (x) J_Z) = chi(E(-l)) - h^0(O_X(lH - C))`.
pub fn hilbert_ideal_z(l: i64, chi_l: i64, h0_lh_minus_c: i64) -> Result<i64> {
    if h0_lh_minus_c < 0 || chi_l < h0_lh_minus_c {
        return Err(InvariantError::NegativeDimension(format!(
            "l={l}: chi={chi_l}, h0(lH-C)={h0_lh_minus_c}"
        )));
    }
    Ok(chi_l - h0_lh_minus_c)
}

/// Smallest positive `m` with `m^2 >= a*b`: the Hodge-index lower bound on
/// `C.D` when `C^2 >= a` and `D^2 = b`.
pub fn hodge_lower(a: i64, b: i64) -> i64 {
    let p = (a as i128) * (b as i128);
    if p <= 1 {
        return 1;
    }
    let r = (p as u128).isqrt() as i128;
    if r * r == p {
        r as i64
    } else {
        (r + 1) as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_and_genus() {
        assert_eq!(chi_line(0).unwrap(), 2);
        assert_eq!(chi_line(-4).unwrap(), 0);
        assert_eq!(chi_line(8).unwrap(), 6);
        assert_eq!(chi_line(-6).unwrap(), -1);
        assert_eq!(chi_line(3), Err(InvariantError::OddSquare(3)));
        assert_eq!(genus_of(24).unwrap(), 13);
        assert_eq!(genus_of(-2).unwrap(), 0);
        assert_eq!(genus_of(20).unwrap(), 11);
        assert!(genus_of(-1).is_err());
    }

    #[test]
    fn bundle_chi_and_twist() {
        let l = Lattice::quartic(-2, 2).unwrap();
        let c = l.class([2, 2]).unwrap();
        let e = BundleInvariants::lazarsfeld_mukai(c.clone(), 8);
        assert_eq!(chi_bundle(&e, &l).unwrap(), 8);
        let t = chern_twist(&e, &l.class([-1, -1]).unwrap(), &l).unwrap();
        assert_eq!(t.c1, DivClass::zero(2));
        assert_eq!(t.c2, 2);
        assert_eq!(chi_bundle(&t, &l).unwrap(), 2);

        let zero = DivClass::zero(2);
        assert_eq!(chern_twist(&e, &zero, &l).unwrap(), e);
        let by = l.class([3, -1]).unwrap();
        let back = chern_twist(
            &chern_twist(&e, &by, &l).unwrap(),
            &by.checked_scale(-1).unwrap(),
            &l,
        )
        .unwrap();
        assert_eq!(back, e);

        let line = BundleInvariants::new(1, c, 0).unwrap();
        assert_eq!(chi_bundle(&line, &l).unwrap(), chi_line(24).unwrap());
        assert_eq!(
            chern_twist(&line, &zero, &l),
            Err(InvariantError::UnsupportedRank(1))
        );
        assert!(BundleInvariants::new(0, zero, 0).is_err());
    }

    #[test]
    fn brill_noether_values() {
        assert_eq!(brill_noether(9, 1, 4), -3);
        assert_eq!(brill_noether(11, 1, 6), -1);
        assert_eq!(brill_noether(4, 1, 3), 0);
        assert_eq!(brill_noether(5, 1, 2), -3);
    }

    #[test]
    fn lm_values() {
        assert_eq!(lm_invariants(13, 1, 8).unwrap().h0, 8);
        let x = lm_invariants(9, 1, 4).unwrap();
        assert_eq!((x.h0, x.rho, x.chi_end), (8, -3, 8));
        let x = lm_invariants(5, 1, 2).unwrap();
        assert_eq!((x.h0, x.rho), (6, -3));
        assert!(lm_invariants(1, 1, 1).is_err());
        assert!(lm_invariants(5, 0, 1).is_err());
        assert!(lm_invariants(5, 1, 0).is_err());
    }

    #[test]
    fn twist_chi_values() {
        for d in 1..12 {
            assert_eq!(twist_chi(1, 12, 13, d), 8 - d);
            assert_eq!(twist_chi(1, 10, 5, d), 2 - d);
            assert_eq!(twist_chi(0, 99, 13, d), 16 - d);
        }
    }

    #[test]
    fn acm_bounds() {
        assert_eq!(
            lm_acm_bounds(13, 12),
            LmAcmBounds {
                d_min: 8,
                d_max: 8,
                feasible: true
            }
        );
        let b = lm_acm_bounds(9, 12);
        assert_eq!((b.d_min, b.d_max), (4, 4));
        assert!(!lm_acm_bounds(3, 13).feasible);
        for g in 3..40 {
            for ch in 1..30 {
                assert_eq!(lm_acm_bounds(g, ch).feasible, ch <= 12);
            }
        }
    }

    #[test]
    fn hilbert_function_of_z() {
        assert_eq!(hilbert_ideal_z(1, twist_chi(1, 12, 13, 8), 0).unwrap(), 0);
        assert_eq!(hilbert_ideal_z(3, 5, 5).unwrap(), 0);
        // C = 2h + 2B on (B^2, h.B) = (-2, 2): 2h - C has negative degree, so no sections.
        let l = Lattice::quartic(-2, 2).unwrap();
        let two_h_minus_c = l.class([0, -2]).unwrap();
        assert_eq!(l.degree(&two_h_minus_c).unwrap(), -4);
        assert_eq!(twist_chi(2, 12, 13, 8), 0);
        assert_eq!(hilbert_ideal_z(2, twist_chi(2, 12, 13, 8), 0).unwrap(), 0);
        assert_eq!(hilbert_ideal_z(2, 11, 0).unwrap(), 11);
        assert!(matches!(
            hilbert_ideal_z(1, 0, 1),
            Err(InvariantError::NegativeDimension(_))
        ));
        assert!(hilbert_ideal_z(1, 3, -1).is_err());
    }

    #[test]
    fn hodge_lower_values() {
        assert_eq!(hodge_lower(4, 2), 3);
        assert_eq!(hodge_lower(4, 4), 4);
        assert_eq!(hodge_lower(20, 4), 9);
        assert_eq!(hodge_lower(4, 8), 6);
        assert_eq!(hodge_lower(1, 1), 1);
    }
}
