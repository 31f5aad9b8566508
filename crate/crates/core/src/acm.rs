//! Effectivity oracle and the initialized-aCM line bundle classifier for
//! quartic surfaces.
//!
//! The classifier keys on `(B^2, h.B)` plus the two emptiness facts needed in
//! the Ulrich case; emptiness that the lattice cannot decide must come in as
//! an [`Assumption`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{DivClass, Lattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AcmError {
    #[error("the trivial class is excluded")]
    TrivialClass,
    #[error("class {0} has no sections, so it cannot be an initialized aCM candidate")]
    NotEffectiveCandidate(DivClass),
    #[error("companions are only defined for initialized aCM input")]
    NotAcmInput,
    #[error("conflicting assumptions for class {0}: {1}")]
    ConflictingAssumptions(DivClass, String),
    #[error("companion {0} ({1}) does not re-classify as initialized aCM")]
    CompanionNotAcm(DivClass, String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T> = std::result::Result<T, AcmError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AssumptionKind {
    Effective,
    Empty,
    IrreducibleCurve,
    EllipticPencil,
    BasePointFree,
}

impl AssumptionKind {
    /// Kinds that imply `|D|` is nonempty.
    pub fn implies_effective(self) -> bool {
        !matches!(self, AssumptionKind::Empty)
    }
}

/// A geometric fact about a class supplied from outside the lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assumption {
    pub subject: DivClass,
    pub kind: AssumptionKind,
    #[serde(default)]
    pub note: String,
}

impl Assumption {
    pub fn new(subject: DivClass, kind: AssumptionKind, note: impl Into<String>) -> Self {
        Assumption {
            subject,
            kind,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Effectivity {
    Effective,
    Empty,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: Effectivity,
    pub reason: String,
}

impl Verdict {
    fn new(value: Effectivity, reason: &str) -> Self {
        Verdict {
            value,
            reason: reason.to_string(),
        }
    }
}

/// Fails if any class is asserted both effective and empty.
pub fn check_assumptions(lattice: &Lattice, assumptions: &[Assumption]) -> Result<()> {
    for a in assumptions {
        lattice.class(a.subject.0.clone())?;
    }
    for (i, a) in assumptions.iter().enumerate() {
        for b in &assumptions[i + 1..] {
            if a.subject == b.subject && a.kind.implies_effective() != b.kind.implies_effective() {
                return Err(AcmError::ConflictingAssumptions(
                    a.subject.clone(),
                    format!("{:?} vs {:?}", a.kind, b.kind),
                ));
            }
        }
    }
    Ok(())
}

/// Three-valued effectivity: is `|D|` nonempty?
///
/// Decision rules, in order: the zero class is effective; declared
/// assumptions; a nonzero class of nonpositive degree is empty; a class with
/// `D^2 >= -2` and positive degree is effective (Riemann–Roch). Everything else
/// is `Unknown`.
pub fn effectivity(lattice: &Lattice, d: &DivClass, assumptions: &[Assumption]) -> Result<Verdict> {
    lattice.class(d.0.clone())?;
    check_assumptions(lattice, assumptions)?;
    if d.is_zero() {
        return Ok(Verdict::new(Effectivity::Effective, "trivial-class"));
    }
    let deg = lattice.degree(d)?;
    let sq = lattice.self_int(d)?;
    let rr_effective = sq >= -2 && deg > 0;
    let declared = assumptions.iter().find(|a| &a.subject == d);
    if let Some(a) = declared {
        if a.kind.implies_effective() {
            if deg <= 0 {
                return Err(AcmError::ConflictingAssumptions(
                    d.clone(),
                    format!("declared {:?} but degree is {deg}", a.kind),
                ));
            }
            return Ok(Verdict::new(Effectivity::Effective, "assumption"));
        }
        if rr_effective {
            return Err(AcmError::ConflictingAssumptions(
                d.clone(),
                format!("declared Empty but D^2 = {sq} >= -2 and degree {deg} > 0"),
            ));
        }
        return Ok(Verdict::new(Effectivity::Empty, "assumption"));
    }
    if deg <= 0 {
        return Ok(Verdict::new(Effectivity::Empty, "nonpositive-degree"));
    }
    if rr_effective {
        return Ok(Verdict::new(Effectivity::Effective, "riemann-roch"));
    }
    Ok(Verdict::new(Effectivity::Unknown, ""))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AcmStatus {
    NotAcm,
    Acm,
    AcmUlrich,
    NeedsAssumption,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    A,
    B,
    C,
    D,
    None,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::A => "a",
            CaseTag::B => "b",
            CaseTag::C => "c",
            CaseTag::D => "d",
            CaseTag::None => "none",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcmClassification {
    pub status: AcmStatus,
    pub case_tag: CaseTag,
    pub missing: Vec<Assumption>,
}

impl AcmClassification {
    fn plain(status: AcmStatus, case_tag: CaseTag) -> Self {
        AcmClassification {
            status,
            case_tag,
            missing: Vec::new(),
        }
    }

    pub fn is_acm(&self) -> bool {
        matches!(self.status, AcmStatus::Acm | AcmStatus::AcmUlrich)
    }
}

/// Closed-form table of `(B^2, h.B)` pairs admitting an initialized aCM line
/// bundle on a quartic. Case `d` additionally needs `|B-h| = |2h-B| = {}`.
pub fn acm_table_case(b_square: i64, h_dot_b: i64) -> CaseTag {
    match (b_square, h_dot_b) {
        (-2, 1..=3) => CaseTag::A,
        (0, 3..=4) => CaseTag::B,
        (2, 5) => CaseTag::C,
        (4, 6) => CaseTag::D,
        _ => CaseTag::None,
    }
}

/// Classifies a nonzero, not-empty class `B` as an initialized aCM line bundle.
pub fn is_initialized_acm(
    lattice: &Lattice,
    b: &DivClass,
    assumptions: &[Assumption],
) -> Result<AcmClassification> {
    lattice.class(b.0.clone())?;
    if b.is_zero() {
        return Err(AcmError::TrivialClass);
    }
    if effectivity(lattice, b, assumptions)?.value == Effectivity::Empty {
        return Err(AcmError::NotEffectiveCandidate(b.clone()));
    }
    let sq = lattice.self_int(b)?;
    let deg = lattice.degree(b)?;
    let tag = acm_table_case(sq, deg);
    match tag {
        CaseTag::None => Ok(AcmClassification::plain(AcmStatus::NotAcm, CaseTag::None)),
        CaseTag::D => {
            let h = lattice.ample();
            let b_minus_h = b.checked_sub(h)?;
            let two_h_minus_b = h.checked_scale(2)?.checked_sub(b)?;
            let mut missing = Vec::new();
            for (cls, what) in [(b_minus_h, "B - h"), (two_h_minus_b, "2h - B")] {
                match effectivity(lattice, &cls, assumptions)?.value {
                    Effectivity::Empty => {}
                    Effectivity::Effective => {
                        return Ok(AcmClassification::plain(AcmStatus::NotAcm, CaseTag::None))
                    }
                    Effectivity::Unknown => missing.push(Assumption::new(
                        cls,
                        AssumptionKind::Empty,
                        format!("|{what}| must be empty for the Ulrich case"),
                    )),
                }
            }
            if missing.is_empty() {
                Ok(AcmClassification::plain(AcmStatus::AcmUlrich, CaseTag::D))
            } else {
                Ok(AcmClassification {
                    status: AcmStatus::NeedsAssumption,
                    case_tag: CaseTag::D,
                    missing,
                })
            }
        }
        _ => Ok(AcmClassification::plain(AcmStatus::Acm, tag)),
    }
}

/// Rule ids attached to companion classes.
pub mod rules {
    pub const NEGATION: &str = "dual-of-acm";
    pub const H_MINUS_B: &str = "h-minus-B";
    pub const TWO_H_MINUS_B: &str = "2h-minus-B";
    pub const THREE_H_MINUS_B: &str = "3h-minus-B";
}

/// Classes obtained from an initialized aCM `B` that are again aCM: `-B`
/// always, plus `k*h - B` for the appropriate `k`, which is re-classified as
/// initialized aCM.
pub fn acm_companions(
    lattice: &Lattice,
    b: &DivClass,
    classification: &AcmClassification,
    assumptions: &[Assumption],
) -> Result<Vec<(DivClass, String)>> {
    if !classification.is_acm() {
        return Err(AcmError::NotAcmInput);
    }
    let sq = lattice.self_int(b)?;
    let deg = lattice.degree(b)?;
    let mut out = vec![(b.checked_scale(-1)?, rules::NEGATION.to_string())];
    let shift = match (sq, deg) {
        (-2, 1..=2) => Some((1, rules::H_MINUS_B)),
        (2, _) | (0, 4) | (-2, 3) => Some((2, rules::TWO_H_MINUS_B)),
        (4, _) => Some((3, rules::THREE_H_MINUS_B)),
        _ => None,
    };
    if let Some((k, rule)) = shift {
        let c = lattice.ample().checked_scale(k)?.checked_sub(b)?;
        let cls = is_initialized_acm(lattice, &c, assumptions)?;
        if !cls.is_acm() {
            return Err(AcmError::CompanionNotAcm(c, rule.to_string()));
        }
        out.push((c, rule.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PencilVerdict {
    Yes,
    No,
    Unknown,
}

/// Whether `|D|` is an elliptic pencil: square zero and degree 3 suffices;
/// other square-zero classes need an `EllipticPencil` assumption.
pub fn is_elliptic_pencil_class(
    lattice: &Lattice,
    d: &DivClass,
    assumptions: &[Assumption],
) -> Result<PencilVerdict> {
    if lattice.self_int(d)? != 0 {
        return Ok(PencilVerdict::No);
    }
    if lattice.degree(d)? == 3 {
        return Ok(PencilVerdict::Yes);
    }
    let declared = assumptions
        .iter()
        .any(|a| &a.subject == d && a.kind == AssumptionKind::EllipticPencil);
    Ok(if declared {
        PencilVerdict::Yes
    } else {
        PencilVerdict::Unknown
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulrich_assumptions(l: &Lattice) -> Vec<Assumption> {
        vec![
            Assumption::new(l.class([-1, 1]).unwrap(), AssumptionKind::Empty, "B-h"),
            Assumption::new(l.class([2, -1]).unwrap(), AssumptionKind::Empty, "2h-B"),
        ]
    }

    #[test]
    fn effectivity_examples() {
        let l = Lattice::quartic(-2, 3).unwrap();
        let v = effectivity(&l, &DivClass::zero(2), &[]).unwrap();
        assert_eq!(v.value, Effectivity::Effective);
        let d = l.class([2, -1]).unwrap();
        assert_eq!(l.self_int(&d).unwrap(), 2);
        assert_eq!(l.degree(&d).unwrap(), 5);
        assert_eq!(
            effectivity(&l, &d, &[]).unwrap().value,
            Effectivity::Effective
        );

        let l = Lattice::quartic(4, 6).unwrap();
        let d = l.class([-1, 1]).unwrap();
        let v = effectivity(&l, &d, &[]).unwrap();
        assert_eq!(v.value, Effectivity::Unknown);
        assert!(v.reason.is_empty());
        let v = effectivity(&l, &d, &ulrich_assumptions(&l)).unwrap();
        assert_eq!(v.value, Effectivity::Empty);
        assert_eq!(v.reason, "assumption");
        assert_eq!(
            effectivity(&l, &l.class([-1, 0]).unwrap(), &[])
                .unwrap()
                .value,
            Effectivity::Empty
        );
    }

    #[test]
    fn conflicting_assumptions_rejected() {
        let l = Lattice::quartic(4, 6).unwrap();
        let d = l.class([-1, 1]).unwrap();
        let a = vec![
            Assumption::new(d.clone(), AssumptionKind::Empty, ""),
            Assumption::new(d.clone(), AssumptionKind::Effective, ""),
        ];
        assert!(matches!(
            effectivity(&l, &d, &a),
            Err(AcmError::ConflictingAssumptions(..))
        ));
        // h is effective by Riemann-Roch; declaring it empty contradicts that
        let h = l.class([1, 0]).unwrap();
        let a = vec![Assumption::new(h.clone(), AssumptionKind::Empty, "")];
        assert!(effectivity(&l, &h, &a).is_err());
    }

    #[test]
    fn classifier_examples() {
        let l = Lattice::quartic(-2, 1).unwrap();
        let b = l.class([0, 1]).unwrap();
        let c = is_initialized_acm(&l, &b, &[]).unwrap();
        assert_eq!((c.status, c.case_tag), (AcmStatus::Acm, CaseTag::A));

        let l = Lattice::quartic(4, 6).unwrap();
        let b = l.class([0, 1]).unwrap();
        let c = is_initialized_acm(&l, &b, &ulrich_assumptions(&l)).unwrap();
        assert_eq!((c.status, c.case_tag), (AcmStatus::AcmUlrich, CaseTag::D));
        let c = is_initialized_acm(&l, &b, &[]).unwrap();
        assert_eq!(
            (c.status, c.case_tag),
            (AcmStatus::NeedsAssumption, CaseTag::D)
        );
        assert_eq!(c.missing.len(), 2);

        let l = Lattice::quartic(-2, 4).unwrap();
        let c = is_initialized_acm(&l, &l.class([0, 1]).unwrap(), &[]).unwrap();
        assert_eq!(c.status, AcmStatus::NotAcm);
        assert_eq!(c.case_tag, CaseTag::None);

        assert_eq!(
            is_initialized_acm(&l, &DivClass::zero(2), &[]),
            Err(AcmError::TrivialClass)
        );
        assert!(matches!(
            is_initialized_acm(&l, &l.class([0, -1]).unwrap(), &[]),
            Err(AcmError::NotEffectiveCandidate(_))
        ));
    }

    #[test]
    fn companion_examples() {
        let l = Lattice::quartic(-2, 1).unwrap();
        let b = l.class([0, 1]).unwrap();
        let cls = is_initialized_acm(&l, &b, &[]).unwrap();
        let comps = acm_companions(&l, &b, &cls, &[]).unwrap();
        let hb = l.class([1, -1]).unwrap();
        assert!(comps.contains(&(hb.clone(), rules::H_MINUS_B.into())));
        assert!(comps.contains(&(l.class([0, -1]).unwrap(), rules::NEGATION.into())));
        assert_eq!(l.self_int(&hb).unwrap(), 0);
        assert_eq!(l.degree(&hb).unwrap(), 3);

        let l = Lattice::quartic(2, 5).unwrap();
        let b = l.class([0, 1]).unwrap();
        let cls = is_initialized_acm(&l, &b, &[]).unwrap();
        let comps = acm_companions(&l, &b, &cls, &[]).unwrap();
        let c = &comps[1].0;
        assert_eq!(comps[1].1, rules::TWO_H_MINUS_B);
        assert_eq!((l.self_int(c).unwrap(), l.degree(c).unwrap()), (-2, 3));

        let l = Lattice::quartic(4, 6).unwrap();
        let a = ulrich_assumptions(&l);
        let b = l.class([0, 1]).unwrap();
        let cls = is_initialized_acm(&l, &b, &a).unwrap();
        let comps = acm_companions(&l, &b, &cls, &a).unwrap();
        let c = &comps[1].0;
        assert_eq!(comps[1].1, rules::THREE_H_MINUS_B);
        assert_eq!((l.self_int(c).unwrap(), l.degree(c).unwrap()), (4, 6));

        let not = AcmClassification::plain(AcmStatus::NotAcm, CaseTag::None);
        assert_eq!(acm_companions(&l, &b, &not, &a), Err(AcmError::NotAcmInput));
    }

    #[test]
    fn elliptic_pencils() {
        let l = Lattice::quartic(-2, 1).unwrap();
        assert_eq!(
            is_elliptic_pencil_class(&l, &l.class([1, -1]).unwrap(), &[]).unwrap(),
            PencilVerdict::Yes
        );
        assert_eq!(
            is_elliptic_pencil_class(&l, &l.class([1, 0]).unwrap(), &[]).unwrap(),
            PencilVerdict::No
        );
        let l = Lattice::quartic(0, 4).unwrap();
        let b = l.class([0, 1]).unwrap();
        assert_eq!(
            is_elliptic_pencil_class(&l, &b, &[]).unwrap(),
            PencilVerdict::Unknown
        );
        let a = vec![Assumption::new(
            b.clone(),
            AssumptionKind::EllipticPencil,
            "",
        )];
        assert_eq!(
            is_elliptic_pencil_class(&l, &b, &a).unwrap(),
            PencilVerdict::Yes
        );
    }
}
