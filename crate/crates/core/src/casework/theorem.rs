//! Necessity replay on a quartic with `Pic = Zh + ZB`: every class `sh + tB`
//! that could carry an initialized aCM line bundle either reduces to a
//! companion of `B` (`|t| <= 1`) or is a case-list survivor killed by a
//! shipped contradiction script.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::builtin::builtin_scripts;
use super::cases::{case_preset, enumerate_case, CaseError};
use super::script::{run_script, Conclusion, DerivationScript, Overall};
use crate::acm::{
    acm_companions, effectivity, is_initialized_acm, AcmError, Assumption, CaseTag, Effectivity,
};
use crate::lattice::{DivClass, Lattice, LatticeError};

#[derive(Debug, Error)]
pub enum TheoremError {
    #[error("theorem replay needs a rank-2 lattice, got rank {0}")]
    Rank(usize),
    #[error("B = {0} is not an initialized aCM class here")]
    NotAcm(DivClass),
    #[error("(h, {0}) is not a basis of the lattice")]
    NotBasis(DivClass),
    #[error("frame gram {found:?} does not match the case list lattice {expected:?}")]
    FrameMismatch {
        found: Vec<Vec<i64>>,
        expected: Vec<Vec<i64>>,
    },
    #[error(transparent)]
    Acm(#[from] AcmError),
    #[error(transparent)]
    Case(#[from] CaseError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T> = std::result::Result<T, TheoremError>;

/// The basis `(h, B')` the case lists are written in, with `B'` one of `B`,
/// `h - B`, `2h - B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub preset: String,
    pub b: DivClass,
    pub rule: String,
}

impl Frame {
    /// Frame coordinates `(s, t)` to the lattice's own coordinates.
    pub fn class_at(&self, lattice: &Lattice, s: i64, t: i64) -> Result<DivClass> {
        Ok(DivClass::lin_comb(&[(s, lattice.ample()), (t, &self.b)])?)
    }

    /// Frame lattice: the gram of `(h, B')` inside `lattice`.
    pub fn lattice(&self, lattice: &Lattice) -> Result<Lattice> {
        let gram = lattice.sub_gram(&[lattice.ample().clone(), self.b.clone()])?;
        Ok(Lattice::new(
            gram,
            vec!["h".into(), "B".into()],
            DivClass::new([1, 0]),
            false,
        )?)
    }
}

/// Picks the frame for `(B^2, h.B)`. The two table rows without their own case
/// list move to `h - B` or `2h - B`, which land on a row that has one.
pub fn frame(lattice: &Lattice, b: &DivClass) -> Result<Frame> {
    if lattice.rank() != 2 {
        return Err(TheoremError::Rank(lattice.rank()));
    }
    let sq = lattice.self_int(b)?;
    let deg = lattice.degree(b)?;
    let (preset, k, rule) = match (sq, deg) {
        (-2, 1) => ("i-a", 0, "B"),
        (-2, 2) => ("i-b", 0, "B"),
        (-2, 3) => ("i-c", 0, "B"),
        (0, 3) => ("i-a", 1, "h-B"),
        (0, 4) => ("ii", 0, "B"),
        (2, 5) => ("i-c", 2, "2h-B"),
        (4, 6) => ("iii", 0, "B"),
        _ => return Err(TheoremError::NotAcm(b.clone())),
    };
    let bp = if k == 0 {
        b.clone()
    } else {
        lattice.ample().checked_scale(k)?.checked_sub(b)?
    };
    let h = lattice.ample().coords();
    let det = h[0] as i128 * bp.0[1] as i128 - h[1] as i128 * bp.0[0] as i128;
    if det.abs() != 1 {
        return Err(TheoremError::NotBasis(bp));
    }
    Ok(Frame {
        preset: preset.into(),
        b: bp,
        rule: rule.into(),
    })
}

/// Shipped scripts living on a preset's lattice, in frame coordinates.
pub fn frame_scripts(preset: &str) -> Result<Vec<DerivationScript>> {
    let spec = case_preset(preset)?;
    Ok(builtin_scripts()
        .into_iter()
        .filter(|s| s.lattice.gram() == spec.lattice.gram())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowT {
    pub t: i64,
    /// `t * B'`, the class modulo `h`.
    pub class: DivClass,
    pub via: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub s: i64,
    pub t: i64,
    pub class: DivClass,
    pub script: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Supporting {
    pub tag: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TheoremStatus {
    Verified,
    Incomplete,
}

impl fmt::Display for TheoremStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremStatus::Verified => "VERIFIED",
            TheoremStatus::Incomplete => "INCOMPLETE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub b: DivClass,
    pub b_square: i64,
    pub h_dot_b: i64,
    pub case_tag: CaseTag,
    pub frame: Frame,
    pub closure: Vec<(DivClass, String)>,
    pub low_t: Vec<LowT>,
    pub survivors: Vec<Survivor>,
    pub supporting: Vec<Supporting>,
    pub unmatched: Vec<String>,
    pub status: TheoremStatus,
}

impl TheoremReport {
    pub fn is_verified(&self) -> bool {
        self.status == TheoremStatus::Verified
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "B = {}  (B^2 = {}, h.B = {}, table case {})\n",
            self.b, self.b_square, self.h_dot_b, self.case_tag
        );
        out.push_str(&format!(
            "frame: B' = {} ({}), case list {}\n",
            self.frame.b, self.frame.rule, self.frame.preset
        ));
        out.push_str("companion closure:");
        for (c, r) in &self.closure {
            out.push_str(&format!(" {c}[{r}]"));
        }
        out.push('\n');
        for l in &self.low_t {
            out.push_str(&format!(
                "  |t| <= 1: t = {:>2}  {}  {}\n",
                l.t,
                l.class,
                l.via.as_deref().unwrap_or("UNRESOLVED")
            ));
        }
        for s in &self.survivors {
            out.push_str(&format!(
                "  survivor (s, t) = ({}, {})  C = {}  {}\n",
                s.s,
                s.t,
                s.class,
                s.script.as_deref().unwrap_or("UNMATCHED")
            ));
            if let Some(n) = &s.note {
                out.push_str(&format!("    {n}\n"));
            }
        }
        for s in &self.supporting {
            out.push_str(&format!(
                "  supporting {}: {}\n",
                s.tag,
                if s.ok { "Success" } else { "FAILED" }
            ));
        }
        for u in &self.unmatched {
            out.push_str(&format!("  unmatched: {u}\n"));
        }
        out.push_str(&format!("{}\n", self.status));
        out
    }
}

const CLOSURE_CAP: usize = 64;

/// `B` together with everything reachable through companions, negations
/// included but not expanded.
fn companion_closure(
    lattice: &Lattice,
    b: &DivClass,
    assumptions: &[Assumption],
) -> Result<Vec<(DivClass, String)>> {
    let mut out = vec![(b.clone(), "B".to_string())];
    let mut k = 0;
    while k < out.len() && out.len() < CLOSURE_CAP {
        let cur = out[k].0.clone();
        k += 1;
        if lattice.degree(&cur)? <= 0 {
            continue;
        }
        let cls = is_initialized_acm(lattice, &cur, assumptions)?;
        if !cls.is_acm() {
            continue;
        }
        for (c, rule) in acm_companions(lattice, &cur, &cls, assumptions)? {
            if !out.iter().any(|(d, _)| d == &c) {
                out.push((c, rule));
            }
        }
    }
    Ok(out)
}

/// Replays the necessity direction for the aCM class `b`.
pub fn verify_theorem_necessity(
    lattice: &Lattice,
    assumptions: &[Assumption],
    b: &DivClass,
) -> Result<TheoremReport> {
    let fr = frame(lattice, b)?;
    let cls = is_initialized_acm(lattice, b, assumptions)?;
    if !cls.is_acm() {
        return Err(TheoremError::NotAcm(b.clone()));
    }
    let spec = case_preset(&fr.preset)?;
    let frame_lat = fr.lattice(lattice)?;
    if frame_lat.gram() != spec.lattice.gram() {
        return Err(TheoremError::FrameMismatch {
            found: frame_lat.gram().to_vec(),
            expected: spec.lattice.gram().to_vec(),
        });
    }
    let mut unmatched = Vec::new();

    let closure = companion_closure(lattice, b, assumptions)?;
    // Twisting by h preserves aCM, so only the B'-coordinate of a class matters.
    let mut low_t = Vec::new();
    for t in -1..=1 {
        let class = fr.b.checked_scale(t)?;
        let via = if t == 0 {
            Some("O(sh)".to_string())
        } else {
            closure
                .iter()
                .find(|(c, _)| same_mod_h(lattice, c, &class))
                .map(|(c, r)| format!("{r}: {c}"))
        };
        if via.is_none() {
            unmatched.push(format!("t = {t}: {class} is not a companion modulo h"));
        }
        low_t.push(LowT { t, class, via });
    }

    let scripts = frame_scripts(&fr.preset)?;
    let mut runs: BTreeMap<String, bool> = BTreeMap::new();
    for s in &scripts {
        let ok = matches!(run_script(s), Ok(r) if r.status == Overall::Success);
        runs.insert(s.tag.clone(), ok);
    }

    let mut survivors = Vec::new();
    for (s, t) in enumerate_case(&spec)? {
        let class = fr.class_at(lattice, s, t)?;
        let mut note = None;
        let mut script = None;
        for sc in scripts.iter().filter(|sc| {
            sc.conclusion == Conclusion::Contradiction
                && sc.subject.as_ref().map(|c| c.0.as_slice()) == Some(&[s, t][..])
        }) {
            if !runs[&sc.tag] {
                note = Some(format!("{} does not verify", sc.tag));
                continue;
            }
            match missing_assumption(lattice, &fr, sc, assumptions)? {
                Some(m) => note = Some(format!("{} needs {m}", sc.tag)),
                None => {
                    script = Some(sc.tag.clone());
                    note = None;
                    break;
                }
            }
        }
        if script.is_none() {
            unmatched.push(format!("survivor ({s}, {t}) = {class}"));
        }
        survivors.push(Survivor {
            s,
            t,
            class,
            script,
            note,
        });
    }

    let supporting: Vec<Supporting> = scripts
        .iter()
        .filter(|s| s.subject.is_none())
        .map(|s| Supporting {
            tag: s.tag.clone(),
            ok: runs[&s.tag],
        })
        .collect();
    for s in supporting.iter().filter(|s| !s.ok) {
        unmatched.push(format!("supporting script {} fails", s.tag));
    }

    let status = if unmatched.is_empty() {
        TheoremStatus::Verified
    } else {
        TheoremStatus::Incomplete
    };
    Ok(TheoremReport {
        b: b.clone(),
        b_square: lattice.self_int(b)?,
        h_dot_b: lattice.degree(b)?,
        case_tag: cls.case_tag,
        frame: fr,
        closure,
        low_t,
        survivors,
        supporting,
        unmatched,
        status,
    })
}

// Both classes differ by a multiple of h.
fn same_mod_h(lattice: &Lattice, a: &DivClass, b: &DivClass) -> bool {
    let Ok(d) = a.checked_sub(b) else {
        return false;
    };
    let h = lattice.ample().coords();
    let cross = h[0] as i128 * d.0[1] as i128 - h[1] as i128 * d.0[0] as i128;
    cross == 0
}

// A script assumption, moved into lattice coordinates, that the caller's
// assumptions do not back up.
fn missing_assumption(
    lattice: &Lattice,
    fr: &Frame,
    sc: &DerivationScript,
    assumptions: &[Assumption],
) -> Result<Option<String>> {
    for a in &sc.assumptions {
        let c = fr.class_at(lattice, a.subject.0[0], a.subject.0[1])?;
        let v = effectivity(lattice, &c, assumptions)?.value;
        let want = if a.kind.implies_effective() {
            Effectivity::Effective
        } else {
            Effectivity::Empty
        };
        if v != want {
            return Ok(Some(format!("{:?} {}", a.kind, c)));
        }
    }
    Ok(None)
}
